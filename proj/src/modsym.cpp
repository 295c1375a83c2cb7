#include "bsd2/modsym.hpp"

#include <cmath>
#include <numeric>

#include "bsd2/errors.hpp"
#include "bsd2/lseries.hpp"

namespace bsd2 {

namespace {

long lmod(long a, long m) {
    if (m == 1) return 0;
    const long r = a % m;
    return r < 0 ? r + m : r;
}

long ext_gcd(long a, long b, long& x, long& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return std::labs(a);
    }
    long x1, y1;
    const long g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Nearest integer to a/b, ties away from zero.
long round_quotient(long a, long b) {
    const long sign = ((a < 0) != (b < 0)) ? -1 : 1;
    const long na = std::labs(a), nb = std::labs(b);
    return sign * ((2 * na + nb) / (2 * nb));
}

std::pair<long, long> normalize_cusp(long num, long den) {
    if (den == 0) return {1, 0};
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long g = std::gcd(num, den);
    return {num / g, den / g};
}

Rational rational_gcd(const Rational& a, const Rational& b) {
    if (a == 0) return abs(b);
    if (b == 0) return abs(a);
    Integer num, den;
    const Integer x = a.get_num() * b.get_den(), y = b.get_num() * a.get_den();
    mpz_gcd(num.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    den = a.get_den() * b.get_den();
    Rational g(num, den);
    g.canonicalize();
    return g;
}

Rational dot(const QVector& a, const QVector& b) {
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

}  // namespace

bool cusps_equivalent(long p1, long q1, long p2, long q2, long N) {
    auto inverse_numerator = [](long p, long q) -> long {
        if (q == 0) return 1;
        if (q == 1) return 0;
        return inverse_mod(p, q);
    };
    const long s1 = inverse_numerator(p1, q1), s2 = inverse_numerator(p2, q2);
    const long g = std::gcd(q1 * q2, N);
    return lmod(s1 * q2 - s2 * q1, g) == 0;
}

ManinSymbolSpace::ManinSymbolSpace(long level, long level_cap) : N_(level) {
    if (level < 1) throw PreconditionViolated("level must be positive");
    if (level > level_cap)
        throw LevelTooLarge("level " + std::to_string(level) + " exceeds cap " +
                            std::to_string(level_cap));
    const long N = N_;

    // Projective line: the lexicographically first member of each unit orbit
    // represents its class.
    std::vector<long> units;
    for (long u = 0; u < N; ++u)
        if (std::gcd(u, N) == 1) units.push_back(u);
    if (N == 1) units = {0};
    index_.assign(static_cast<size_t>(N * N), -1);
    for (long c = 0; c < N; ++c) {
        for (long d = 0; d < N; ++d) {
            if (index_[c * N + d] >= 0 || std::gcd(std::gcd(c, d), N) != 1) continue;
            const long id = static_cast<long>(symbols_.size());
            symbols_.emplace_back(c, d);
            for (long u : units) index_[lmod(u * c, N) * N + lmod(u * d, N)] = id;
        }
    }
    const long n = symbol_count();

    // Two-term relations pair symbols with opposite signs.
    std::vector<long> gen_of(n, -1);
    std::vector<int> gen_sign(n, 0);
    long gens = 0;
    for (long i = 0; i < n; ++i) {
        const auto [c, d] = symbols_[i];
        const long j = index(d, -c);
        if (j == i || gen_of[i] >= 0) continue;
        gen_of[i] = gen_of[j] = gens++;
        gen_sign[i] = 1;
        gen_sign[j] = -1;
    }

    // Three-term relations over the generators.
    QMatrix rel;
    std::vector<bool> seen(n, false);
    for (long i = 0; i < n; ++i) {
        if (seen[i]) continue;
        const auto [c, d] = symbols_[i];
        const long j = index(d, -c - d);
        const auto [c2, d2] = symbols_[j];
        const long k = index(d2, -c2 - d2);
        seen[i] = seen[j] = seen[k] = true;
        QVector row(gens, Rational(0));
        // Orbits have size 1 (relation 3x = 0) or 3.
        const std::vector<long> orbit = i == j ? std::vector<long>{i} : std::vector<long>{i, j, k};
        for (long t : orbit)
            if (gen_of[t] >= 0) row[gen_of[t]] += gen_sign[t];
        bool nonzero = false;
        for (const auto& v : row) nonzero = nonzero || v != 0;
        if (nonzero) rel.push_back(std::move(row));
    }
    const auto pivots = rref(rel, static_cast<size_t>(gens));
    std::vector<long> pivot_row(gens, -1);
    for (size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<long>(r);
    std::vector<long> free_pos(gens, -1);
    long dim = 0;
    for (long g = 0; g < gens; ++g)
        if (pivot_row[g] < 0) free_pos[g] = dim++;

    std::vector<QVector> gen_coords(gens, QVector(dim, Rational(0)));
    for (long g = 0; g < gens; ++g) {
        if (free_pos[g] >= 0) {
            gen_coords[g][free_pos[g]] = 1;
        } else {
            const QVector& row = rel[pivot_row[g]];
            for (long f = 0; f < gens; ++f)
                if (free_pos[f] >= 0 && row[f] != 0) gen_coords[g][free_pos[f]] = -row[f];
        }
    }
    coords_.assign(n, QVector(dim, Rational(0)));
    basis_symbols_.assign(dim, -1);
    for (long i = 0; i < n; ++i) {
        if (gen_of[i] < 0) continue;
        coords_[i] = gen_coords[gen_of[i]];
        if (gen_sign[i] < 0)
            for (auto& v : coords_[i]) v = -v;
        const long f = free_pos[gen_of[i]];
        if (f >= 0 && gen_sign[i] > 0) basis_symbols_[f] = i;
    }

    // Boundary: lift (c:d) to SL₂(ℤ) and record the cusp classes of b/d, a/c.
    edges_.resize(n);
    for (long i = 0; i < n; ++i) {
        long c = symbols_[i].first, d = symbols_[i].second;
        if (c == 0) c = N;
        while (std::gcd(c, d) != 1) d += N;
        long x, y;
        ext_gcd(d, c, x, y);  // x·d + y·c = 1
        const long a = x, b = -y;
        const auto end = normalize_cusp(a, c);
        const auto start = normalize_cusp(b, d);
        edges_[i] = {cusp_class(start.first, start.second), cusp_class(end.first, end.second)};
    }
    cuspidal_dim_ = dim - static_cast<long>(rank(boundary_matrix(), static_cast<size_t>(dim)));
}

long ManinSymbolSpace::index(long c, long d) const {
    const long id = index_[lmod(c, N_) * N_ + lmod(d, N_)];
    if (id < 0) throw PreconditionViolated("(c:d) not in the projective line");
    return id;
}

long ManinSymbolSpace::cusp_class(long num, long den) {
    for (size_t i = 0; i < cusps_.size(); ++i)
        if (cusps_equivalent(cusps_[i].first, cusps_[i].second, num, den, N_))
            return static_cast<long>(i);
    cusps_.emplace_back(num, den);
    return static_cast<long>(cusps_.size()) - 1;
}

QMatrix ManinSymbolSpace::boundary_matrix() const {
    QMatrix B = zero_matrix(cusps_.size(), basis_symbols_.size());
    for (size_t j = 0; j < basis_symbols_.size(); ++j) {
        const auto [start, end] = edges_[basis_symbols_[j]];
        B[end][j] += 1;
        B[start][j] -= 1;
    }
    return B;
}

std::vector<std::array<long, 4>> ManinSymbolSpace::heilbronn(long p) {
    std::vector<std::array<long, 4>> out = {{1, 0, 0, p}};
    if (p == 2) {
        out.push_back({2, 0, 0, 1});
        out.push_back({2, 1, 0, 1});
        out.push_back({1, 0, 1, 2});
        return out;
    }
    for (long r = -(p / 2); r <= p / 2; ++r) {
        long x1 = p, x2 = -r, y1 = 0, y2 = 1, a = -p, b = r;
        out.push_back({x1, x2, y1, y2});
        while (b != 0) {
            const long q = round_quotient(a, b);
            const long c = a - b * q;
            a = -b;
            b = c;
            const long x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            const long y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push_back({x1, x2, y1, y2});
        }
    }
    return out;
}

QMatrix ManinSymbolSpace::hecke_matrix(long p) const {
    if (N_ % p == 0) throw PreconditionViolated("Hecke operator at a bad prime");
    const size_t dim = basis_symbols_.size();
    QMatrix T = zero_matrix(dim, dim);
    const auto H = heilbronn(p);
    for (size_t j = 0; j < dim; ++j) {
        const auto [u, v] = symbols_[basis_symbols_[j]];
        QVector col(dim, Rational(0));
        for (const auto& h : H) {
            const long id = index(u * h[0] + v * h[2], u * h[1] + v * h[3]);
            const QVector& cv = coords_[id];
            for (size_t i = 0; i < dim; ++i)
                if (cv[i] != 0) col[i] += cv[i];
        }
        for (size_t i = 0; i < dim; ++i) T[i][j] = col[i];
    }
    return T;
}

QMatrix ManinSymbolSpace::star_matrix() const {
    const size_t dim = basis_symbols_.size();
    QMatrix S = zero_matrix(dim, dim);
    for (size_t j = 0; j < dim; ++j) {
        const auto [c, d] = symbols_[basis_symbols_[j]];
        const QVector& cv = coords_[index(-c, d)];
        for (size_t i = 0; i < dim; ++i) S[i][j] = cv[i];
    }
    return S;
}

std::vector<long> ManinSymbolSpace::path_symbols(long k, long m) const {
    k = lmod(k, m);
    std::vector<long> out;
    if (k == 0) return out;
    const long g = std::gcd(k, m);
    long num = k / g, den = m / g;
    // Convergents p_j/q_j with p_{-2}/q_{-2} = 0/1 and p_{-1}/q_{-1} = 1/0.
    long q_prev2 = 1, q_prev = 0;
    long sign = 1;  // (−1)^{j−1} for j = −1
    out.push_back(index(sign * q_prev, q_prev2));
    while (den != 0) {
        const long a = num / den;  // num, den ≥ 0
        const long r = num - a * den;
        num = den;
        den = r;
        const long q = a * q_prev + q_prev2;
        sign = -sign;
        out.push_back(index(sign * q, q_prev));
        q_prev2 = q_prev;
        q_prev = q;
    }
    return out;
}

std::string to_string(ParityMode p) {
    return p == ParityMode::half_integral ? "half-integral" : "integral";
}

namespace {

Rational raw_path_value(const EigenFunctional& psi, long k, long m) {
    Rational s = 0;
    for (long id : psi.space->path_symbols(k, m)) s += psi.symbol_values[id];
    return s;
}

// Fundamental cycles of a spanning forest of the cusp graph generate the
// integral cycles; the gcd of ψ on them is the lattice generator.
Rational homology_gcd(const ManinSymbolSpace& space, const QVector& values) {
    const long cusps = space.cusp_count();
    std::vector<std::vector<std::pair<long, long>>> adj(cusps);  // (neighbour, symbol)
    for (long i = 0; i < space.symbol_count(); ++i) {
        const auto [s, t] = space.symbol_boundary(i);
        adj[s].push_back({t, i});
        adj[t].push_back({s, i});
    }
    std::vector<bool> visited(cusps, false);
    std::vector<Rational> pot(cusps, Rational(0));
    std::vector<bool> tree_edge(space.symbol_count(), false);
    for (long root = 0; root < cusps; ++root) {
        if (visited[root]) continue;
        visited[root] = true;
        std::vector<long> stack = {root};
        while (!stack.empty()) {
            const long v = stack.back();
            stack.pop_back();
            for (const auto& [w, i] : adj[v]) {
                if (visited[w]) continue;
                visited[w] = true;
                tree_edge[i] = true;
                const auto [s, t] = space.symbol_boundary(i);
                pot[w] = pot[v];
                if (s == v)
                    pot[w] += values[i];
                else
                    pot[w] -= values[i];
                stack.push_back(w);
            }
        }
    }
    Rational g = 0;
    for (long i = 0; i < space.symbol_count(); ++i) {
        if (tree_edge[i]) continue;
        const auto [s, t] = space.symbol_boundary(i);
        g = rational_gcd(g, values[i] - (pot[t] - pot[s]));
    }
    return g;
}

long good_odd_prime_after(long start, long N) {
    for (long p = start + 1;; ++p)
        if (p > 2 && is_prime(p) && N % p != 0) return p;
}

}  // namespace

EigenFunctional eigen_functional(std::shared_ptr<const ManinSymbolSpace> space,
                                 const CurveModel& E, int sign) {
    const long N = space->level();
    if (conductor(E) != N)
        throw PreconditionViolated("curve conductor does not match the symbol level");
    const size_t dim = static_cast<size_t>(space->dimension());
    EigenFunctional psi{space, E, sign};
    psi.parity = E.discriminant() < 0 ? ParityMode::half_integral : ParityMode::integral;
    psi.coefficients = std::make_shared<CoefficientCache>(E);

    // Dual eigenvector: ψ·(T_p − a_p) = 0 and ψ·(Star − sign) = 0.
    QMatrix stacked;
    auto append_transposed = [&](QMatrix A) {
        for (auto& row : transpose(A)) stacked.push_back(std::move(row));
    };
    {
        QMatrix St = space->star_matrix();
        for (size_t i = 0; i < dim; ++i) St[i][i] -= sign;
        append_transposed(St);
    }
    std::vector<QVector> kernel;
    for (long p : primes_up_to(400)) {
        if (N % p == 0) continue;
        QMatrix T = space->hecke_matrix(p);
        const long ap = ap_count(E, p).a_q;
        for (size_t i = 0; i < dim; ++i) T[i][i] -= ap;
        append_transposed(T);
        kernel = nullspace(stacked, dim);
        if (kernel.size() <= 1) break;
    }
    if (kernel.size() != 1)
        throw EigenspaceNotFound("a_p sequence of " + E.str() + " cuts out a " +
                                 std::to_string(kernel.size()) + "-dimensional space at level " +
                                 std::to_string(N));
    psi.basis_values = kernel[0];
    psi.symbol_values.resize(space->symbol_count());
    for (long i = 0; i < space->symbol_count(); ++i)
        psi.symbol_values[i] = dot(psi.basis_values, space->coordinates(i));

    const Rational g = homology_gcd(*space, psi.symbol_values);
    if (g == 0) throw EigenspaceNotFound("eigen-functional vanishes on integral homology");
    for (auto& v : psi.basis_values) v /= g;
    for (auto& v : psi.symbol_values) v /= g;
    if (sign < 0) return psi;

    // Calibrate −Σ_k ψ(k/q₀) against N_{q₀}·(L/Ω⁺) and verify at a second prime.
    const mpfr_prec_t bits = 128;
    const CoefficientSource src = [cache = psi.coefficients](long b) { return cache->upto(b); };
    const LSeriesValue L = l_value_at_1(src, Integer(N), Real::pow2(-80, bits));
    const Real ratio = L.value / periods(E, bits).omega_plus;
    if (abs(ratio) < Real(1e-20, bits))
        throw CalibrationMismatch("central value vanishes; cannot calibrate");
    const long expected = psi.parity == ParityMode::half_integral ? 2 : 1;

    auto symbol_sum = [&](long q) {
        Rational s = 0;
        for (long k = 1; k <= q; ++k) s += raw_path_value(psi, k, q);
        return s;
    };
    const long q0 = good_odd_prime_after(2, N);
    const long Nq0 = *ap_count(E, q0).N_q;
    const Real lambda_num = -Real(symbol_sum(q0), bits) / (ratio * Nq0);
    const long lambda = std::lround(lambda_num.to_double());
    const double residual = std::fabs(lambda_num.to_double() - static_cast<double>(lambda));
    if (residual > 1e-9 || std::labs(lambda) != expected)
        throw CalibrationMismatch("calibration factor " + lambda_num.str(20) + " at q = " +
                                  std::to_string(q0) + ", expected ±" +
                                  std::to_string(expected));
    psi.scale = lambda;
    psi.calibration_prime = q0;
    psi.calibration_residual = residual;
    psi.l_over_omega = -symbol_sum(q0) / psi.scale / Nq0;

    const long q1 = good_odd_prime_after(q0, N);
    const long Nq1 = *ap_count(E, q1).N_q;
    const Real predicted = -Real(symbol_sum(q1) / psi.scale, bits);
    const Real measured = ratio * Nq1;
    if (!(abs(predicted - measured) < Real(1e-9, bits)))
        throw CalibrationMismatch("verification at q = " + std::to_string(q1) + " gives " +
                                  predicted.str(20) + " vs " + measured.str(20));
    psi.verification_prime = q1;
    return psi;
}

Rational eval_symbol(const EigenFunctional& psi, long k, long m) {
    if (m < 1 || std::gcd(m, psi.space->level()) != 1)
        throw PreconditionViolated("m must be positive and coprime to the level");
    return raw_path_value(psi, k, m) / psi.scale;
}

Rational sum_S(const EigenFunctional& psi, long m) {
    Rational s = 0;
    for (long k = 1; k <= m; ++k) s += eval_symbol(psi, k, m);
    return s;
}

Rational sum_S_prime(const EigenFunctional& psi, long m) {
    Rational s = 0;
    for (long k = 1; k <= m; ++k)
        if (std::gcd(k, m) == 1) s += eval_symbol(psi, k, m);
    return s;
}

Rational sum_T_prime(const EigenFunctional& psi, long d, long m) {
    if (m % d != 0) throw PreconditionViolated("d must divide m");
    const QuadChar chi(d);
    Rational s = 0;
    for (long k = 1; k <= m; ++k) {
        if (std::gcd(k, m) != 1) continue;
        const int c = chi(k);
        if (c != 0) s += c * eval_symbol(psi, k, m);
    }
    return s;
}

std::vector<long> divisors(long m) {
    std::vector<long> out;
    for (long d = 1; d <= m; ++d)
        if (m % d == 0) out.push_back(d);
    return out;
}

long omega_count(long m) { return m == 1 ? 0 : static_cast<long>(prime_divisors(m).size()); }

SymbolSums symbol_sums(const EigenFunctional& psi, long m) {
    const QuadChar chi(m);  // validates odd, squarefree, 1 mod 4
    SymbolSums out;
    out.m = m;
    out.S = sum_S(psi, m);
    out.S_prime = sum_S_prime(psi, m);
    out.T = 0;
    for (long k = 1; k <= m; ++k) {
        const int c = chi(k);
        if (c != 0) out.T += c * eval_symbol(psi, k, m);
    }
    for (long d : divisors(m)) out.T_prime[d] = sum_T_prime(psi, d, m);
    return out;
}

void enforce(const IdentityReport& r) {
    if (r.passed) return;
    const std::string msg = r.identity + " failed for m = " + std::to_string(r.m) +
                            (r.parameters.empty() ? "" : " (" + r.parameters + ")") +
                            ": lhs = " + r.lhs + ", rhs = " + r.rhs;
    if (r.identity == "integrality") throw IntegralityViolated(msg);
    if (r.identity == "twist_cross_check") throw CrossCheckFailed(msg);
    throw IdentityViolated(msg);
}

namespace {

IdentityReport compare(std::string name, long m, const Rational& lhs, const Rational& rhs,
                       std::string params = "") {
    IdentityReport r;
    r.identity = std::move(name);
    r.m = m;
    r.parameters = std::move(params);
    r.lhs = to_string(lhs);
    r.rhs = to_string(rhs);
    r.passed = lhs == rhs;
    return r;
}

const Rational& calibrated(const EigenFunctional& psi) {
    if (!psi.l_over_omega) throw PreconditionViolated("functional is not calibrated");
    return *psi.l_over_omega;
}

void require_admissible(const EigenFunctional& psi, long m) {
    if (m < 1 || m % 2 == 0 || !is_squarefree(m) || std::gcd(m, psi.space->level()) != 1)
        throw PreconditionViolated("m must be odd, squarefree and coprime to the level");
}

}  // namespace

IdentityReport check_ms1(const EigenFunctional& psi, long m) {
    if (std::gcd(m, psi.space->level()) != 1) throw PreconditionViolated("m shares a factor with N");
    const auto an = psi.coefficients->upto(m);
    long sigma = 0;
    Rational rhs = 0;
    for (long l : divisors(m)) {
        sigma += l;
        rhs -= sum_S(psi, l);
    }
    const Rational lhs = (sigma - (*an)[m]) * calibrated(psi);
    return compare("ms1", m, lhs, rhs);
}

IdentityReport check_sum_decomposition(const EigenFunctional& psi, long m) {
    require_admissible(psi, m);
    const long r = omega_count(m);
    Rational lhs = 0, rhs = 0;
    for (long l : divisors(m)) lhs += sum_S(psi, l);
    for (long n : divisors(m)) {
        const long d = omega_count(n);
        if (d == 0) continue;
        rhs += Rational(Integer(1) << static_cast<unsigned>(r - d)) * sum_S_prime(psi, n);
    }
    return compare("sum_decomposition", m, lhs, rhs);
}

IdentityReport check_bn_identity(const EigenFunctional& psi, long m) {
    require_admissible(psi, m);
    const auto primes = prime_divisors(m);
    const long r = static_cast<long>(primes.size());
    Rational lhs = calibrated(psi);
    for (long q : primes) lhs *= *ap_count(psi.curve, q).N_q;
    Rational rhs = 0;
    for (long n : divisors(m)) {
        if (n == 1) continue;
        Integer b = (r % 2 == 0) ? 1 : -1;
        for (long q : primes)
            if ((m / n) % q == 0) b *= (1 - q);
        rhs += Rational(b) * sum_S_prime(psi, n);
    }
    return compare("bn_identity", m, lhs, rhs);
}

IdentityReport check_s_prime_valuation(const EigenFunctional& psi, long m) {
    require_admissible(psi, m);
    const Val2 lhs = val2(sum_S_prime(psi, m));
    const Val2 rhs = val2(calibrated(psi)) + Val2::of(omega_count(m));
    IdentityReport rep;
    rep.identity = "s_prime_valuation";
    rep.m = m;
    rep.lhs = lhs.str();
    rep.rhs = rhs.str();
    rep.passed = lhs == rhs;
    return rep;
}

std::vector<IdentityReport> check_tprime_recursion(const EigenFunctional& psi, long d, long m) {
    require_admissible(psi, m);
    if (d <= 1 || m % d != 0) throw PreconditionViolated("need d > 1 dividing m");
    std::vector<IdentityReport> out;
    if (d == m) {
        IdentityReport rep;
        rep.identity = "tprime_recursion";
        rep.m = m;
        rep.parameters = "d=" + std::to_string(d) + " vacuous";
        rep.passed = true;
        out.push_back(rep);
        return out;
    }
    const QuadChar chi(d);
    const Rational full = sum_T_prime(psi, d, m);
    for (long q : prime_divisors(m / d)) {
        const long aq = ap_count(psi.curve, q).a_q;
        const Rational rhs = Rational(aq - 2 * chi(q)) * sum_T_prime(psi, d, m / q);
        out.push_back(compare("tprime_recursion", m, full, rhs,
                              "d=" + std::to_string(d) + " q=" + std::to_string(q)));
    }
    return out;
}

IntegralityResult check_integrality(const EigenFunctional& psi, long m) {
    require_admissible(psi, m);
    const long r = omega_count(m);
    Rational total = 0;
    for (long d : divisors(m)) total += sum_T_prime(psi, d, m);
    IntegralityResult out;
    out.power_of_two = psi.parity == ParityMode::half_integral ? r : r + 1;
    out.psi_m = total / Rational(Integer(1) << static_cast<unsigned>(out.power_of_two));
    out.report.identity = "integrality";
    out.report.m = m;
    out.report.parameters = "divisor=2^" + std::to_string(out.power_of_two);
    out.report.lhs = to_string(out.psi_m);
    out.report.rhs = "integer";
    out.report.passed = out.psi_m.get_den() == 1;
    return out;
}

std::vector<IdentityReport> identity_suite(const EigenFunctional& psi, long m) {
    std::vector<IdentityReport> out = {check_ms1(psi, m), check_sum_decomposition(psi, m),
                                       check_bn_identity(psi, m)};
    bool odd_index = true;
    for (long q : prime_divisors(m)) {
        const auto N_q = ap_count(psi.curve, q).N_q;
        odd_index = odd_index && N_q && valuation(Integer(*N_q), 2) == 1;
    }
    if (odd_index) out.push_back(check_s_prime_valuation(psi, m));
    for (long d : divisors(m)) {
        if (d == 1) continue;
        for (auto& r : check_tprime_recursion(psi, d, m)) out.push_back(std::move(r));
    }
    out.push_back(check_integrality(psi, m).report);
    return out;
}

TwistCrossCheck twisted_l_from_symbols(const EigenFunctional& psi, long m, mpfr_prec_t bits) {
    const QuadChar chi(m);
    if (std::gcd(m, psi.space->level()) != 1) throw PreconditionViolated("m shares a factor with N");
    TwistCrossCheck out;
    out.T_m = 0;
    for (long k = 1; k <= m; ++k) {
        const int c = chi(k);
        if (c != 0) out.T_m += c * eval_symbol(psi, k, m);
    }
    const Real omega = periods(psi.curve, bits).omega_plus;
    out.symbol_side = Real(out.T_m, bits) * omega / sqrt(Real(m, bits));

    const CurveModel twist = quadratic_twist(psi.curve, m);
    const Integer Nt = conductor(twist);
    const CoefficientSource src = twisted_source(psi.coefficients, m);
    out.numeric_side = Real(bits);
    out.tolerance = Real::pow2(-60, bits);
    try {
        out.numeric_side = l_value_at_1(src, Nt, Real::pow2(-70, bits)).value;
    } catch (const SignMinusOne&) {
        out.numeric_side = Real(0L, bits);
    }
    const Real diff = abs(out.symbol_side - out.numeric_side);
    out.report.identity = "twist_cross_check";
    out.report.m = m;
    out.report.lhs = out.symbol_side.str(25);
    out.report.rhs = out.numeric_side.str(25);
    out.report.parameters = "T_m=" + to_string(out.T_m) + " tol=" + out.tolerance.str(3);
    out.report.passed = diff <= out.tolerance;
    return out;
}

}  // namespace bsd2
