#include "bsd2/curve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "bsd2/errors.hpp"
#include "pointcount.hpp"

namespace bsd2 {

// ---------------------------------------------------------------- transforms

Transform Transform::compose(const Transform& f, const Transform& g) {
    Transform w;
    w.u = f.u * g.u;
    w.r = f.r + f.u * f.u * g.r;
    w.s = f.s + f.u * g.s;
    w.t = f.t + f.u * f.u * f.s * g.r + f.u * f.u * f.u * g.t;
    return w;
}

CurveModel::CurveModel(Integer a1, Integer a2, Integer a3, Integer a4, Integer a6)
    : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)} {
    const auto& [A1, A2, A3, A4, A6] = a_;
    b2_ = A1 * A1 + 4 * A2;
    b4_ = 2 * A4 + A1 * A3;
    b6_ = A3 * A3 + 4 * A6;
    b8_ = A1 * A1 * A6 + 4 * A2 * A6 - A1 * A3 * A4 + A2 * A3 * A3 - A4 * A4;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
    disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
    if (disc_ == 0) throw SingularCurve("singular Weierstrass model " + str());
}

CurveModel::CurveModel(const std::array<long, 5>& a)
    : CurveModel(Integer(a[0]), Integer(a[1]), Integer(a[2]), Integer(a[3]), Integer(a[4])) {}

Rational CurveModel::j_invariant() const {
    Rational j(c4_ * c4_ * c4_, disc_);
    j.canonicalize();
    return j;
}

CurveModel CurveModel::transformed(const Transform& w) const {
    const Rational a1(a_[0]), a2(a_[1]), a3(a_[2]), a4(a_[3]), a6(a_[4]);
    const Rational &u = w.u, &r = w.r, &s = w.s, &t = w.t;
    if (u == 0) throw PreconditionViolated("transform with u = 0");
    const Rational u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    std::array<Rational, 5> out = {
        (a1 + 2 * s) / u,
        (a2 - s * a1 + 3 * r - s * s) / u2,
        (a3 + r * a1 + 2 * t) / u3,
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u4,
        (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / u6,
    };
    for (auto& q : out) {
        q.canonicalize();
        if (q.get_den() != 1) throw PreconditionViolated("transform leaves integral models: " + str());
    }
    return CurveModel(out[0].get_num(), out[1].get_num(), out[2].get_num(), out[3].get_num(),
                      out[4].get_num());
}

bool CurveModel::on_curve(const Rational& x, const Rational& y) const {
    const Rational lhs = y * y + Rational(a1()) * x * y + Rational(a3()) * y;
    const Rational rhs = x * x * x + Rational(a2()) * x * x + Rational(a4()) * x + Rational(a6());
    return lhs == rhs;
}

std::string CurveModel::str() const {
    std::ostringstream os;
    os << "[" << a_[0] << "," << a_[1] << "," << a_[2] << "," << a_[3] << "," << a_[4] << "]";
    return os.str();
}

CurveModel parse_curve(const std::string& text) {
    std::string cleaned;
    for (char ch : text) cleaned += (ch == '[' || ch == ']' || ch == ',') ? ' ' : ch;
    std::istringstream is(cleaned);
    std::vector<Integer> a;
    std::string tok;
    while (is >> tok) {
        Integer v;
        if (v.set_str(tok, 10) != 0) throw PreconditionViolated("not an integer: " + tok);
        a.push_back(v);
    }
    if (a.size() != 5) throw PreconditionViolated("expected five coefficients, got '" + text + "'");
    return CurveModel(a[0], a[1], a[2], a[3], a[4]);
}

std::string to_string(ReductionKind k) {
    switch (k) {
        case ReductionKind::good: return "good";
        case ReductionKind::split_multiplicative: return "split-multiplicative";
        case ReductionKind::nonsplit_multiplicative: return "nonsplit-multiplicative";
        case ReductionKind::additive: return "additive";
    }
    return "?";
}

// ------------------------------------------------------------ Tate's algorithm

namespace {

Integer pmod(const Integer& a, const Integer& p) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    return r;
}

Integer pinv(const Integer& a, const Integer& p) {
    Integer r, aa = pmod(a, p);
    if (!mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), p.get_mpz_t()))
        throw PreconditionViolated("non-invertible residue in Tate's algorithm");
    return r;
}

bool divides(const Integer& d, const Integer& a) { return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()); }

Integer exact_div(const Integer& a, const Integer& d) {
    Integer q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t());
    return q;
}

// Does a·T² + b·T + c have a root mod p?
bool quad_has_root(const Integer& a, const Integer& b, const Integer& c, const Integer& p) {
    const Integer A = pmod(a, p), B = pmod(b, p), C = pmod(c, p);
    if (A == 0) return B != 0 || C == 0;
    if (p == 2) return C == 0 || pmod(A + B + C, p) == 0;
    const Integer d = pmod(B * B - 4 * A * C, p);
    return d == 0 || kronecker(d, p) == 1;
}

using Poly = std::vector<Integer>;  // ascending coefficients mod p

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, const Integer& p) {
    trim(a);
    const Integer lead_inv = pinv(m.back(), p);
    while (a.size() >= m.size()) {
        const Integer c = pmod(a.back() * lead_inv, p);
        const size_t shift = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) a[shift + i] = pmod(a[shift + i] - c * m[i], p);
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, const Integer& p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, Integer(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    for (auto& v : c) v = pmod(v, p);
    return poly_mod(c, m, p);
}

Poly poly_gcd(Poly a, Poly b, const Integer& p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

// Number of distinct roots of T³ + b·T² + c·T + d mod p.
int cubic_root_count(const Integer& b, const Integer& c, const Integer& d, const Integer& p) {
    if (p < 1000000) {
        const long P = p.get_si();
        const long B = pmod(b, p).get_si(), C = pmod(c, p).get_si(), D = pmod(d, p).get_si();
        int n = 0;
        for (long x = 0; x < P; ++x) {
            const __int128 v = ((static_cast<__int128>(x) + B) * x + C) * x + D;
            if (v % P == 0) ++n;
        }
        return n;
    }
    const Poly f = {pmod(d, p), pmod(c, p), pmod(b, p), Integer(1)};
    Poly result = {Integer(1)}, base = {Integer(0), Integer(1)};
    Integer e = p;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = poly_mulmod(result, base, f, p);
        base = poly_mulmod(base, base, f, p);
        e >>= 1;
    }
    if (result.size() < 2) result.resize(2, Integer(0));
    result[1] = pmod(result[1] - 1, p);
    const Poly g = poly_gcd(f, result, p);
    return static_cast<int>(g.empty() ? 3 : g.size() - 1);
}

}  // namespace

TateOutput tate(const CurveModel& E0, const Integer& p) {
    CurveModel C = E0;
    Transform total;
    auto apply = [&](const Transform& w) {
        C = C.transformed(w);
        total = Transform::compose(total, w);
    };
    auto rst = [&](const Integer& r, const Integer& s, const Integer& t) {
        apply(Transform{Rational(1), Rational(r), Rational(s), Rational(t)});
    };
    const Integer p2 = p * p, p3 = p2 * p, p4 = p3 * p, p6 = p3 * p3;
    const Integer half = (p == 2) ? Integer(0) : pinv(2, p);

    auto finish = [&](const std::string& kod, long cp, ReductionKind kind, long f, long n) {
        TateOutput out{ReductionData{p, kod, cp, kind, f, n}, C, total};
        return out;
    };

    for (;;) {
        const long n = valuation(C.discriminant(), p);
        if (n == 0) return finish("I0", 1, ReductionKind::good, 0, 0);

        Integer r, t;
        if (p == 2) {
            if (divides(p, C.b2())) {
                r = pmod(C.a4(), p);
                t = pmod(r * (1 + C.a2() + C.a4()) + C.a6(), p);
            } else {
                r = pmod(C.a3(), p);
                t = pmod(r + C.a4(), p);
            }
        } else if (p == 3) {
            r = divides(p, C.b2()) ? pmod(-C.b6(), p) : pmod(-C.b2() * C.b4(), p);
            t = pmod(C.a1() * r + C.a3(), p);
        } else {
            if (divides(p, C.c4()))
                r = pmod(-pinv(12, p) * C.b2(), p);
            else
                r = pmod(-pinv(12 * C.c4(), p) * (C.c6() + C.b2() * C.c4()), p);
            t = pmod(-half * (C.a1() * r + C.a3()), p);
        }
        rst(r, 0, t);

        if (!divides(p, C.b2())) {
            if (quad_has_root(1, C.a1(), -C.a2(), p))
                return finish("I" + std::to_string(n), n, ReductionKind::split_multiplicative, 1, n);
            return finish("I" + std::to_string(n), n % 2 == 0 ? 2 : 1,
                          ReductionKind::nonsplit_multiplicative, 1, n);
        }
        if (!divides(p2, C.a6())) return finish("II", 1, ReductionKind::additive, n, n);
        if (!divides(p3, C.b8())) return finish("III", 2, ReductionKind::additive, n - 1, n);
        if (!divides(p3, C.b6())) {
            const long cp = quad_has_root(1, exact_div(C.a3(), p), -exact_div(C.a6(), p2), p) ? 3 : 1;
            return finish("IV", cp, ReductionKind::additive, n - 2, n);
        }

        Integer s;
        if (p == 2) {
            s = pmod(C.a2(), p);
            t = 2 * pmod(exact_div(C.a6(), 4), p);
        } else {
            s = pmod(-C.a1() * half, p);
            t = p * pmod(-exact_div(C.a3(), p) * half, p);
        }
        rst(0, s, t);

        const Integer b = exact_div(C.a2(), p), c = exact_div(C.a4(), p2), d = exact_div(C.a6(), p3);
        const Integer w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
        const Integer x = 3 * c - b * b;

        if (!divides(p, w)) {
            const long cp = 1 + cubic_root_count(b, c, d, p);
            return finish("I0*", cp, ReductionKind::additive, n - 4, n);
        }

        if (!divides(p, x)) {
            Integer rr;
            if (p == 2)
                rr = c;
            else if (p == 3)
                rr = b * c;
            else
                rr = (b * c - 9 * d) * pinv(2 * x, p);
            rst(p * pmod(rr, p), 0, 0);

            long ix = 3, iy = 3;
            Integer mx = p2, my = p2;
            long cp = 0;
            while (cp == 0) {
                Integer xa2 = exact_div(C.a2(), p), xa3 = exact_div(C.a3(), my),
                        xa6 = exact_div(C.a6(), mx * my);
                if (!divides(p, xa3 * xa3 + 4 * xa6)) {
                    cp = quad_has_root(1, xa3, -xa6, p) ? 4 : 2;
                    break;
                }
                Integer tt = my * (p == 2 ? pmod(xa6, p) : pmod(-xa3 * half, p));
                rst(0, 0, tt);
                my *= p;
                ++iy;
                xa2 = exact_div(C.a2(), p);
                const Integer xa4 = exact_div(C.a4(), p * mx);
                xa6 = exact_div(C.a6(), mx * my);
                if (!divides(p, xa4 * xa4 - 4 * xa2 * xa6)) {
                    cp = quad_has_root(xa2, xa4, xa6, p) ? 4 : 2;
                    break;
                }
                Integer r2 = mx * (p == 2 ? pmod(xa6 * xa2, p) : pmod(-xa4 * pinv(2 * xa2, p), p));
                rst(r2, 0, 0);
                mx *= p;
                ++ix;
            }
            const long m = ix + iy - 5;
            return finish("I" + std::to_string(m) + "*", cp, ReductionKind::additive, n - ix - iy + 1, n);
        }

        const Integer rtemp = (p == 3) ? Integer(-d) : Integer(-b * pinv(3, p));
        rst(p * pmod(rtemp, p), 0, 0);
        const Integer x3 = exact_div(C.a3(), p2), x6 = exact_div(C.a6(), p4);
        if (!divides(p, x3 * x3 + 4 * x6)) {
            const long cp = quad_has_root(1, x3, -x6, p) ? 3 : 1;
            return finish("IV*", cp, ReductionKind::additive, n - 6, n);
        }
        rst(0, 0, -p2 * pmod(p == 2 ? x6 : Integer(x3 * half), p));
        if (!divides(p4, C.a4())) return finish("III*", 2, ReductionKind::additive, n - 7, n);
        if (!divides(p6, C.a6())) return finish("II*", 1, ReductionKind::additive, n - 8, n);

        apply(Transform{Rational(p), Rational(0), Rational(0), Rational(0)});
    }
}

ReductionData reduction_data(const CurveModel& E, const Integer& p) { return tate(E, p).data; }

namespace {

// u = 1 change of variables to a1, a3 ∈ {0,1}, a2 ∈ {−1,0,1}.
Transform reduction_transform(const CurveModel& E) {
    const Integer& a1 = E.a1();
    const Integer s = -floor_div(a1, 2);
    const Integer k = E.a2() - s * a1 - s * s;
    const Integer r = -floor_div(k + 1, 3);
    const Integer t = -floor_div(E.a3() + r * a1, 2);
    return Transform{Rational(1), Rational(r), Rational(s), Rational(t)};
}

}  // namespace

MinimalModel minimal_model(const CurveModel& E) {
    CurveModel C = E;
    Transform total;
    for (const auto& [p, e] : factor(E.discriminant())) {
        if (e < 12) continue;
        TateOutput out = tate(C, p);
        C = out.minimal;
        total = Transform::compose(total, out.transform);
    }
    const Transform red = reduction_transform(C);
    C = C.transformed(red);
    total = Transform::compose(total, red);
    return {C, total};
}

std::vector<ReductionData> local_data(const CurveModel& E) {
    std::vector<ReductionData> out;
    for (const auto& [p, e] : factor(E.discriminant())) {
        ReductionData d = tate(E, p).data;
        if (d.kind != ReductionKind::good) out.push_back(d);
    }
    return out;
}

Integer conductor(const CurveModel& E) {
    Integer N = 1;
    for (const auto& d : local_data(E))
        for (long i = 0; i < d.conductor_exponent; ++i) N *= d.prime;
    return N;
}

CurveModel quadratic_twist(const CurveModel& E, const Integer& m) {
    if (m == 0 || squarefree_factor(m).second != 1)
        throw PreconditionViolated("twist parameter must be squarefree and nonzero");
    const CurveModel raw(Integer(0), Integer(0), Integer(0), -27 * E.c4() * m * m,
                         -54 * E.c6() * m * m * m);
    return minimal_model(raw).model;
}

// ------------------------------------------------------------ point counting

namespace {

long brute_force_count(const CurveModel& E, long p) {
    auto r = [p](const Integer& v) { return mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p)); };
    const long a1 = r(E.a1()), a2 = r(E.a2()), a3 = r(E.a3()), a4 = r(E.a4()), a6 = r(E.a6());
    long n = 1;
    for (long x = 0; x < p; ++x)
        for (long y = 0; y < p; ++y) {
            const long lhs = (y * y + a1 * x * y + a3 * y) % p;
            const long rhs = (((x + a2) * x + a4) % p * x + a6) % p;
            if (lhs == rhs) ++n;
        }
    return n;
}

// Odd p: #E(F_p) = p + 1 + Σ_x χ(4x³ + b2x² + 2b4x + b6), the cubic stepped by
// finite differences and χ read from a table of squares.
long character_sum_count(const CurveModel& E, long p, std::vector<int8_t>& chi) {
    chi.assign(static_cast<size_t>(p), -1);
    chi[0] = 0;
    for (long i = 1, sq = 1; i <= p / 2; ++i) {
        chi[static_cast<size_t>(sq)] = 1;
        sq += 2 * i + 1;
        sq %= p;
    }
    auto r = [p](const Integer& v) { return static_cast<long>(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p))); };
    const long b2 = r(E.b2()), b4 = r(E.b4()), b6 = r(E.b6());
    long f = b6;
    long d1 = (4 + b2 + 2 * b4) % p;
    long d2 = (24 + 2 * b2) % p;
    const long d3 = 24 % p;
    long sum = 0;
    for (long x = 0; x < p; ++x) {
        sum += chi[static_cast<size_t>(f)];
        f += d1;
        if (f >= p) f -= p;
        d1 += d2;
        if (d1 >= p) d1 -= p;
        d2 += d3;
        if (d2 >= p) d2 -= p;
    }
    return p + 1 + sum;
}

// Above this bound the group order is found by baby-step giant-step on the
// short model y² = x³ − 27c4·x − 54c6; below it the character sum is cheaper.
constexpr long bsgs_threshold = 300;

long fast_count(const CurveModel& E, long p, std::vector<int8_t>& scratch) {
    if (p <= 3) return brute_force_count(E, p);
    if (p > bsgs_threshold) {
        auto r = [p](const Integer& v) { return static_cast<long>(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p))); };
        const long a = (p - (27 * r(E.c4())) % p) % p;
        const long b = (p - (54 * r(E.c6())) % p) % p;
        if (auto n = detail::bsgs_point_count(a, b, p)) return *n;
    }
    return character_sum_count(E, p, scratch);
}

long good_ap(const CurveModel& E, long p, std::vector<int8_t>& scratch) {
    return p + 1 - fast_count(E, p, scratch);
}

long bad_ap(ReductionKind k) {
    switch (k) {
        case ReductionKind::split_multiplicative: return 1;
        case ReductionKind::nonsplit_multiplicative: return -1;
        default: return 0;
    }
}

}  // namespace

long count_points(const CurveModel& E, long p) {
    std::vector<int8_t> scratch;
    return fast_count(E, p, scratch);
}

long count_points_character_sum(const CurveModel& E, long p) {
    std::vector<int8_t> scratch;
    return (p <= 3) ? brute_force_count(E, p) : character_sum_count(E, p, scratch);
}

TraceRecord ap_count(const CurveModel& E, long q) {
    if (!is_prime(q)) throw PreconditionViolated("ap_count needs a prime, got " + std::to_string(q));
    TraceRecord rec;
    rec.q = q;
    const CurveModel* model = &E;
    std::optional<CurveModel> local;
    if (mpz_divisible_ui_p(E.discriminant().get_mpz_t(), static_cast<unsigned long>(q))) {
        TateOutput out = tate(E, Integer(q));
        if (out.data.kind != ReductionKind::good) {
            rec.a_q = bad_ap(out.data.kind);
            return rec;
        }
        local = out.minimal;
        model = &*local;
    }
    const long N = count_points(*model, q);
    rec.N_q = N;
    rec.a_q = q + 1 - N;
    return rec;
}

std::vector<long> an_coefficients(const CurveModel& E, long bound) {
    if (bound < 1) throw PreconditionViolated("coefficient bound must be positive");
    std::map<long, ReductionKind> bad;
    for (const auto& d : local_data(E))
        if (d.prime <= bound) bad[d.prime.get_si()] = d.kind;

    std::vector<long> spf(static_cast<size_t>(bound) + 1, 0);
    for (long i = 2; i <= bound; ++i)
        if (spf[i] == 0)
            for (long j = i; j <= bound; j += i)
                if (spf[j] == 0) spf[j] = i;

    std::vector<long> a(static_cast<size_t>(bound) + 1, 0);
    a[1] = 1;
    std::vector<int8_t> scratch;
    for (long n = 2; n <= bound; ++n) {
        const long p = spf[n];
        if (p == n) {
            auto it = bad.find(p);
            a[n] = (it != bad.end()) ? bad_ap(it->second) : good_ap(E, p, scratch);
            continue;
        }
        long m = n, pk = 1;
        while (m % p == 0) {
            m /= p;
            pk *= p;
        }
        if (m != 1) {
            a[n] = a[pk] * a[m];
        } else {
            const long prev = n / p;
            if (bad.count(p))
                a[n] = a[p] * a[prev];
            else
                a[n] = a[p] * a[prev] - p * a[prev / p];
        }
    }
    return a;
}

std::vector<long> twisted_coefficients(const std::vector<long>& base, long M) {
    const QuadChar chi(M);
    std::vector<long> out(base.size(), 0);
    for (size_t n = 1; n < base.size(); ++n) out[n] = base[n] * chi(static_cast<long>(n));
    return out;
}

CoefficientCache::CoefficientCache(CurveModel minimal) : curve_(std::move(minimal)) {}

std::shared_ptr<const std::vector<long>> CoefficientCache::upto(long bound) {
    std::lock_guard<std::mutex> lock(mu_);
    if (table_ && static_cast<long>(table_->size()) > bound) return table_;
    long target = bound;
    if (table_) target = std::max(bound, 2 * static_cast<long>(table_->size()));
    table_ = std::make_shared<const std::vector<long>>(an_coefficients(curve_, target));
    return table_;
}

// ------------------------------------------------------------ group law

RationalPoint negate_point(const CurveModel& E, const RationalPoint& P) {
    if (P.infinity) return P;
    return {false, P.x, -P.y - Rational(E.a1()) * P.x - Rational(E.a3())};
}

RationalPoint add_points(const CurveModel& E, const RationalPoint& P, const RationalPoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    const Rational a1(E.a1()), a2(E.a2()), a3(E.a3()), a4(E.a4());
    Rational lambda;
    if (P.x == Q.x) {
        const Rational denom = 2 * P.y + a1 * P.x + a3;
        if (P.y != Q.y || denom == 0) return RationalPoint{true, 0, 0};
        lambda = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / denom;
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    const Rational nu = P.y - lambda * P.x;
    const Rational x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    const Rational y3 = -(lambda + a1) * x3 - nu - a3;
    return {false, x3, y3};
}

RationalPoint multiply_point(const CurveModel& E, const RationalPoint& P, long n) {
    RationalPoint acc{true, 0, 0}, base = (n < 0) ? negate_point(E, P) : P;
    for (long k = std::labs(n); k > 0; k >>= 1) {
        if (k & 1) acc = add_points(E, acc, base);
        base = add_points(E, base, base);
    }
    return acc;
}

long point_order(const CurveModel& E, const RationalPoint& P, long cap) {
    RationalPoint Q = P;
    for (long n = 1; n <= cap; ++n) {
        if (Q.infinity) return n;
        Q = add_points(E, Q, P);
    }
    return 0;
}

// ------------------------------------------------------------ cubic roots

std::vector<Real> real_cubic_roots(const Integer& c3, const Integer& c2, const Integer& c1,
                                   const Integer& c0, mpfr_prec_t bits) {
    if (c3 == 0) throw PreconditionViolated("leading coefficient of cubic is zero");
    const mpfr_prec_t work = bits + 64;
    auto f = [&](const Real& x) {
        return ((Real(c3, work) * x + Real(c2, work)) * x + Real(c1, work)) * x + Real(c0, work);
    };
    Integer big = abs(c2);
    if (abs(c1) > big) big = abs(c1);
    if (abs(c0) > big) big = abs(c0);
    const Real R = Real(1L, work) + Real(big, work) / abs(Real(c3, work));

    std::vector<Real> cuts = {-R};
    const Integer dd = 4 * c2 * c2 - 12 * c3 * c1;
    if (dd > 0) {
        const Real sq = sqrt(Real(dd, work));
        Real x1 = (Real(Integer(-2 * c2), work) - sq) / (Real(c3, work) * 6L);
        Real x2 = (Real(Integer(-2 * c2), work) + sq) / (Real(c3, work) * 6L);
        if (x2 < x1) std::swap(x1, x2);
        cuts.push_back(x1);
        cuts.push_back(x2);
    }
    cuts.push_back(R);

    std::vector<Real> roots;
    const long iters = static_cast<long>(work) + 8 + static_cast<long>(mpz_sizeinbase(big.get_mpz_t(), 2));
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Real lo = cuts[i], hi = cuts[i + 1];
        Real flo = f(lo), fhi = f(hi);
        if (flo.is_zero()) {
            if (roots.empty() || !(abs(roots.back() - lo) <= Real::pow2(-static_cast<long>(bits), work)))
                roots.push_back(lo);
            continue;
        }
        if (fhi.is_zero()) {
            roots.push_back(hi);
            continue;
        }
        if (flo.sign() == fhi.sign()) continue;
        for (long it = 0; it < iters; ++it) {
            Real mid = (lo + hi) / 2L;
            Real fm = f(mid);
            if (fm.is_zero()) {
                lo = hi = mid;
                break;
            }
            if (fm.sign() == flo.sign()) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back((lo + hi) / 2L);
    }
    return roots;
}

// ------------------------------------------------------------ 2-torsion

namespace {

// Integer roots (ascending) of X³ + a·X + b.
std::vector<Integer> integer_roots_short(const Integer& a, const Integer& b) {
    const mpfr_prec_t bits = 96 + static_cast<mpfr_prec_t>(mpz_sizeinbase(a.get_mpz_t(), 2) +
                                                           mpz_sizeinbase(b.get_mpz_t(), 2));
    std::vector<Integer> out;
    for (const Real& r : real_cubic_roots(1, 0, a, b, bits)) {
        const Integer f = r.floor_integer();
        for (Integer x = f - 1; x <= f + 1; ++x)
            if (x * x * x + a * x + b == 0 && std::find(out.begin(), out.end(), x) == out.end())
                out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct ShortModel {
    Integer a, b;  // Y² = X³ + aX + b with X = 36x + 3b2, Y = 108(2y + a1x + a3)
};

ShortModel short_model(const CurveModel& E) { return {-27 * E.c4(), -54 * E.c6()}; }

RationalPoint from_short(const CurveModel& E, const Integer& X, const Integer& Y) {
    const Rational x = (Rational(X) - 3 * Rational(E.b2())) / 36;
    const Rational y = (Rational(Y) / 108 - Rational(E.a1()) * x - Rational(E.a3())) / 2;
    return {false, x, y};
}

}  // namespace

std::vector<Rational> two_torsion_x(const CurveModel& E) {
    const ShortModel s = short_model(E);
    std::vector<Rational> out;
    for (const Integer& X : integer_roots_short(s.a, s.b)) {
        Rational x = (Rational(X) - 3 * Rational(E.b2())) / 36;
        x.canonicalize();
        out.push_back(x);
    }
    return out;
}

std::string TwoDivisionField::str() const {
    switch (kind) {
        case Kind::trivial: return "trivial";
        case Kind::cubic: return "degree>2";
        case Kind::quadratic: return discriminant.get_str();
    }
    return "?";
}

TwoDivisionField two_division_field(const CurveModel& E) {
    const ShortModel s = short_model(E);
    const auto roots = integer_roots_short(s.a, s.b);
    TwoDivisionField out;
    if (roots.empty()) {
        const Integer disc = -4 * s.a * s.a * s.a - 27 * s.b * s.b;
        if (disc > 0 && mpz_perfect_square_p(disc.get_mpz_t())) {
            out.kind = TwoDivisionField::Kind::cubic;
            return out;
        }
        throw Degree6Field("2-division cubic is irreducible with non-square discriminant for " + E.str());
    }
    if (roots.size() == 3) {
        out.kind = TwoDivisionField::Kind::trivial;
        return out;
    }
    const Integer& e = roots.front();
    out.discriminant = squarefree_factor(-3 * e * e - 4 * s.a).first;
    return out;
}

// ------------------------------------------------------------ torsion

long TorsionGroup::order() const {
    long n = 1;
    for (long d : structure) n *= d;
    return n;
}

std::string TorsionGroup::str() const {
    if (structure.empty()) return "trivial";
    std::string s;
    for (size_t i = 0; i < structure.size(); ++i) {
        if (i) s += " x ";
        s += "Z/" + std::to_string(structure[i]);
    }
    return s;
}

namespace {

std::vector<long> good_odd_primes(const CurveModel& E, long start, size_t count) {
    std::vector<long> out;
    for (long p = start; out.size() < count; ++p) {
        if (!is_prime(p)) continue;
        if (mpz_divisible_ui_p(E.discriminant().get_mpz_t(), static_cast<unsigned long>(p))) continue;
        out.push_back(p);
    }
    return out;
}

long mod_value(const Rational& v, long p) {
    Integer num = v.get_num(), den = v.get_den();
    const Integer inv = pinv(den, p);
    return pmod(num * inv, p).get_si();
}

}  // namespace

TorsionGroup torsion_subgroup(const CurveModel& E) {
    const ShortModel s = short_model(E);
    // Torsion injects into E(F_p) for good p ≥ 3; the gcd bounds the order.
    long bound = 0;
    for (long p : good_odd_primes(E, 3, 12)) bound = std::gcd(bound, count_points(E, p));

    std::vector<RationalPoint> pts = {RationalPoint{true, 0, 0}};
    for (const Integer& X : integer_roots_short(s.a, s.b)) pts.push_back(from_short(E, X, 0));
    const long two_count = static_cast<long>(pts.size());

    if (bound != two_count) {
        // Nagell–Lutz on the short model: torsion points are integral and
        // either Y = 0 or Y² divides 4a³ + 27b² = −2⁸·3¹²·Δ.
        std::vector<std::pair<Integer, unsigned>> fac = factor(E.discriminant());
        auto bump = [&](long prime, unsigned e) {
            for (auto& [q, k] : fac)
                if (q == prime) {
                    k += e;
                    return;
                }
            fac.emplace_back(Integer(prime), e);
        };
        bump(2, 8);
        bump(3, 12);
        std::vector<Integer> ys = {1};
        for (const auto& [q, k] : fac) {
            const size_t cur = ys.size();
            Integer qp = 1;
            for (unsigned j = 1; j <= k / 2; ++j) {
                qp *= q;
                for (size_t i = 0; i < cur; ++i) ys.push_back(ys[i] * qp);
            }
        }
        std::sort(ys.begin(), ys.end());
        for (const Integer& Y : ys) {
            for (const Integer& X : integer_roots_short(s.a, s.b - Y * Y)) {
                for (int sgn : {1, -1}) {
                    RationalPoint P = from_short(E, X, sgn * Y);
                    if (point_order(E, P, 12) > 0) pts.push_back(P);
                }
            }
        }
    }

    TorsionGroup T;
    T.points = pts;
    const long n = static_cast<long>(pts.size());
    if (two_count == 4)
        T.structure = {2, n / 2};
    else if (n > 1)
        T.structure = {n};

    // Certification: n | #E(F_p) and reduction is injective at two good primes ≥ 5.
    for (long p : good_odd_primes(E, 5, 2)) {
        if (count_points(E, p) % n != 0)
            throw PreconditionViolated("torsion order does not divide #E(F_p) at p = " + std::to_string(p));
        std::vector<std::pair<long, long>> images;
        for (const auto& P : pts) {
            if (P.infinity) continue;
            images.emplace_back(mod_value(P.x, p), mod_value(P.y, p));
        }
        std::sort(images.begin(), images.end());
        if (std::adjacent_find(images.begin(), images.end()) != images.end())
            throw PreconditionViolated("torsion reduction not injective at p = " + std::to_string(p));
        T.certifying_primes.push_back(p);
    }
    return T;
}

// ------------------------------------------------------------ isogenies

long classify_aq_mod4_x014(long q) {
    if (q % 2 == 0 || q == 7) throw PreconditionViolated("q must be an odd prime coprime to 14");
    const bool splits = kronecker(-7, q) == 1;
    switch (q % 8) {
        case 1: return 2;
        case 7: return 0;
        case 3: return splits ? 0 : 2;
        case 5: return splits ? 2 : 0;
    }
    return -1;
}

}  // namespace bsd2

namespace bsd2 {

CurveModel TwoTorsionForm::curve() const { return CurveModel(0, A, 0, B, 0); }

namespace {

TwoTorsionForm reduce_form(Integer A, Integer B, Transform w) {
    if (B == 0 || A * A - 4 * B == 0) throw PreconditionViolated("degenerate two-torsion form");
    Integer u = 1;
    for (const auto& [p, e] : factor(B)) {
        Integer pk = 1;
        for (unsigned k = 1; 4 * k <= e; ++k) {
            const Integer cand = pk * p;
            const Integer c2 = cand * cand, c4 = c2 * c2;
            if (!mpz_divisible_p(A.get_mpz_t(), c2.get_mpz_t()) ||
                !mpz_divisible_p(B.get_mpz_t(), c4.get_mpz_t()))
                break;
            pk = cand;
        }
        u *= pk;
    }
    if (u != 1) {
        const Integer u2 = u * u;
        A /= u2;
        B /= u2 * u2;
        w = Transform::compose(w, Transform{Rational(u), 0, 0, 0});
    }
    return {A, B, w};
}

}  // namespace

TwoTorsionForm to_two_torsion_form(const CurveModel& E) {
    const auto xs = two_torsion_x(E);
    if (xs.empty()) throw NoRationalTwoTorsion("no rational 2-torsion on " + E.str());
    Rational X0q = 4 * xs.front();
    X0q.canonicalize();
    if (X0q.get_den() != 1) throw PreconditionViolated("non-integral 2-torsion abscissa");
    const Integer X0 = X0q.get_num();
    const Integer A = 3 * X0 + E.b2();
    const Integer B = 3 * X0 * X0 + 2 * E.b2() * X0 + 8 * E.b4();
    const Rational r = Rational(X0) / 4;
    const Rational s = -Rational(E.a1()) / 2;
    const Rational t = -(Rational(E.a1()) * r + Rational(E.a3())) / 2;
    Transform w{Rational(1, 2), r, s, t};
    w.u.canonicalize();
    return reduce_form(A, B, w);
}

TwoTorsionForm isogenous_form(const TwoTorsionForm& F) {
    return reduce_form(-2 * F.A, F.A * F.A - 4 * F.B, Transform{});
}

CurveModel two_isogenous_curve(const CurveModel& E) {
    const TwoTorsionForm F = to_two_torsion_form(E);
    return minimal_model(CurveModel(0, -2 * F.A, 0, F.A * F.A - 4 * F.B, 0)).model;
}

RationalPoint isogeny_map(const TwoTorsionForm& F, const RationalPoint& P) {
    if (P.infinity || P.x == 0) return RationalPoint{true, 0, 0};
    const Rational x2 = P.x * P.x;
    return {false, P.y * P.y / x2, P.y * (Rational(F.B) - x2) / x2};
}

}  // namespace bsd2
