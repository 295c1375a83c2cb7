#include "bsd2/descent.hpp"

#include <algorithm>
#include <set>

#include "bsd2/errors.hpp"

namespace bsd2 {

namespace {

Integer ipow(const Integer& b, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

// Binary quartic d·(d²u⁴ + A·d·u²v² + B·v⁴) restricted to one affine chart.
// Over a chart with the other variable fixed to 1 this is c4·x⁴ + c2·x² + c0.
struct EvenQuartic {
    Integer c4, c2, c0;
    Integer value(const Integer& x) const {
        const Integer x2 = x * x;
        return (c4 * x2 + c2) * x2 + c0;
    }
    Integer derivative(const Integer& x) const { return (4 * c4 * x * x + 2 * c2) * x; }
};

bool unit_is_square(const Integer& unit, long p) {
    if (p == 2) return mpz_fdiv_ui(unit.get_mpz_t(), 8) == 1;
    return kronecker(unit, Integer(p)) == 1;
}

class LocalSearch {
public:
    LocalSearch(const EvenQuartic& g, long p, long level) : g_(g), p_(p), level_(level) {}

    // Is g(x) a nonzero square or zero for some x in x0 + p^k·ℤ_p?
    bool solvable(const Integer& x0, long k) const {
        const Integer v = g_.value(x0);
        if (v == 0) return true;
        const long e = valuation(v, p_);
        const long needed = p_ == 2 ? 3 : 1;
        if (k - e >= needed) {
            Integer unit = v;
            mpz_divexact(unit.get_mpz_t(), unit.get_mpz_t(), ipow(Integer(p_), e).get_mpz_t());
            return e % 2 == 0 && unit_is_square(unit, p_);
        }
        // A p-adic root anywhere in ℤ_p is a point with w = 0.
        const Integer dv = g_.derivative(x0);
        if (dv != 0 && e > 2 * valuation(dv, p_)) return true;
        if (k >= level_) throw PrecisionExhausted("");
        const Integer step = ipow(Integer(p_), static_cast<unsigned long>(k));
        for (long j = 0; j < p_; ++j)
            if (solvable(x0 + j * step, k + 1)) return true;
        return false;
    }

private:
    EvenQuartic g_;
    long p_, level_;
};

Integer squarefree_part(const Integer& n) { return squarefree_factor(n).first; }

}  // namespace

long descent_level_bound(const Integer& A, const Integer& B, const Integer& d, long p,
                         const DescentOptions& opts) {
    // Discriminant of d²u⁴ + A·d·u²v² + B·v⁴ is 16·d⁶·B·(A² − 4B)².
    const Integer delta = A * A - 4 * B;
    const long ord = valuation(Integer(16), p) + 6 * valuation(d, p) + valuation(B, p) +
                     2 * valuation(delta, p);
    long level = std::max(1L, (2 * ord + 3 + 1) / 2);
    if (p == 2) level += 2;
    return level + opts.extra_levels;
}

bool homogeneous_space_locally_solvable(const Integer& A, const Integer& B, const Integer& d,
                                        long p, const DescentOptions& opts) {
    if (d == 0 || B == 0 || A * A - 4 * B == 0)
        throw PreconditionViolated("degenerate homogeneous space");
    if (p == real_place) {
        if (d > 0) return true;
        // Need d²s² + A·d·s + B ≤ 0 for some s = (u/v)² ≥ 0.
        if (B <= 0) return true;
        return A > 0 && A * A - 4 * B >= 0;
    }
    const long level = descent_level_bound(A, B, d, p, opts);
    // Charts (u, 1) with u ∈ ℤ_p and (1, v) with v ∈ pℤ_p; the equation is
    // multiplied through by d so solvability means d·F(u, v) is a square.
    const EvenQuartic affine_u{d * d * d, A * d * d, B * d};
    const EvenQuartic affine_v{B * d, A * d * d, d * d * d};
    try {
        return LocalSearch(affine_u, p, level).solvable(Integer(0), 0) ||
               LocalSearch(affine_v, p, level).solvable(Integer(0), 1);
    } catch (const PrecisionExhausted&) {
        throw PrecisionExhausted("local solvability of d = " + d.get_str() + " at p = " +
                                 std::to_string(p) + " undecided at level " +
                                 std::to_string(level) + " for (A, B) = (" + A.get_str() + ", " +
                                 B.get_str() + ")");
    }
}

std::vector<long> descent_support(const Integer& A, const Integer& B) {
    std::set<long> primes = {2};
    for (const Integer& n : {B, Integer(A * A - 4 * B)})
        for (const auto& [q, e] : factor(n)) {
            if (!q.fits_slong_p()) throw PreconditionViolated("support prime too large");
            primes.insert(q.get_si());
        }
    return {primes.begin(), primes.end()};
}

Integer square_class_product(const Integer& d, const Integer& e) { return squarefree_part(d * e); }

std::vector<Integer> square_class_basis(const std::vector<Integer>& group) {
    std::vector<Integer> basis;
    std::set<Integer> span = {Integer(1)};
    for (const Integer& d : group) {
        if (span.count(d)) continue;
        basis.push_back(d);
        std::set<Integer> next = span;
        for (const Integer& s : span) next.insert(square_class_product(s, d));
        span = std::move(next);
    }
    return basis;
}

std::vector<Integer> phi_selmer_group(const TwoTorsionForm& F, const DescentOptions& opts) {
    const auto support = descent_support(F.A, F.B);
    std::vector<long> places = support;
    places.push_back(real_place);
    std::vector<Integer> candidates;
    const size_t k = support.size();
    for (unsigned long mask = 0; mask < (1UL << (k + 1)); ++mask) {
        Integer d = (mask & 1) ? -1 : 1;
        for (size_t i = 0; i < k; ++i)
            if (mask & (1UL << (i + 1))) d *= support[i];
        candidates.push_back(d);
    }
    std::vector<Integer> group;
    for (const Integer& d : candidates) {
        bool ok = true;
        for (long p : places) {
            if (!homogeneous_space_locally_solvable(F.A, F.B, d, p, opts)) {
                ok = false;
                break;
            }
        }
        if (ok) group.push_back(d);
    }
    std::sort(group.begin(), group.end(), [](const Integer& a, const Integer& b) {
        const Integer aa = abs(a), ab = abs(b);
        return aa != ab ? aa < ab : a > b;
    });
    return group;
}

long local_image_size(const Integer& A, const Integer& B, long p, const DescentOptions& opts) {
    std::vector<Integer> classes;
    if (p == real_place) {
        classes = {1, -1};
    } else if (p == 2) {
        for (long u : {1, 3, 5, 7}) {
            classes.push_back(u);
            classes.push_back(2 * u);
        }
    } else {
        long n = 2;
        while (kronecker(n, p) != -1) ++n;
        classes = {Integer(1), Integer(n), Integer(p), Integer(n * p)};
    }
    long count = 0;
    for (const Integer& d : classes)
        if (homogeneous_space_locally_solvable(A, B, d, p, opts)) ++count;
    return count;
}

ProductFormula product_formula(const TwoTorsionForm& F, const DescentOptions& opts) {
    const TwoTorsionForm G = isogenous_form(F);
    ProductFormula out;
    out.selmer_ratio = Rational(static_cast<long>(phi_selmer_group(F, opts).size()),
                                static_cast<long>(phi_selmer_group(G, opts).size()));
    out.selmer_ratio.canonicalize();
    out.local_product = 1;
    std::vector<long> places = descent_support(F.A, F.B);
    places.push_back(real_place);
    for (long p : places) out.local_product *= Rational(local_image_size(F.A, F.B, p, opts), 2);
    out.local_product.canonicalize();
    return out;
}

std::string to_string(Sha2Conclusion c) { return c == Sha2Conclusion::trivial ? "trivial" : "unknown"; }

SelmerResult sel2_bound(const CurveModel& E, bool analytic_rank_zero, const DescentOptions& opts) {
    const TwoTorsionForm F = to_two_torsion_form(E);
    const TwoTorsionForm G = isogenous_form(F);
    SelmerResult out;
    out.phi_selmer_elements = phi_selmer_group(F, opts);
    out.phi_hat_selmer_elements = phi_selmer_group(G, opts);
    out.phi_selmer_generators = square_class_basis(out.phi_selmer_elements);
    out.phi_hat_selmer_generators = square_class_basis(out.phi_hat_selmer_elements);
    out.dim_phi = static_cast<long>(out.phi_selmer_generators.size());
    out.dim_phi_hat = static_cast<long>(out.phi_hat_selmer_generators.size());
    const long rational_two_torsion = static_cast<long>(two_torsion_x(E).size());
    out.two_torsion_dim = rational_two_torsion == 1 ? 1 : 2;
    out.sel2_lower = out.two_torsion_dim;
    out.sel2_upper = out.dim_phi + out.dim_phi_hat;
    out.sel2_refined_upper = out.sel2_upper - (out.two_torsion_dim == 1 ? 1 : 0);
    out.analytic_rank_zero = analytic_rank_zero;
    if (analytic_rank_zero && out.sel2_refined_upper - out.two_torsion_dim <= 1)
        out.sha2_conclusion = Sha2Conclusion::trivial;
    return out;
}

}  // namespace bsd2
