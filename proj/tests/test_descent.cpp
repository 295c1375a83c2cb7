#include <doctest.h>

#include <chrono>
#include <random>
#include <set>

#include "bsd2/descent.hpp"
#include "bsd2/errors.hpp"

using namespace bsd2;
using Coeffs = std::array<long, 5>;

namespace {

const CurveModel x014(Coeffs{1, 0, 1, 4, -6});
const CurveModel c46a1(Coeffs{1, -1, 0, -10, -12});
const CurveModel c56b1(Coeffs{0, -1, 0, 0, -4});
const CurveModel c34a1(Coeffs{1, 0, 0, -3, 1});

// Exhaustive residue search: is d·w² ≡ d²u⁴ + A·d·u²v² + B·v⁴ (mod p^K)
// solvable with (u, v) not both divisible by p? Necessary for p-adic
// solvability; sufficient once K is past the Hensel range.
bool solvable_mod_power(long A, long B, long d, long p, int K) {
    long mod = 1;
    for (int i = 0; i < K; ++i) mod *= p;
    auto red = [mod](long x) { return ((x % mod) + mod) % mod; };
    std::vector<bool> image(mod, false);
    for (long w = 0; w < mod; ++w) image[red(red(d * w) * w)] = true;
    for (long u = 0; u < mod; ++u) {
        const long u2 = red(u * u);
        for (long v = 0; v < mod; ++v) {
            if (u % p == 0 && v % p == 0) continue;
            const long v2 = red(v * v);
            const long rhs = red(red(d * d) * red(u2 * u2) + red(red(A * d) * red(u2 * v2)) +
                                 red(B * red(v2 * v2)));
            if (image[rhs]) return true;
        }
    }
    return false;
}

std::set<Integer> as_set(const std::vector<Integer>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("real place sign analysis") {
    CHECK(homogeneous_space_locally_solvable(3, 5, 1, real_place));
    CHECK(homogeneous_space_locally_solvable(3, 5, 7, real_place));
    // A² − 4B < 0 and B > 0: the quartic is positive definite.
    CHECK_FALSE(homogeneous_space_locally_solvable(1, 5, -1, real_place));
    CHECK(homogeneous_space_locally_solvable(1, -5, -1, real_place));
    CHECK(homogeneous_space_locally_solvable(5, 4, -1, real_place));
    CHECK_FALSE(homogeneous_space_locally_solvable(-5, 4, -1, real_place));
}

TEST_CASE("trivial torsor is everywhere solvable") {
    for (long p : {2L, 3L, 5L, 7L, 13L})
        CHECK(homogeneous_space_locally_solvable(5, 8, 1, p));
}

TEST_CASE("local solvability agrees with exhaustive residue search") {
    std::mt19937_64 rng(20261016);
    std::uniform_int_distribution<long> coef(-40, 40);
    const std::vector<std::pair<long, int>> prime_levels = {{3, 6}, {5, 4}, {7, 3}, {2, 8}};
    int compared = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const long A = coef(rng), B = coef(rng);
        if (B == 0 || A * A - 4 * B == 0) continue;
        for (const auto& [p, K] : prime_levels) {
            for (long d : {-1L, 2L, -3L, 5L, 7L, -14L}) {
                const long bound = descent_level_bound(A, B, d, p);
                if (bound > K) continue;
                const bool fast = homogeneous_space_locally_solvable(A, B, d, p);
                CAPTURE(A);
                CAPTURE(B);
                CAPTURE(d);
                CAPTURE(p);
                CHECK(fast == solvable_mod_power(A, B, d, p, K));
                ++compared;
            }
        }
    }
    MESSAGE("residue comparisons: ", compared);
    CHECK(compared > 1000);
}

TEST_CASE("X0(14) descents") {
    const TwoTorsionForm F = to_two_torsion_form(x014);
    const auto sel = phi_selmer_group(F);
    const auto sel_dual = phi_selmer_group(isogenous_form(F));
    CHECK(sel.front() == 1);
    CHECK(sel_dual.front() == 1);
    CHECK(square_class_basis(sel).size() == 1);
    CHECK(square_class_basis(sel_dual).size() == 1);

    const SelmerResult r = sel2_bound(x014, true);
    CHECK(r.dim_phi == 1);
    CHECK(r.dim_phi_hat == 1);
    CHECK(r.sel2_lower == 1);
    CHECK(r.sel2_refined_upper == 1);
    CHECK(r.sel2_upper == 2);
    CHECK(r.sha2_conclusion == Sha2Conclusion::trivial);
    CHECK(sel2_bound(x014, false).sha2_conclusion == Sha2Conclusion::unknown);

    // Ш(E′)[2] = 0 for the isogenous curve as well.
    const SelmerResult dual = sel2_bound(two_isogenous_curve(x014), true);
    CHECK(dual.sha2_conclusion == Sha2Conclusion::trivial);
}

TEST_CASE("Selmer sets are groups containing the images of rational points") {
    for (const CurveModel& E : {x014, c46a1, c56b1, c34a1, quadratic_twist(x014, 65),
                                CurveModel(Coeffs{0, 0, 0, -2, 0}),
                                CurveModel(Coeffs{0, 0, 0, -34, 0})}) {
        CAPTURE(E.str());
        const TwoTorsionForm F = to_two_torsion_form(E);
        for (const TwoTorsionForm& G : {F, isogenous_form(F)}) {
            const auto group = phi_selmer_group(G);
            const auto members = as_set(group);
            CHECK(members.count(Integer(1)) == 1);
            for (const Integer& a : group)
                for (const Integer& b : group) CHECK(members.count(square_class_product(a, b)) == 1);
            CHECK((group.size() & (group.size() - 1)) == 0);
            // Image of rational points: (0,0) ↦ B, other points ↦ x.
            CHECK(members.count(squarefree_factor(G.B).first) == 1);
            for (long x = -60; x <= 60; ++x) {
                if (x == 0) continue;
                const Integer rhs = Integer(x) * (Integer(x) * x + G.A * x + G.B);
                if (rhs < 0 || !mpz_perfect_square_p(rhs.get_mpz_t())) continue;
                CHECK(members.count(squarefree_factor(Integer(x)).first) == 1);
            }
        }
    }
}

TEST_CASE("rank-one curve has larger Selmer groups") {
    // y² = x³ − 2x has rank 1 and torsion ℤ/2: |Sel|·|Sel′| ≥ 2^(1+2).
    const SelmerResult r = sel2_bound(CurveModel(Coeffs{0, 0, 0, -2, 0}), false);
    CHECK(r.dim_phi + r.dim_phi_hat >= 3);
}

TEST_CASE("product formula") {
    for (const CurveModel& E : {x014, c46a1, c56b1, c34a1, quadratic_twist(x014, 5),
                                quadratic_twist(x014, 65), quadratic_twist(c46a1, 185),
                                CurveModel(Coeffs{0, 0, 0, -34, 0})}) {
        CAPTURE(E.str());
        const ProductFormula pf = product_formula(to_two_torsion_form(E));
        CAPTURE(to_string(pf.selmer_ratio));
        CAPTURE(to_string(pf.local_product));
        CHECK(pf.holds());
    }
}

TEST_CASE("descent is invariant under change of model") {
    for (const CurveModel& E : {x014, c46a1, c34a1}) {
        const CurveModel scaled = E.transformed(Transform{Rational(1, 2), 3, 1, -2});
        const SelmerResult a = sel2_bound(E, true), b = sel2_bound(scaled, true);
        CHECK(as_set(a.phi_selmer_elements) == as_set(b.phi_selmer_elements));
        CHECK(as_set(a.phi_hat_selmer_elements) == as_set(b.phi_hat_selmer_elements));
    }
}

TEST_CASE("local conditions are stable under split twists") {
    // 65 ≡ 1 mod 8 and (65/7) = 1: both 2 and 7 split in ℚ(√65).
    const SelmerResult base = sel2_bound(x014, true);
    const SelmerResult twist = sel2_bound(quadratic_twist(x014, 65), true);
    CHECK(twist.dim_phi == base.dim_phi);
    CHECK(twist.dim_phi_hat == base.dim_phi_hat);
    const SelmerResult base46 = sel2_bound(c46a1, true);
    const SelmerResult twist46 = sel2_bound(quadratic_twist(c46a1, 185), true);
    CHECK(twist46.dim_phi == base46.dim_phi);
    CHECK(twist46.dim_phi_hat == base46.dim_phi_hat);
}

TEST_CASE("Ш[2] vanishes on the acceptance twists within the time budget") {
    const std::vector<std::pair<CurveModel, long>> cases = {{x014, 5}, {x014, 65}, {c46a1, 185}};
    for (const auto& [E, M] : cases) {
        CAPTURE(M);
        const auto start = std::chrono::steady_clock::now();
        const SelmerResult r = sel2_bound(quadratic_twist(E, M), true);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        CHECK(r.sel2_lower == 1);
        CHECK(r.sel2_upper <= 2);
        CHECK(r.sha2_conclusion == Sha2Conclusion::trivial);
        CHECK(secs < 30.0);
    }
}

TEST_CASE("precision contract raises instead of guessing") {
    DescentOptions starved;
    starved.extra_levels = -100;
    CHECK_THROWS_AS(homogeneous_space_locally_solvable(5, 8, 7, 7, starved), PrecisionExhausted);
}

TEST_CASE("curves without rational 2-torsion are rejected") {
    CHECK_THROWS_AS(sel2_bound(CurveModel(Coeffs{0, -1, 1, -10, -20}), true), NoRationalTwoTorsion);
}
