#pragma once

#include <string>
#include <vector>

#include "bsd2/curve.hpp"

namespace bsd2 {

struct DescentOptions {
    // Residue levels searched beyond the contract level before giving up.
    long extra_levels = 0;
};

// Place of ℚ: a prime, or 0 for the real place.
constexpr long real_place = 0;

// Does d·w² = d²u⁴ + A·d·u²v² + B·v⁴ have a nontrivial solution over ℚ_p
// (or ℝ when p == real_place)? Throws PrecisionExhausted when the residue
// search reaches its level bound undecided.
bool homogeneous_space_locally_solvable(const Integer& A, const Integer& B, const Integer& d,
                                        long p, const DescentOptions& opts = {});

// Residue level searched at p for the quartic attached to d.
long descent_level_bound(const Integer& A, const Integer& B, const Integer& d, long p,
                         const DescentOptions& opts = {});

// Primes dividing 2·B·(A² − 4B), ascending.
std::vector<long> descent_support(const Integer& A, const Integer& B);

// Squarefree d (over the support and −1) whose homogeneous space is
// everywhere locally solvable; sorted by absolute value, then sign. This is
// the Selmer group of the isogeny whose codomain is F's curve, i.e. the
// image of F's points under (x, y) ↦ x mod squares.
std::vector<Integer> phi_selmer_group(const TwoTorsionForm& F, const DescentOptions& opts = {});

// A basis over 𝔽₂ of a subgroup of ℚ*/ℚ*² given by all its elements.
std::vector<Integer> square_class_basis(const std::vector<Integer>& group);
// Squarefree part of d·e.
Integer square_class_product(const Integer& d, const Integer& e);

// Number of square classes of ℚ_p* (or ℝ*) whose homogeneous space is
// solvable over ℚ_p: the size of the local image.
long local_image_size(const Integer& A, const Integer& B, long p, const DescentOptions& opts = {});

struct ProductFormula {
    Rational selmer_ratio;  // |Sel(F)| / |Sel(F′)|
    Rational local_product;  // ∏_v |im_v(F)| / 2
    bool holds() const { return selmer_ratio == local_product; }
};
ProductFormula product_formula(const TwoTorsionForm& F, const DescentOptions& opts = {});

enum class Sha2Conclusion { trivial, unknown };
std::string to_string(Sha2Conclusion c);

struct SelmerResult {
    std::vector<Integer> phi_selmer_generators;      // basis of Sel from E's form
    std::vector<Integer> phi_hat_selmer_generators;  // basis of Sel from E′'s form
    std::vector<Integer> phi_selmer_elements, phi_hat_selmer_elements;
    long dim_phi = 0, dim_phi_hat = 0;
    long two_torsion_dim = 0;  // dim E(ℚ)[2]
    long sel2_lower = 0;
    long sel2_upper = 0;          // dim_phi + dim_phi_hat
    long sel2_refined_upper = 0;  // minus the image of E′(ℚ)[φ̂] when E(ℚ)[2] ≅ ℤ/2
    bool analytic_rank_zero = false;
    Sha2Conclusion sha2_conclusion = Sha2Conclusion::unknown;
};

// Both isogeny descents for E. Ш[2] = 0 is concluded only with an
// analytic-rank-0 certificate: then dim Ш[2] = dim Sel₂ − dim E(ℚ)[2], and
// a bound ≤ 1 forces 0 because Ш[2] has square order.
SelmerResult sel2_bound(const CurveModel& E, bool analytic_rank_zero,
                        const DescentOptions& opts = {});

}  // namespace bsd2
