#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bsd2/arith.hpp"

namespace bsd2 {

// Change of variables x = u²x' + r, y = u³y' + s·u²x' + t.
struct Transform {
    Rational u{1}, r{0}, s{0}, t{0};

    // Apply `first`, then `then` (acting on the output of `first`).
    static Transform compose(const Transform& first, const Transform& then);
    bool operator==(const Transform& o) const {
        return u == o.u && r == o.r && s == o.s && t == o.t;
    }
};

class CurveModel {
public:
    CurveModel(Integer a1, Integer a2, Integer a3, Integer a4, Integer a6);
    explicit CurveModel(const std::array<long, 5>& a);

    const Integer& a1() const { return a_[0]; }
    const Integer& a2() const { return a_[1]; }
    const Integer& a3() const { return a_[2]; }
    const Integer& a4() const { return a_[3]; }
    const Integer& a6() const { return a_[4]; }
    const std::array<Integer, 5>& a() const { return a_; }

    const Integer& b2() const { return b2_; }
    const Integer& b4() const { return b4_; }
    const Integer& b6() const { return b6_; }
    const Integer& b8() const { return b8_; }
    const Integer& c4() const { return c4_; }
    const Integer& c6() const { return c6_; }
    const Integer& discriminant() const { return disc_; }
    Rational j_invariant() const;

    // Result of the coordinate change; throws PreconditionViolated if the
    // image is not integral.
    CurveModel transformed(const Transform& w) const;

    bool on_curve(const Rational& x, const Rational& y) const;
    std::string str() const;
    bool operator==(const CurveModel& o) const { return a_ == o.a_; }
    bool operator!=(const CurveModel& o) const { return !(*this == o); }

private:
    std::array<Integer, 5> a_;
    Integer b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

CurveModel parse_curve(const std::string& text);

enum class ReductionKind { good, split_multiplicative, nonsplit_multiplicative, additive };
std::string to_string(ReductionKind k);

struct ReductionData {
    Integer prime;
    std::string kodaira;
    long tamagawa = 1;
    ReductionKind kind = ReductionKind::good;
    long conductor_exponent = 0;
    long disc_valuation = 0;  // of the p-minimal model
};

struct TateOutput {
    ReductionData data;
    CurveModel minimal;  // p-minimal model reached by the algorithm
    Transform transform;
};

// Tate's algorithm at a prime p (the input need not be p-minimal).
TateOutput tate(const CurveModel& E, const Integer& p);
ReductionData reduction_data(const CurveModel& E, const Integer& p);

struct MinimalModel {
    CurveModel model;
    Transform transform;
};

// Global minimal model in reduced form (a1, a3 ∈ {0,1}, a2 ∈ {−1,0,1}).
MinimalModel minimal_model(const CurveModel& E);

// Bad-prime data of a minimal model, ascending primes.
std::vector<ReductionData> local_data(const CurveModel& E);
Integer conductor(const CurveModel& E);

CurveModel quadratic_twist(const CurveModel& E, const Integer& m);

struct TraceRecord {
    long q = 0;
    long a_q = 0;
    std::optional<long> N_q;  // good primes only
};

// Number of projective points on the reduction mod p (p prime, any model).
long count_points(const CurveModel& E, long p);
// Same count by the O(p) character sum; reference for the fast path.
long count_points_character_sum(const CurveModel& E, long p);
TraceRecord ap_count(const CurveModel& E, long q);

// a_n for 0 ≤ n ≤ bound (index 0 unused); E must be minimal.
std::vector<long> an_coefficients(const CurveModel& E, long bound);

// a_n of the twist by M (M ≡ 1 mod 4, squarefree, coprime to the conductor)
// derived from the base table: a_n·χ_M(n).
std::vector<long> twisted_coefficients(const std::vector<long>& base, long M);

// Shared, lazily extended a_n table for one minimal curve.
class CoefficientCache {
public:
    explicit CoefficientCache(CurveModel minimal);
    std::shared_ptr<const std::vector<long>> upto(long bound);
    const CurveModel& curve() const { return curve_; }

private:
    CurveModel curve_;
    std::mutex mu_;
    std::shared_ptr<const std::vector<long>> table_;
};

// Rational points on the short model Y² = X³ − 27c4·X − 54c6 are mapped
// back to the input model.
struct RationalPoint {
    bool infinity = false;
    Rational x, y;
    bool operator==(const RationalPoint& o) const {
        return infinity == o.infinity && (infinity || (x == o.x && y == o.y));
    }
};

RationalPoint add_points(const CurveModel& E, const RationalPoint& P, const RationalPoint& Q);
RationalPoint negate_point(const CurveModel& E, const RationalPoint& P);
RationalPoint multiply_point(const CurveModel& E, const RationalPoint& P, long n);
long point_order(const CurveModel& E, const RationalPoint& P, long cap = 16);

struct TorsionGroup {
    std::vector<long> structure;  // empty (trivial), {n}, or {2, n}
    std::vector<RationalPoint> points;
    std::vector<long> certifying_primes;
    long order() const;
    std::string str() const;
};

TorsionGroup torsion_subgroup(const CurveModel& E);

// Rational roots (ascending) of the 2-division polynomial, as x-coordinates.
std::vector<Rational> two_torsion_x(const CurveModel& E);

struct TwoDivisionField {
    enum class Kind { quadratic, trivial, cubic } kind = Kind::quadratic;
    Integer discriminant;  // squarefree D for ℚ(√D) when kind == quadratic
    std::string str() const;
};

TwoDivisionField two_division_field(const CurveModel& E);

// y² = x³ + A·x² + B·x with the chosen rational 2-torsion point at (0,0);
// `transform` maps the source model onto this one.
struct TwoTorsionForm {
    Integer A, B;
    Transform transform;
    CurveModel curve() const;
};

// Uses the smallest rational 2-torsion x-coordinate; the result is reduced so
// that no u > 1 has u² | A and u⁴ | B.
TwoTorsionForm to_two_torsion_form(const CurveModel& E);
// Form of the 2-isogenous curve: (−2A, A² − 4B), reduced.
TwoTorsionForm isogenous_form(const TwoTorsionForm& F);

CurveModel two_isogenous_curve(const CurveModel& E);

// Vélu 2-isogeny from F's curve onto y² = x³ − 2A·x² + (A² − 4B)·x (the
// unreduced codomain), killing (0,0).
RationalPoint isogeny_map(const TwoTorsionForm& F, const RationalPoint& P);

// Congruence table for X0(14): predicted a_q mod 4 from q mod 8 and the
// splitting of q in ℚ(√−7).
long classify_aq_mod4_x014(long q);

// Real roots (ascending) of an integer cubic c3·x³ + c2·x² + c1·x + c0.
std::vector<Real> real_cubic_roots(const Integer& c3, const Integer& c2, const Integer& c1,
                                   const Integer& c0, mpfr_prec_t bits);

}  // namespace bsd2
