#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "bsd2/arith.hpp"
#include "bsd2/curve.hpp"
#include "bsd2/real.hpp"

namespace bsd2 {

struct PeriodData {
    Real omega_plus;   // least positive real period of the Néron lattice
    Real omega_minus;  // imaginary period divided by i
    int real_components = 1;
    Real omega_bsd;    // omega_plus, or 2·omega_plus with two real components
    // Lattice basis (ω1 real, ω2 in the upper half-plane) as (re, im) pairs.
    Real basis2_re, basis2_im;
};

// E must be a minimal model.
PeriodData periods(const CurveModel& E, mpfr_prec_t bits = 128);

// Supplies a_0..a_bound (a_0 unused) for the curve being evaluated.
using CoefficientSource = std::function<std::shared_ptr<const std::vector<long>>(long bound)>;

CoefficientSource direct_source(const CurveModel& minimal);
// a_n of the twist by M derived from a shared base table.
CoefficientSource twisted_source(std::shared_ptr<CoefficientCache> base, long M);

struct LSeriesValue {
    Real value;
    Real tail_bound;
    long terms = 0;
};

// Functional-equation sign decided numerically by comparing completions of
// the series at two truncation points x = 1 and x = 6/5.
int functional_equation_sign(const CoefficientSource& an, const Integer& conductor,
                             mpfr_prec_t bits = 128);

// L(E,1) = 2·Σ (a_n/n)·exp(−2πn/√N) with the tail below target_abs_error.
// Throws SignMinusOne when the root number is −1.
LSeriesValue l_value_at_1(const CoefficientSource& an, const Integer& conductor,
                          const Real& target_abs_error);
LSeriesValue l_value_at_1(const CurveModel& E, const Real& target_abs_error);

// Truncated sum without the sign check; used for convergence diagnostics.
LSeriesValue l_series_sum(const std::vector<long>& an, const Integer& conductor, long terms,
                          mpfr_prec_t bits);

struct RationalLValue {
    Rational value;   // L(E,1)/Ω_E
    Val2 ord2;
    Real numeric_estimate;
    Real tolerance;
    long terms_used = 0;
    Integer denominator_bound;
    mpfr_prec_t bits = 128;
};

struct LValueOptions {
    mpfr_prec_t bits = 128;
    long max_terms = 20000000;
};

// Default denominator cap: (torsion order)²·∏c_ℓ·2¹⁰.
Integer default_denominator_bound(const CurveModel& minimal);

RationalLValue algebraic_l_value(const CurveModel& E, const LValueOptions& opts = {});
RationalLValue algebraic_l_value(const CurveModel& E, const Integer& denominator_bound,
                                 const LValueOptions& opts = {});
// Lower-level entry used by the twist pipeline: the caller supplies the
// minimal model, its conductor, a coefficient source and the periods.
RationalLValue algebraic_l_value(const CurveModel& minimal, const Integer& conductor,
                                 const CoefficientSource& an, const PeriodData& periods,
                                 const Integer& denominator_bound, const LValueOptions& opts);

}  // namespace bsd2
