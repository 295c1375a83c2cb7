#include "bsd2/lseries.hpp"

#include <cmath>

#include "bsd2/errors.hpp"

namespace bsd2 {

PeriodData periods(const CurveModel& E, mpfr_prec_t bits) {
    const mpfr_prec_t work = bits + 32;
    const auto roots = real_cubic_roots(4, E.b2(), 2 * E.b4(), E.b6(), work);
    const Real pi = Real::pi(work);
    PeriodData out{Real(work), Real(work), 1, Real(work), Real(work), Real(work)};
    if (E.discriminant() > 0) {
        if (roots.size() != 3) throw PreconditionViolated("expected three real 2-division roots");
        const Real &e3 = roots[0], &e2 = roots[1], &e1 = roots[2];
        out.omega_plus = pi / agm(sqrt(e1 - e3), sqrt(e1 - e2));
        out.omega_minus = pi / agm(sqrt(e1 - e3), sqrt(e2 - e3));
        out.real_components = 2;
        out.omega_bsd = out.omega_plus * 2L;
        out.basis2_re = Real(0L, work);
        out.basis2_im = out.omega_minus;
    } else {
        if (roots.size() != 1) throw PreconditionViolated("expected one real 2-division root");
        const Real& e1 = roots[0];
        const Real b2(E.b2(), work), b4(E.b4(), work);
        const Real slope = (e1 * e1 * 12L) + (b2 * e1 * 2L) + (b4 * 2L);
        const Real r = sqrt(slope) / 2L;
        const Real shift = e1 * 3L + b2 / 4L;
        const Real two_sqrt_r = sqrt(r) * 2L;
        out.omega_plus = pi * 2L / agm(two_sqrt_r, sqrt(r * 2L + shift));
        out.omega_minus = pi * 2L / agm(two_sqrt_r, sqrt(r * 2L - shift));
        out.real_components = 1;
        out.omega_bsd = out.omega_plus;
        out.basis2_re = out.omega_plus / 2L;
        out.basis2_im = out.omega_minus / 2L;
    }
    return out;
}

CoefficientSource direct_source(const CurveModel& minimal) {
    auto cache = std::make_shared<CoefficientCache>(minimal);
    return [cache](long bound) { return cache->upto(bound); };
}

CoefficientSource twisted_source(std::shared_ptr<CoefficientCache> base, long M) {
    return [base, M](long bound) {
        return std::make_shared<const std::vector<long>>(
            twisted_coefficients(*base->upto(bound), M));
    };
}

namespace {

Real decay_constant(const Integer& conductor, mpfr_prec_t bits) {
    return Real::pi(bits) * 2L / sqrt(Real(conductor, bits));
}

// Smallest T with 4·exp(−rate·(T+1))/(1 − exp(−rate)) ≤ target.
long terms_for(const Real& rate, const Real& target) {
    const double r = rate.to_double();
    const double log_target = log(target).to_double();
    const double need = (std::log(4.0) - std::log(-std::expm1(-r)) - log_target) / r;
    return std::max(1L, static_cast<long>(std::ceil(need)));
}

Real tail(const Real& rate, long terms) {
    const mpfr_prec_t bits = rate.precision();
    const Real z = exp(-rate);
    return Real(4L, bits) * exp(-(rate * (terms + 1))) / (Real(1L, bits) - z);
}

// Σ_{n≤T} (a_n/n)·(exp(−c·n/x) + w·exp(−c·n·x)) with x = num/den.
Real completion(const std::vector<long>& an, const Real& c, long num, long den, int w,
                long terms) {
    const mpfr_prec_t bits = c.precision();
    const Real z_slow = exp(-(c * den / num));
    const Real z_fast = exp(-(c * num / den));
    Real p_slow(1L, bits), p_fast(1L, bits), sum(0L, bits), term(bits);
    for (long n = 1; n <= terms; ++n) {
        p_slow *= z_slow;
        p_fast *= z_fast;
        if (an[n] == 0) continue;
        if (w > 0)
            mpfr_add(term.raw(), p_slow.raw(), p_fast.raw(), MPFR_RNDN);
        else
            mpfr_sub(term.raw(), p_slow.raw(), p_fast.raw(), MPFR_RNDN);
        mpfr_mul_si(term.raw(), term.raw(), an[n], MPFR_RNDN);
        mpfr_div_si(term.raw(), term.raw(), n, MPFR_RNDN);
        sum += term;
    }
    return sum;
}

}  // namespace

LSeriesValue l_series_sum(const std::vector<long>& an, const Integer& conductor, long terms,
                          mpfr_prec_t bits) {
    if (static_cast<long>(an.size()) <= terms) throw PreconditionViolated("a_n table too short");
    const Real c = decay_constant(conductor, bits);
    const Real z = exp(-c);
    Real p(1L, bits), sum(0L, bits), term(bits);
    for (long n = 1; n <= terms; ++n) {
        p *= z;
        if (an[n] == 0) continue;
        mpfr_mul_si(term.raw(), p.raw(), an[n], MPFR_RNDN);
        mpfr_div_si(term.raw(), term.raw(), n, MPFR_RNDN);
        sum += term;
    }
    return {sum * 2L, tail(c, terms), terms};
}

int functional_equation_sign(const CoefficientSource& an, const Integer& conductor,
                             mpfr_prec_t bits) {
    const Real c = decay_constant(conductor, bits);
    const Real target = Real::pow2(-70, bits);
    const Real threshold = Real::pow2(-40, bits);
    // x = 6/5 decays slowest through exp(−c·n·5/6).
    const long terms = terms_for(c * 5L / 6L, target);
    const auto table = an(terms);
    const Real plus_1 = completion(*table, c, 1, 1, +1, terms);
    const Real plus_x = completion(*table, c, 6, 5, +1, terms);
    const Real minus_x = completion(*table, c, 6, 5, -1, terms);
    const bool plus_ok = abs(plus_1 - plus_x) < threshold;
    const bool minus_ok = abs(minus_x) < threshold;
    if (plus_ok) return +1;
    if (minus_ok) return -1;
    throw PrecisionExhausted("functional-equation sign undecided for conductor " +
                             conductor.get_str());
}

LSeriesValue l_value_at_1(const CoefficientSource& an, const Integer& conductor,
                          const Real& target_abs_error) {
    const mpfr_prec_t bits = target_abs_error.precision();
    if (functional_equation_sign(an, conductor, bits) < 0)
        throw SignMinusOne("root number is -1 for conductor " + conductor.get_str());
    const Real c = decay_constant(conductor, bits);
    // Half the budget for truncation, the rest absorbs rounding.
    const long terms = terms_for(c, target_abs_error / 2L);
    return l_series_sum(*an(terms), conductor, terms, bits);
}

LSeriesValue l_value_at_1(const CurveModel& E, const Real& target_abs_error) {
    const CurveModel minimal = minimal_model(E).model;
    return l_value_at_1(direct_source(minimal), conductor(minimal), target_abs_error);
}

Integer default_denominator_bound(const CurveModel& minimal) {
    Integer bound = torsion_subgroup(minimal).order();
    bound *= bound;
    for (const auto& rd : local_data(minimal)) bound *= rd.tamagawa;
    return bound * 1024;
}

RationalLValue algebraic_l_value(const CurveModel& minimal, const Integer& conductor,
                                 const CoefficientSource& an, const PeriodData& per,
                                 const Integer& denominator_bound, const LValueOptions& opts) {
    auto attempt = [&](mpfr_prec_t bits, long extra_bits) {
        const Real bound(denominator_bound, bits);
        const Real tol = Real(1L, bits) / (bound * bound * 4L);
        Real omega = per.omega_bsd;
        mpfr_prec_round(omega.raw(), bits, MPFR_RNDN);
        const Real target = tol * omega / 8L * Real::pow2(-extra_bits, bits);
        const Real c = decay_constant(conductor, bits);
        if (terms_for(c, target / 2L) > opts.max_terms)
            throw PrecisionExhausted("L-series needs more than " + std::to_string(opts.max_terms) +
                                     " terms at conductor " + conductor.get_str());
        const LSeriesValue L = l_value_at_1(an, conductor, target);
        const Real x = L.value / omega;
        RationalLValue out;
        out.value = rational_reconstruct(x, denominator_bound, tol);
        out.ord2 = val2(out.value);
        out.numeric_estimate = x;
        out.tolerance = tol;
        out.terms_used = L.terms;
        out.denominator_bound = denominator_bound;
        out.bits = bits;
        return out;
    };
    try {
        return attempt(opts.bits, 0);
    } catch (const NoRationalInRange&) {
        return attempt(opts.bits * 2, 32);
    }
}

RationalLValue algebraic_l_value(const CurveModel& E, const Integer& denominator_bound,
                                 const LValueOptions& opts) {
    const CurveModel minimal = minimal_model(E).model;
    return algebraic_l_value(minimal, conductor(minimal), direct_source(minimal),
                             periods(minimal, opts.bits), denominator_bound, opts);
}

RationalLValue algebraic_l_value(const CurveModel& E, const LValueOptions& opts) {
    const CurveModel minimal = minimal_model(E).model;
    return algebraic_l_value(minimal, default_denominator_bound(minimal), opts);
}

}  // namespace bsd2
