#include <doctest.h>

#include <complex>

#include "bsd2/errors.hpp"
#include "bsd2/lseries.hpp"

using namespace bsd2;
using Coeffs = std::array<long, 5>;

namespace {

const CurveModel x014(Coeffs{1, 0, 1, 4, -6});
const CurveModel c34a1(Coeffs{1, 0, 0, -3, 1});
const CurveModel c56b1(Coeffs{0, -1, 0, 0, -4});
const CurveModel c99c1(Coeffs{1, -1, 0, -15, 8});
const CurveModel c46a1(Coeffs{1, -1, 0, -10, -12});
const CurveModel e11a1(Coeffs{0, -1, 1, -10, -20});
const CurveModel e37a1(Coeffs{0, 0, 1, -1, 0});

Real real_of(const char* s) {
    Real x(160);
    mpfr_set_str(x.raw(), s, 10, MPFR_RNDN);
    return x;
}

// Discriminant of the lattice ⟨ω1, ω2⟩ via the η-product:
// Δ = (2π/ω1)¹²·q·∏(1 − qⁿ)²⁴ with q = exp(2πiτ), τ = ω2/ω1.
std::complex<long double> lattice_discriminant(long double w1, std::complex<long double> w2) {
    using C = std::complex<long double>;
    const long double pi = 3.14159265358979323846264338327950288L;
    const C tau = w2 / w1;
    const C q = std::exp(C(0, 2 * pi) * tau);
    C prod = 1;
    C qn = 1;
    for (int n = 1; n < 400; ++n) {
        qn *= q;
        prod *= std::pow(C(1) - qn, 24);
        if (std::abs(qn) < 1e-30L) break;
    }
    return std::pow(2 * pi / w1, 12) * q * prod;
}

}  // namespace

TEST_CASE("real periods against quadrature") {
    // 2·∫_{e1}^∞ dx/√(4x³ + b2x² + 2b4x + b6) by 40-digit tanh-sinh quadrature after
    // substituting x = e1 + t² to remove the endpoint singularity.
    const std::vector<std::pair<CurveModel, const char*>> table = {
        {x014, "1.981341956066883234169571676737009265243"},
        {e11a1, "1.269209304279553421688794616754547305219"},
        {e37a1, "2.993458646231959629832009979452508177798"},
        {c99c1, "1.364292295691255161731294982279292515553"},
    };
    for (const auto& [E, expect] : table) {
        const PeriodData P = periods(E);
        CHECK(abs(P.omega_plus - real_of(expect)) < Real(1e-35, 128));
    }
    CHECK(periods(x014).real_components == 1);
    CHECK(periods(c99c1).real_components == 2);
    CHECK(periods(e37a1).real_components == 2);
    const PeriodData P99 = periods(c99c1);
    CHECK(abs(P99.omega_bsd - P99.omega_plus * 2L) < Real(1e-30, 128));
}

TEST_CASE("period lattice reproduces the minimal discriminant") {
    for (const auto& E : {x014, c34a1, c56b1, c99c1, c46a1, e11a1, e37a1}) {
        const PeriodData P = periods(E);
        CHECK(P.omega_plus.sign() > 0);
        CHECK(P.omega_minus.sign() > 0);
        const long double w1l = std::stold(P.omega_plus.str(25));
        const std::complex<long double> w2(std::stold(P.basis2_re.str(25)),
                                           std::stold(P.basis2_im.str(25)));
        const auto disc = lattice_discriminant(w1l, w2);
        const long double expect = E.discriminant().get_d();
        CAPTURE(E.str());
        CHECK(std::abs(disc.real() / expect - 1) < 1e-12L);
        CHECK(std::abs(disc.imag() / expect) < 1e-12L);
        // Fundamental domain area Ω⁺·Im(ω2) is positive.
        CHECK((P.omega_plus * P.basis2_im).sign() > 0);
    }
}

TEST_CASE("catalog algebraic L-values") {
    const std::vector<std::pair<CurveModel, Rational>> table = {
        // 56B1: torsion Z/2, c2 = 2, c7 = 1 and trivial Sha force 2/2² = 1/2.
        {x014, Rational(1, 6)}, {c34a1, Rational(1, 6)}, {c56b1, Rational(1, 2)},
        {c99c1, Rational(1, 2)}, {c46a1, Rational(1, 2)},
    };
    for (const auto& [E, expect] : table) {
        const RationalLValue L = algebraic_l_value(E);
        CAPTURE(E.str());
        CHECK(L.value == expect);
        CHECK(L.ord2 == -1);
        CHECK(abs(L.numeric_estimate - Real(L.value, 128)) <= L.tolerance);
        const Real bound(L.denominator_bound, 128);
        CHECK(L.tolerance < Real(1L, 128) / (bound * bound * 2L));

        // L/Ω⁺ versus L/Ω_E: the extra factor 2 appears only with two components.
        const PeriodData P = periods(E);
        const Rational per_plus = L.value * P.real_components;
        if (E.discriminant() > 0)
            CHECK(val2(per_plus).value == L.ord2.value + 1);
        else
            CHECK(val2(per_plus) == L.ord2);
    }
}

TEST_CASE("L-value numerics") {
    const Real target = Real::pow2(-60, 128);
    const LSeriesValue L = l_value_at_1(x014, target);
    const PeriodData P = periods(x014);
    CHECK(abs(L.value / P.omega_plus - Real(Rational(1, 6), 128)) < Real(1e-12, 128));
    CHECK(L.tail_bound <= target);

    const LSeriesValue L99 = l_value_at_1(c99c1, target);
    CHECK(abs(L99.value / periods(c99c1).omega_bsd - Real(0.5, 128)) < Real(1e-12, 128));

    // Doubling the truncation moves the sum by less than the tail bound.
    const auto an = an_coefficients(x014, 400);
    for (long T : {20L, 50L, 100L, 200L}) {
        const LSeriesValue a = l_series_sum(an, 14, T, 128);
        const LSeriesValue b = l_series_sum(an, 14, 2 * T, 128);
        CHECK(abs(a.value - b.value) <= a.tail_bound);
    }
}

TEST_CASE("functional-equation sign") {
    CHECK(functional_equation_sign(direct_source(x014), 14) == 1);
    CHECK(functional_equation_sign(direct_source(e11a1), 11) == 1);
    CHECK(functional_equation_sign(direct_source(e37a1), 37) == -1);
    CHECK_THROWS_AS(l_value_at_1(e37a1, Real::pow2(-40, 128)), SignMinusOne);
}

TEST_CASE("twisted coefficient source matches the twist itself") {
    auto base = std::make_shared<CoefficientCache>(x014);
    for (long M : {5L, 13L, 65L}) {
        const CurveModel t = quadratic_twist(x014, M);
        const auto via_twist = *twisted_source(base, M)(3000);
        const auto direct = *direct_source(t)(3000);
        CHECK(via_twist == std::vector<long>(direct.begin(), direct.begin() + 3001));
    }
}

TEST_CASE("twist L-values of X0(14)") {
    auto base = std::make_shared<CoefficientCache>(x014);
    const std::vector<std::pair<long, long>> expected_ord2 = {{5, 0}, {13, 0}, {65, 1}};
    for (const auto& [M, ord] : expected_ord2) {
        const CurveModel t = quadratic_twist(x014, M);
        const RationalLValue L =
            algebraic_l_value(t, conductor(t), twisted_source(base, M), periods(t),
                              default_denominator_bound(t), LValueOptions{});
        CAPTURE(M);
        CHECK(L.value != 0);
        CHECK(L.ord2 == ord);
        // Same answer through the direct coefficient path.
        CHECK(algebraic_l_value(t).value == L.value);
    }
}
