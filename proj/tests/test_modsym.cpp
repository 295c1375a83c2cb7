#include <doctest.h>

#include <numeric>

#include "bsd2/errors.hpp"
#include "bsd2/lseries.hpp"
#include "bsd2/modsym.hpp"

using namespace bsd2;
using Coeffs = std::array<long, 5>;

namespace {

const CurveModel x014(Coeffs{1, 0, 1, 4, -6});
const CurveModel e11a1(Coeffs{0, -1, 1, -10, -20});
const CurveModel c99c1(Coeffs{1, -1, 0, -15, 8});

long euler_phi(long n) {
    long r = n;
    for (long p : prime_divisors(n)) r = r / p * (p - 1);
    return r;
}

// Genus of X₀(N) from the index, elliptic points and cusps.
struct GenusData {
    long genus;
    long cusps;
};

GenusData genus_oracle(long N) {
    long mu = N;
    for (long p : prime_divisors(N)) mu = mu / p * (p + 1);
    long nu2 = 1, nu3 = 1;
    if (N % 4 == 0) nu2 = 0;
    if (N % 9 == 0) nu3 = 0;
    for (long p : prime_divisors(N)) {
        if (p != 2) nu2 *= 1 + kronecker(-1L, p);
        if (p != 3) nu3 *= 1 + kronecker(-3L, p);
    }
    long cusps = 0;
    for (long d = 1; d <= N; ++d)
        if (N % d == 0) cusps += euler_phi(std::gcd(d, N / d));
    // 12g = 12 + μ − 3ν₂ − 4ν₃ − 6ν∞
    const long twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
    REQUIRE(twelve_g % 12 == 0);
    return {twelve_g / 12, cusps};
}

std::shared_ptr<const ManinSymbolSpace> space_of(long N) {
    return std::make_shared<const ManinSymbolSpace>(N);
}

const EigenFunctional& x014_plus() {
    static const EigenFunctional psi = eigen_functional(space_of(14), x014, 1);
    return psi;
}

const EigenFunctional& c99c1_plus() {
    static const EigenFunctional psi = eigen_functional(space_of(99), c99c1, 1);
    return psi;
}

}  // namespace

TEST_CASE("projective line size and small spaces") {
    for (long N : {1L, 2L, 11L, 14L, 36L, 99L}) {
        ManinSymbolSpace M(N);
        long expected = N;
        for (long p : prime_divisors(N)) expected = expected / p * (p + 1);
        CHECK(M.symbol_count() == expected);
    }
    ManinSymbolSpace one(1);
    CHECK(one.dimension() == 0);
    CHECK(one.cuspidal_dimension() == 0);

    ManinSymbolSpace M11(11), M14(14), M99(99);
    CHECK(M11.cusp_count() == 2);
    CHECK(M14.cusp_count() == 4);
    CHECK(M99.cusp_count() == 8);
    CHECK(M11.cuspidal_dimension() == 2);
    CHECK(M14.cuspidal_dimension() == 2);
    CHECK(M11.dimension() == 3);
    CHECK(M14.dimension() == 5);
}

TEST_CASE("cuspidal dimension matches the genus formula") {
    for (long N = 1; N <= 120; ++N) {
        CAPTURE(N);
        const GenusData g = genus_oracle(N);
        ManinSymbolSpace M(N);
        CHECK(M.cusp_count() == g.cusps);
        CHECK(M.cuspidal_dimension() == 2 * g.genus);
        CHECK(M.dimension() == 2 * g.genus + g.cusps - 1);
    }
}

TEST_CASE("level cap") {
    CHECK_THROWS_AS(ManinSymbolSpace(201), LevelTooLarge);
    CHECK_NOTHROW(ManinSymbolSpace(201, 300));
}

TEST_CASE("cusp equivalence") {
    // Every cusp with denominator prime to N is equivalent to 0.
    CHECK(cusps_equivalent(0, 1, 3, 5, 14));
    CHECK_FALSE(cusps_equivalent(0, 1, 3, 7, 14));
    CHECK(cusps_equivalent(1, 0, 1, 14, 14));
    CHECK_FALSE(cusps_equivalent(0, 1, 1, 0, 14));
    CHECK_FALSE(cusps_equivalent(1, 2, 1, 7, 14));
    CHECK(cusps_equivalent(1, 2, 3, 2, 14));
}

TEST_CASE("Heilbronn matrices have determinant p") {
    for (long p : primes_up_to(60)) {
        const auto H = ManinSymbolSpace::heilbronn(p);
        for (const auto& h : H) CHECK(h[0] * h[3] - h[1] * h[2] == p);
    }
    CHECK(ManinSymbolSpace::heilbronn(2).size() == 4);
}

TEST_CASE("Hecke operators commute and preserve the cuspidal part") {
    for (long N : {11L, 14L, 37L, 99L}) {
        CAPTURE(N);
        ManinSymbolSpace M(N);
        std::vector<long> good;
        for (long p : primes_up_to(13))
            if (N % p != 0) good.push_back(p);
        const QMatrix A = M.hecke_matrix(good[0]), B = M.hecke_matrix(good[1]);
        CHECK(multiply(A, B) == multiply(B, A));
        const QMatrix S = M.star_matrix();
        CHECK(multiply(S, S) == identity_matrix(static_cast<size_t>(M.dimension())));
        CHECK(multiply(S, A) == multiply(A, S));
        // δ∘T_p = (1 + p)·δ on the boundary when every cusp is rational.
        if (!is_squarefree(N)) continue;
        const QMatrix dT = multiply(M.boundary_matrix(), A);
        QMatrix expect = M.boundary_matrix();
        for (auto& row : expect)
            for (auto& v : row) v *= 1 + good[0];
        CHECK(dT == expect);
    }
}

TEST_CASE("paths to k/m with m prime to N are cycles") {
    ManinSymbolSpace M(14);
    const QMatrix B = M.boundary_matrix();
    for (long m : {3L, 5L, 13L, 65L}) {
        for (long k = 0; k < m; ++k) {
            CAPTURE(m);
            CAPTURE(k);
            const auto path = M.path_symbols(k, m);
            for (size_t i = 1; i < path.size(); ++i)
                CHECK(M.symbol_boundary(path[i - 1]).second == M.symbol_boundary(path[i]).first);
            QVector total(static_cast<size_t>(M.dimension()), Rational(0));
            for (long id : path)
                for (size_t j = 0; j < total.size(); ++j) total[j] += M.coordinates(id)[j];
            for (const auto& row : B) {
                Rational s = 0;
                for (size_t j = 0; j < total.size(); ++j) s += row[j] * total[j];
                CHECK(s == 0);
            }
        }
    }
}

TEST_CASE("eigen-functional is a Hecke eigenvector") {
    const EigenFunctional& psi = x014_plus();
    const auto& M = *psi.space;
    for (long p : primes_up_to(100)) {
        if (14 % p == 0) continue;
        const QVector image = row_times(psi.basis_values, M.hecke_matrix(p));
        QVector expect = psi.basis_values;
        for (auto& v : expect) v *= ap_count(x014, p).a_q;
        CHECK(image == expect);
    }
    CHECK(row_times(psi.basis_values, M.star_matrix()) == psi.basis_values);
}

TEST_CASE("X0(14) calibration") {
    const EigenFunctional& psi = x014_plus();
    CHECK(psi.parity == ParityMode::half_integral);
    CHECK(abs(psi.scale) == 2);
    CHECK(psi.calibration_prime == 3);
    CHECK(psi.verification_prime == 5);
    REQUIRE(psi.l_over_omega);
    CHECK(*psi.l_over_omega == Rational(1, 6));
    CHECK(-sum_S(psi, 3) == Rational(*ap_count(x014, 3).N_q) / 6);
    CHECK(-sum_S(psi, 5) == 1);
}

TEST_CASE("11a1 calibration and unknown sign") {
    const auto psi = eigen_functional(space_of(11), e11a1, 1);
    REQUIRE(psi.l_over_omega);
    CHECK(*psi.l_over_omega == Rational(1, 5));
    const auto minus = eigen_functional(space_of(11), e11a1, -1);
    CHECK(minus.scale == 1);
    CHECK_FALSE(minus.l_over_omega);
    CHECK_THROWS_AS(eigen_functional(space_of(37), CurveModel(Coeffs{0, 0, 1, -1, 0}), 1),
                    SignMinusOne);
    CHECK_THROWS_AS(eigen_functional(space_of(14), e11a1, 1), PreconditionViolated);
}

TEST_CASE("conjugation symmetry") {
    const EigenFunctional& psi = x014_plus();
    const auto minus = eigen_functional(psi.space, x014, -1);
    for (long m : {3L, 5L, 9L, 13L}) {
        for (long k = 1; k < m; ++k) {
            CHECK(eval_symbol(psi, m - k, m) == eval_symbol(psi, k, m));
            CHECK(eval_symbol(minus, m - k, m) == -eval_symbol(minus, k, m));
        }
    }
}

TEST_CASE("99C1 is integral and calibrates") {
    const EigenFunctional& psi = c99c1_plus();
    CHECK(psi.parity == ParityMode::integral);
    CHECK(abs(psi.scale) == 1);
    REQUIRE(psi.l_over_omega);
    const RationalLValue alg = algebraic_l_value(c99c1);
    // Ω_E = 2Ω⁺ for two real components.
    CHECK(*psi.l_over_omega == 2 * alg.value);
}

TEST_CASE("identity suite on X0(14)") {
    const EigenFunctional& psi = x014_plus();
    for (long m : {5L, 13L, 65L, 3965L}) {
        CAPTURE(m);
        CHECK(check_ms1(psi, m).passed);
        CHECK(check_sum_decomposition(psi, m).passed);
        CHECK(check_bn_identity(psi, m).passed);
        bool odd_index = true;
        for (long q : prime_divisors(m)) odd_index = odd_index && valuation(*ap_count(x014, q).N_q, 2) == 1;
        if (odd_index) CHECK(check_s_prime_valuation(psi, m).passed);
        for (long d : divisors(m)) {
            if (d == 1) continue;
            for (const auto& r : check_tprime_recursion(psi, d, m)) CHECK(r.passed);
        }
        const auto integ = check_integrality(psi, m);
        CHECK(integ.report.passed);
        CHECK_NOTHROW(enforce(integ.report));
    }
}

TEST_CASE("identity suite on 99C1") {
    const EigenFunctional& psi = c99c1_plus();
    for (long m : {5L, 53L, 265L}) {
        CAPTURE(m);
        CHECK(check_ms1(psi, m).passed);
        CHECK(check_sum_decomposition(psi, m).passed);
        CHECK(check_bn_identity(psi, m).passed);
        for (long d : divisors(m)) {
            if (d == 1) continue;
            for (const auto& r : check_tprime_recursion(psi, d, m)) CHECK(r.passed);
        }
        CHECK(check_integrality(psi, m).report.passed);
    }
}

TEST_CASE("ms1 holds for composite and even m") {
    const EigenFunctional& psi = x014_plus();
    for (long m : {3L, 9L, 15L, 25L, 27L, 45L}) CHECK(check_ms1(psi, m).passed);
    CHECK_THROWS_AS(check_ms1(psi, 21), PreconditionViolated);
}

TEST_CASE("failed report raises the matching error") {
    IdentityReport r;
    r.identity = "ms1";
    CHECK_THROWS_AS(enforce(r), IdentityViolated);
    r.identity = "integrality";
    CHECK_THROWS_AS(enforce(r), IntegralityViolated);
    r.identity = "twist_cross_check";
    CHECK_THROWS_AS(enforce(r), CrossCheckFailed);
}

TEST_CASE("twisted central values from symbols agree with the series") {
    const EigenFunctional& psi = x014_plus();
    for (long m : {5L, 13L, 65L}) {
        CAPTURE(m);
        const auto cc = twisted_l_from_symbols(psi, m);
        CHECK(cc.report.passed);
        // The character vanishes off the units, so T_m is T′ at d = m.
        CHECK(cc.T_m == symbol_sums(psi, m).T_prime.at(m));
    }
    const auto cc = twisted_l_from_symbols(c99c1_plus(), 5);
    CHECK(cc.report.passed);
}
