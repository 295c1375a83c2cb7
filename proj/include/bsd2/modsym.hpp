#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bsd2/curve.hpp"
#include "bsd2/linalg.hpp"
#include "bsd2/real.hpp"

namespace bsd2 {

// Weight-2 modular symbols for Γ₀(N) in Manin's presentation. The symbol
// (c:d) stands for g·{0,∞} = {b/d, a/c} where g = [[a,b],[c,d]] ∈ SL₂(ℤ).
// Relations: x + x·S = 0 with (c:d)S = (d:−c), and x + x·R + x·R² = 0 with
// (c:d)R = (d:−c−d). Star acts as (c:d) ↦ (−c:d).
class ManinSymbolSpace {
public:
    static constexpr long default_level_cap = 200;

    explicit ManinSymbolSpace(long level, long level_cap = default_level_cap);

    long level() const { return N_; }
    long symbol_count() const { return static_cast<long>(symbols_.size()); }
    long dimension() const { return static_cast<long>(basis_symbols_.size()); }
    long cuspidal_dimension() const { return cuspidal_dim_; }
    long cusp_count() const { return static_cast<long>(cusps_.size()); }

    std::pair<long, long> symbol(long i) const { return symbols_[i]; }
    // Class of (c:d); requires gcd(c, d, N) = 1.
    long index(long c, long d) const;
    // Coordinates of symbol i in the basis of the relation quotient.
    const QVector& coordinates(long i) const { return coords_[i]; }
    long basis_symbol(long j) const { return basis_symbols_[j]; }

    // Matrices act on column coordinate vectors: column j is the image of
    // basis element j.
    QMatrix hecke_matrix(long p) const;
    QMatrix star_matrix() const;
    // Rows are cusp classes.
    QMatrix boundary_matrix() const;

    // Cusp classes (start, end) of the path represented by symbol i.
    std::pair<long, long> symbol_boundary(long i) const { return edges_[i]; }

    // Manin symbols whose sum is the path {0, k/m} (continued-fraction
    // convergents of k/m).
    std::vector<long> path_symbols(long k, long m) const;

    // Cremona's Heilbronn matrices [x1, x2, y1, y2] of determinant p.
    static std::vector<std::array<long, 4>> heilbronn(long p);

private:
    long cusp_class(long num, long den);

    long N_;
    std::vector<long> index_;  // (c mod N)·N + (d mod N) → class, or −1
    std::vector<std::pair<long, long>> symbols_;
    std::vector<QVector> coords_;
    std::vector<long> basis_symbols_;
    std::vector<std::pair<long, long>> cusps_;  // representatives (num, den)
    std::vector<std::pair<long, long>> edges_;
    long cuspidal_dim_ = 0;
};

bool cusps_equivalent(long p1, long q1, long p2, long q2, long N);

enum class ParityMode { half_integral, integral };
std::string to_string(ParityMode p);

// ψ on Manin symbols, scaled so that integral cuspidal homology maps onto ℤ.
// For sign +, `scale` is the calibrated unit λ with ⟨γ,f⟩⁺/Ω_f⁺ = ψ(γ)/λ.
struct EigenFunctional {
    std::shared_ptr<const ManinSymbolSpace> space;
    CurveModel curve;
    int sign = 1;
    ParityMode parity = ParityMode::half_integral;
    QVector basis_values{};
    QVector symbol_values{};
    Rational scale{1};
    long calibration_prime = 0;
    long verification_prime = 0;
    std::optional<Rational> l_over_omega{};  // exact L(E,1)/Ω_f⁺ from calibration
    double calibration_residual = 0;
    std::shared_ptr<CoefficientCache> coefficients{};  // a_n of the curve, shared
};

// E must be the minimal model of conductor space->level(). Sign + functionals
// are calibrated against the numeric L-value; sign − stops at the lattice
// normalization.
EigenFunctional eigen_functional(std::shared_ptr<const ManinSymbolSpace> space,
                                 const CurveModel& E, int sign);

// ψ({0, k/m}) / λ: the Ω_f⁺-coordinate of ⟨{0,k/m}, f⟩. Requires gcd(m, N) = 1.
Rational eval_symbol(const EigenFunctional& psi, long k, long m);

Rational sum_S(const EigenFunctional& psi, long m);
Rational sum_S_prime(const EigenFunctional& psi, long m);
// Σ over k ∈ (ℤ/m)^× of χ_d(k)·eval(k, m); d = 1 gives S′_m.
Rational sum_T_prime(const EigenFunctional& psi, long d, long m);

struct SymbolSums {
    long m = 1;
    Rational S, S_prime, T;
    std::map<long, Rational> T_prime;  // keyed by d | m
};

// m odd, squarefree, ≡ 1 mod 4 and coprime to N.
SymbolSums symbol_sums(const EigenFunctional& psi, long m);

struct IdentityReport {
    std::string identity;
    long m = 0;
    std::string parameters;
    bool passed = false;
    std::string lhs, rhs;
};

// Throws IdentityViolated / IntegralityViolated / CrossCheckFailed matching
// the identity when the report failed.
void enforce(const IdentityReport& r);

std::vector<long> divisors(long m);
long omega_count(long m);  // number of distinct prime factors

// (σ(m) − a_m)·L/Ω_f⁺ = −Σ_{l|m} S_l, with L/Ω_f⁺ from the calibration.
IdentityReport check_ms1(const EigenFunctional& psi, long m);
// Σ_{l|m} S_l = Σ_d 2^{r−d} Σ_{n|m, r(n)=d} S′_n.
IdentityReport check_sum_decomposition(const EigenFunctional& psi, long m);
// N_{q1}⋯N_{qr}·L/Ω_f⁺ = Σ_{n|m, n>1} b_n·S′_n, b_n = (−1)^r ∏_{q | m/n} (1 − q).
IdentityReport check_bn_identity(const EigenFunctional& psi, long m);
// ord₂(S′_m/Ω_f⁺) = ord₂(L/Ω_f⁺) + r(m).
IdentityReport check_s_prime_valuation(const EigenFunctional& psi, long m);
// T′_{d,m} = (a_q − 2χ_d(q))·T′_{d,m/q} for prime q | m/d; d = m is vacuous.
std::vector<IdentityReport> check_tprime_recursion(const EigenFunctional& psi, long d, long m);

struct IntegralityResult {
    Rational psi_m;
    long power_of_two = 0;
    IdentityReport report;
};
// Ψ_m = Σ_{d|m} T′_{d,m} / 2^r (half-integral) or / 2^{r+1} (integral).
IntegralityResult check_integrality(const EigenFunctional& psi, long m);

// Every exact identity for one admissible m: ms1, the sum decomposition,
// the b_n identity, the S′ valuation (when each q | m has ord₂(N_q) = 1),
// the T′ recursion for each d | m with d > 1, and integrality of Ψ_m.
std::vector<IdentityReport> identity_suite(const EigenFunctional& psi, long m);

struct TwistCrossCheck {
    Rational T_m;           // in units of Ω_f⁺
    Real symbol_side;       // T_m·Ω⁺/√m
    Real numeric_side;      // L(E^{(m)}, 1) from the series
    Real tolerance;
    IdentityReport report;
};
TwistCrossCheck twisted_l_from_symbols(const EigenFunctional& psi, long m,
                                       mpfr_prec_t bits = 128);

}  // namespace bsd2
