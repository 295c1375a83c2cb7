#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bsd2/config.hpp"
#include "bsd2/curve.hpp"
#include "bsd2/descent.hpp"
#include "bsd2/lseries.hpp"
#include "bsd2/modsym.hpp"

namespace bsd2 {

struct SieveSpec {
    CurveModel curve;
    long bound = 5;
    bool require_aq_nonzero = false;
};

// Primes q ≤ bound with q ≡ 1 mod 4, q ∤ C, ord₂(N_q) = 1 (and a_q ≠ 0 when
// requested). Each verdict is cross-checked against inertness of q in the
// 2-division fields of E and E′; disagreement raises CriteriaDisagree.
std::vector<long> sieve_S(const SieveSpec& spec, const Config& config = {});

// Squarefree products of r distinct entries of `primes` not exceeding
// product_bound (no bound when empty), ascending.
std::vector<long> enumerate_M(const std::vector<long>& primes, long r,
                              const std::optional<long>& product_bound);

enum class TwistStatus { verified, mismatch, undecided };
std::string to_string(TwistStatus s);

struct SplitConditions {
    long M = 0;
    std::vector<std::pair<long, int>> symbols;  // (ℓ, (M/ℓ)) for ℓ | 2C; ℓ = 2 uses M mod 8
    long M_mod_8 = 0;
    bool all_split = false;  // every ℓ | 2C splits in ℚ(√M)
};

SplitConditions check_split_conditions(const CurveModel& E, long M);

struct LedgerRecord {
    Val2 ord2_l_alg;
    std::string sha2;  // "trivial" (descent), "unknown"
    long ord2_sha = 0;  // valid when sha2 == "trivial"
    long ord2_tamagawa = 0;
    long ord2_torsion = 0;
    long rhs = 0;  // ord2_sha + ord2_tamagawa − 2·ord2_torsion
    bool balanced = false;
    TwistStatus status = TwistStatus::undecided;
    std::string assumption;
};

// Base-curve data shared by every twist of one family.
struct FamilyContext {
    CurveModel base;  // minimal model
    Integer conductor;
    std::shared_ptr<CoefficientCache> coefficients;
    std::shared_ptr<const EigenFunctional> modsym;  // optional cross path
    bool require_aq_nonzero = false;                // family sieve condition
    Config config;
};

// Builds the context; when with_modsym is set and the conductor is within
// the level cap, the sign-+ eigen-functional is computed as well.
FamilyContext make_family_context(const CurveModel& E, bool with_modsym, const Config& config = {},
                                  bool require_aq_nonzero = false);

struct ModsymCrossPath {
    Rational T_m;             // in units of Ω_f⁺ of the base curve
    Rational period_ratio;    // Ω_f⁺(E) / (√M·Ω_{E^(M)})
    Rational l_alg;           // T_m·period_ratio
    Val2 ord2;
    bool agrees = false;      // exact equality with the numeric reconstruction
    TwistCrossCheck numeric;  // T_m·Ω⁺/√M against the series value
};

struct TwistReport {
    long M = 0;
    long r = 0;
    long ord2_predicted = 0;
    Val2 ord2_computed;
    std::optional<CurveModel> twist;
    Integer twist_conductor;
    std::optional<RationalLValue> lvalue;
    long real_components = 0;
    std::vector<ReductionData> tamagawa_table;
    std::optional<TorsionGroup> torsion;
    std::optional<SelmerResult> selmer;
    std::optional<LedgerRecord> ledger;
    std::optional<ModsymCrossPath> modsym;
    SplitConditions split;
    TwistStatus status = TwistStatus::undecided;
    std::vector<std::string> notes;
};

// Raises InadmissibleTwist unless M > 1 is a product of distinct primes of 𝒮.
void require_admissible(const FamilyContext& ctx, long M);

TwistReport verify_twist(const FamilyContext& ctx, long M, bool with_selmer);
TwistReport verify_twist(const CurveModel& E, long M, bool with_selmer, const Config& config = {});

// ord₂(L^(alg)) = ord₂(#Ш[2∞]) + ord₂(∏c_ℓ) − 2·ord₂(#tors). Raises
// LedgerMismatch when Ш[2] = 0 is established and the sides differ; an
// unknown Ш[2] yields status undecided.
LedgerRecord bsd2_ledger(const TwistReport& report);

struct FamilyRun {
    long r = 0;
    std::vector<TwistReport> reports;  // ascending M
};

// All admissible M with r factors up to product_bound (or the first `count`
// of them), verified on `jobs` worker threads. Output order is independent
// of the thread count.
FamilyRun run_family(const FamilyContext& ctx, long r, std::optional<long> product_bound,
                     std::optional<long> count, bool with_selmer, unsigned jobs);

}  // namespace bsd2
