#include "bsd2/twist.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "bsd2/errors.hpp"

namespace bsd2 {

namespace {

struct SieveVerdict {
    bool by_index;     // ord₂(N_q) = 1
    bool by_fields;    // inert in both 2-division fields
    bool fields_known;
};

struct SieveFields {
    std::optional<Integer> field_E, field_dual;
};

SieveFields sieve_fields(const CurveModel& E) {
    SieveFields f;
    if (two_torsion_x(E).empty()) return f;
    const TwoDivisionField a = two_division_field(E);
    const TwoDivisionField b = two_division_field(two_isogenous_curve(E));
    // A trivial field means full 2-torsion: no prime is inert.
    f.field_E = a.kind == TwoDivisionField::Kind::quadratic ? a.discriminant : Integer(1);
    f.field_dual = b.kind == TwoDivisionField::Kind::quadratic ? b.discriminant : Integer(1);
    return f;
}

SieveVerdict sieve_verdict(const CurveModel& E, const SieveFields& fields, long q) {
    const TraceRecord t = ap_count(E, q);
    SieveVerdict v{t.N_q && valuation(Integer(*t.N_q), 2) == 1, false, false};
    if (fields.field_E) {
        v.fields_known = true;
        v.by_fields = kronecker(*fields.field_E, Integer(q)) == -1 &&
                      kronecker(*fields.field_dual, Integer(q)) == -1;
    }
    return v;
}

bool in_sieve(const CurveModel& E, const Integer& C, const SieveFields& fields, long q) {
    if (q % 4 != 1 || !is_prime(q) || mpz_divisible_ui_p(C.get_mpz_t(), q)) return false;
    const SieveVerdict v = sieve_verdict(E, fields, q);
    if (v.fields_known && v.by_fields != v.by_index)
        throw CriteriaDisagree("q = " + std::to_string(q) + ": ord2(N_q) = 1 is " +
                               (v.by_index ? "true" : "false") +
                               " but double inertness is " + (v.by_fields ? "true" : "false"));
    return v.by_index;
}

long ord2_count(long n) { return valuation(Integer(n), 2); }

// Ω_f⁺(E)/(√M·Ω_{E^(M)}) as a rational with small denominator.
std::optional<Rational> period_ratio(const PeriodData& base, const PeriodData& twist, long M,
                                     mpfr_prec_t bits) {
    const Real ratio = base.omega_plus / (sqrt(Real(M, bits)) * twist.omega_bsd);
    try {
        return rational_reconstruct(ratio, Integer(64), Real::pow2(-60, bits));
    } catch (const NoRationalInRange&) {
        return std::nullopt;
    }
}

}  // namespace

std::vector<long> sieve_S(const SieveSpec& spec, const Config& config) {
    if (spec.bound < 5) throw PreconditionViolated("sieve bound must be at least 5");
    if (spec.bound > config.point_count_bound)
        throw PreconditionViolated("sieve bound exceeds the configured point-count bound");
    const CurveModel E = minimal_model(spec.curve).model;
    const Integer C = conductor(E);
    const SieveFields fields = sieve_fields(E);
    std::vector<long> out;
    for (long q : primes_up_to(spec.bound)) {
        if (!in_sieve(E, C, fields, q)) continue;
        if (spec.require_aq_nonzero && ap_count(E, q).a_q == 0) continue;
        out.push_back(q);
    }
    return out;
}

std::vector<long> enumerate_M(const std::vector<long>& primes, long r,
                              const std::optional<long>& product_bound) {
    if (r < 1) throw PreconditionViolated("r must be at least 1");
    std::vector<long> sorted = primes;
    std::sort(sorted.begin(), sorted.end());
    std::vector<long> out;
    std::vector<size_t> pick;
    // Depth-first over increasing index tuples; products only grow, so a
    // branch stops as soon as it passes the bound.
    auto recurse = [&](auto&& self, size_t start, long product) -> void {
        if (static_cast<long>(pick.size()) == r) {
            out.push_back(product);
            return;
        }
        for (size_t i = start; i < sorted.size(); ++i) {
            const long next = product * sorted[i];
            if (product_bound && next > *product_bound) break;
            pick.push_back(i);
            self(self, i + 1, next);
            pick.pop_back();
        }
    };
    recurse(recurse, 0, 1);
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(TwistStatus s) {
    switch (s) {
        case TwistStatus::verified: return "verified";
        case TwistStatus::mismatch: return "mismatch";
        case TwistStatus::undecided: return "undecided";
    }
    return "?";
}

SplitConditions check_split_conditions(const CurveModel& E, long M) {
    SplitConditions s;
    s.M = M;
    s.M_mod_8 = mod(M, 8);
    const Integer C = conductor(minimal_model(E).model);
    std::vector<long> primes = {2};
    for (const auto& [p, e] : factor(C))
        if (p != 2) primes.push_back(p.get_si());
    s.all_split = true;
    for (long l : primes) {
        const int symbol = l == 2 ? (s.M_mod_8 == 1 ? 1 : (s.M_mod_8 == 5 ? -1 : 0))
                                  : kronecker(M, l);
        s.symbols.emplace_back(l, symbol);
        s.all_split = s.all_split && symbol == 1;
    }
    return s;
}

FamilyContext make_family_context(const CurveModel& E, bool with_modsym, const Config& config,
                                  bool require_aq_nonzero) {
    FamilyContext ctx{minimal_model(E).model, 0, nullptr, nullptr, require_aq_nonzero, config};
    ctx.conductor = conductor(ctx.base);
    ctx.coefficients = std::make_shared<CoefficientCache>(ctx.base);
    if (with_modsym) {
        if (ctx.conductor > config.modsym_level_cap)
            throw LevelTooLarge("conductor " + ctx.conductor.get_str() + " exceeds the level cap " +
                                std::to_string(config.modsym_level_cap));
        auto space = std::make_shared<const ManinSymbolSpace>(ctx.conductor.get_si(),
                                                              config.modsym_level_cap);
        auto psi = eigen_functional(space, ctx.base, 1);
        psi.coefficients = ctx.coefficients;
        ctx.modsym = std::make_shared<const EigenFunctional>(std::move(psi));
    }
    return ctx;
}

void require_admissible(const FamilyContext& ctx, long M) {
    if (M < 1 || M % 2 == 0)
        throw InadmissibleTwist("M = " + std::to_string(M) + " must be odd and positive");
    if (!is_squarefree(M)) throw InadmissibleTwist("M = " + std::to_string(M) + " is not squarefree");
    const SieveFields fields = sieve_fields(ctx.base);
    for (long q : prime_divisors(M)) {
        if (!in_sieve(ctx.base, ctx.conductor, fields, q)) {
            std::string why = q % 4 != 1 ? " (≢ 1 mod 4)" : "";
            throw InadmissibleTwist("M = " + std::to_string(M) + ": prime factor " +
                                    std::to_string(q) + " is not in the sieve set" + why);
        }
    }
}

TwistReport verify_twist(const FamilyContext& ctx, long M, bool with_selmer) {
    const Config& cfg = ctx.config;
    const mpfr_prec_t bits = cfg.precision_bits;
    TwistReport rep;
    rep.M = M;
    if (M != 1) require_admissible(ctx, M);
    rep.r = omega_count(M);
    rep.ord2_predicted = rep.r - 1;
    rep.split = check_split_conditions(ctx.base, M);

    const CurveModel twist = M == 1 ? ctx.base : quadratic_twist(ctx.base, M);
    rep.twist = twist;
    rep.tamagawa_table = local_data(twist);
    rep.twist_conductor = 1;
    for (const auto& d : rep.tamagawa_table)
        for (long i = 0; i < d.conductor_exponent; ++i) rep.twist_conductor *= d.prime;
    rep.torsion = torsion_subgroup(twist);

    bool mismatch = false, undecided = false;
    if (two_torsion_x(twist).size() != 1) {
        mismatch = true;
        rep.notes.push_back("E^(M)(Q)[2] is not Z/2");
    }

    PeriodData periods_twist;
    try {
        periods_twist = periods(twist, bits);
        rep.real_components = periods_twist.real_components;
        const CoefficientSource src =
            M == 1 ? CoefficientSource([cache = ctx.coefficients](long b) { return cache->upto(b); })
                   : twisted_source(ctx.coefficients, M);
        LValueOptions opts;
        opts.bits = bits;
        opts.max_terms = cfg.max_series_terms;
        rep.lvalue = algebraic_l_value(twist, rep.twist_conductor, src, periods_twist,
                                       default_denominator_bound(twist), opts);
        rep.ord2_computed = rep.lvalue->ord2;
        if (rep.lvalue->value == 0) {
            mismatch = true;
            rep.notes.push_back("central value vanishes");
        } else if (!(rep.ord2_computed == rep.ord2_predicted)) {
            mismatch = true;
            rep.notes.push_back("ord2 differs from r - 1");
        }
    } catch (const Error& e) {
        if (e.kind() != "NoRationalInRange" && e.kind() != "PrecisionExhausted" &&
            e.kind() != "SignMinusOne")
            throw;
        undecided = true;
        rep.notes.push_back(e.kind() + ": " + e.what());
    }

    if (ctx.modsym && rep.lvalue && M != 1) {
        ModsymCrossPath cp;
        cp.numeric = twisted_l_from_symbols(*ctx.modsym, M, bits);
        cp.T_m = cp.numeric.T_m;
        const PeriodData base_periods = periods(ctx.base, bits);
        if (auto ratio = period_ratio(base_periods, periods_twist, M, bits)) {
            cp.period_ratio = *ratio;
            cp.l_alg = cp.T_m * cp.period_ratio;
            cp.ord2 = val2(cp.l_alg);
            cp.agrees = cp.l_alg == rep.lvalue->value && cp.numeric.report.passed;
        } else {
            rep.notes.push_back("period ratio is not a small rational");
        }
        if (!cp.agrees) {
            mismatch = true;
            rep.notes.push_back("modular-symbol path disagrees with the series");
        }
        rep.modsym = cp;
    }

    if (with_selmer) {
        try {
            DescentOptions dopts;
            dopts.extra_levels = cfg.descent_extra_levels;
            rep.selmer = sel2_bound(twist, rep.lvalue && rep.lvalue->value != 0, dopts);
        } catch (const PrecisionExhausted& e) {
            undecided = true;
            rep.notes.push_back(std::string("descent: ") + e.what());
        }
        if (rep.lvalue && !mismatch) {
            try {
                rep.ledger = bsd2_ledger(rep);
                if (rep.ledger->status == TwistStatus::undecided) undecided = true;
            } catch (const LedgerMismatch& e) {
                mismatch = true;
                rep.notes.push_back(e.what());
            }
        }
    }
    rep.status = mismatch ? TwistStatus::mismatch
                          : (undecided ? TwistStatus::undecided : TwistStatus::verified);
    return rep;
}

TwistReport verify_twist(const CurveModel& E, long M, bool with_selmer, const Config& config) {
    return verify_twist(make_family_context(E, false, config), M, with_selmer);
}

LedgerRecord bsd2_ledger(const TwistReport& report) {
    if (!report.lvalue || !report.torsion)
        throw PreconditionViolated("ledger needs an L-value and the torsion subgroup");
    LedgerRecord rec;
    rec.ord2_l_alg = report.lvalue->ord2;
    for (const auto& d : report.tamagawa_table) rec.ord2_tamagawa += ord2_count(d.tamagawa);
    rec.ord2_torsion = ord2_count(report.torsion->order());
    rec.assumption = "#Sha finite (cited); analytic Sha[2^inf] taken as trivial when descent gives Sha[2] = 0";
    const bool sha_trivial =
        report.selmer && report.selmer->sha2_conclusion == Sha2Conclusion::trivial;
    rec.sha2 = sha_trivial ? "trivial" : "unknown";
    rec.ord2_sha = 0;
    rec.rhs = rec.ord2_sha + rec.ord2_tamagawa - 2 * rec.ord2_torsion;
    rec.balanced = rec.ord2_l_alg == rec.rhs;
    if (!sha_trivial) {
        rec.status = TwistStatus::undecided;
        return rec;
    }
    if (!rec.balanced)
        throw LedgerMismatch("M = " + std::to_string(report.M) + ": ord2(L_alg) = " +
                             rec.ord2_l_alg.str() + " but ord2(Sha) + ord2(prod c) - 2 ord2(tors) = " +
                             std::to_string(rec.ord2_sha) + " + " + std::to_string(rec.ord2_tamagawa) +
                             " - 2*" + std::to_string(rec.ord2_torsion));
    rec.status = TwistStatus::verified;
    return rec;
}

FamilyRun run_family(const FamilyContext& ctx, long r, std::optional<long> product_bound,
                     std::optional<long> count, bool with_selmer, unsigned jobs) {
    if (!product_bound && !count) throw PreconditionViolated("need a product bound or a count");
    FamilyRun run;
    run.r = r;
    auto sieve_to = [&](long bound) {
        return sieve_S(SieveSpec{ctx.base, std::max(5L, bound), ctx.require_aq_nonzero}, ctx.config);
    };
    std::vector<long> Ms;
    if (product_bound) {
        // Every cofactor is at least 5^(r−1).
        long smallest = 1;
        for (long i = 1; i < r; ++i) smallest *= 5;
        Ms = enumerate_M(sieve_to(*product_bound / smallest), r, product_bound);
        if (count && static_cast<long>(Ms.size()) > *count) Ms.resize(*count);
    } else {
        long bound = 100;
        for (;;) {
            long smallest = 1;
            for (long i = 1; i < r; ++i) smallest *= 5;
            Ms = enumerate_M(sieve_to(bound / smallest), r, bound);
            if (static_cast<long>(Ms.size()) >= *count) break;
            if (bound > ctx.config.point_count_bound)
                throw PreconditionViolated("not enough admissible M below the point-count bound");
            bound *= 2;
        }
        Ms.resize(*count);
    }

    run.reports.resize(Ms.size());
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= Ms.size()) return;
            try {
                run.reports[i] = verify_twist(ctx, Ms[i], with_selmer);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = Ms.size();
                return;
            }
        }
    };
    const unsigned threads = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(Ms.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return run;
}

}  // namespace bsd2
