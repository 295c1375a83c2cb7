#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "bsd2/config.hpp"
#include "bsd2/errors.hpp"
#include "bsd2/twist.hpp"

using namespace bsd2;
using Coeffs = std::array<long, 5>;

namespace {

const CurveModel x014(Coeffs{1, 0, 1, 4, -6});
const CurveModel c34a1(Coeffs{1, 0, 0, -3, 1});
const CurveModel c46a1(Coeffs{1, -1, 0, -10, -12});
const CurveModel c56b1(Coeffs{0, -1, 0, 0, -4});
const CurveModel c99c1(Coeffs{1, -1, 0, -15, 8});

// Affine points counted pair by pair, plus the point at infinity.
long naive_count(const Coeffs& a, long q) {
    auto m = [q](long x) { return ((x % q) + q) % q; };
    long n = 1;
    for (long x = 0; x < q; ++x) {
        const long rhs = m(m(m(x * x) * x) + m(a[1] * m(x * x)) + m(a[3] * x) + a[4]);
        for (long y = 0; y < q; ++y)
            if (m(m(y * y) + m(a[0] * m(x * y)) + m(a[2] * y)) == rhs) ++n;
    }
    return n;
}

std::vector<long> oracle_sieve(const Coeffs& a, long conductor, long bound, bool aq_nonzero) {
    std::vector<long> out;
    for (long q = 5; q <= bound; q += 4) {
        bool prime = true;
        for (long d = 2; d * d <= q; ++d) prime = prime && q % d != 0;
        if (!prime || conductor % q == 0) continue;
        const long N = naive_count(a, q);
        if (N % 2 != 0 || (N / 2) % 2 == 0) continue;
        if (aq_nonzero && q + 1 - N == 0) continue;
        out.push_back(q);
    }
    return out;
}

}  // namespace

TEST_CASE("sieve lists") {
    const std::vector<long> s14 = {5, 13, 61, 101, 157, 173, 181, 229, 269, 293, 349, 397};
    CHECK(sieve_S({x014, 400}) == s14);
    CHECK(sieve_S({c56b1, 400}) == s14);
    CHECK(sieve_S({c34a1, 400}) ==
          std::vector<long>{5, 29, 37, 61, 109, 173, 181, 197, 269, 277, 317, 397});
    CHECK(sieve_S({c99c1, 390}) ==
          std::vector<long>{5, 53, 89, 113, 137, 257, 269, 317, 353, 389});
    CHECK(sieve_S({c46a1, 380, true}) ==
          std::vector<long>{5, 37, 53, 61, 149, 157, 181, 229, 293, 373});
}

TEST_CASE("sieve agrees with naive point counting") {
    struct Case {
        Coeffs a;
        long conductor;
        bool aq_nonzero;
    };
    for (const Case& c : {Case{{1, 0, 1, 4, -6}, 14, false}, Case{{1, 0, 0, -3, 1}, 34, false},
                          Case{{1, -1, 0, -10, -12}, 46, true}, Case{{0, -1, 0, 0, -4}, 56, false},
                          Case{{1, -1, 0, -15, 8}, 99, false}}) {
        CAPTURE(c.conductor);
        CHECK(sieve_S({CurveModel(c.a), 900, c.aq_nonzero}) ==
              oracle_sieve(c.a, c.conductor, 900, c.aq_nonzero));
    }
}

TEST_CASE("sieve on a curve without rational 2-torsion skips the field cross-check") {
    const CurveModel c11a1(Coeffs{0, -1, 1, -10, -20});
    CHECK(sieve_S({c11a1, 600}) == oracle_sieve({0, -1, 1, -10, -20}, 11, 600, false));
}

TEST_CASE("sieve bound is limited by the configuration") {
    Config cfg;
    cfg.point_count_bound = 1000;
    CHECK_THROWS_AS(sieve_S({x014, 2000}, cfg), PreconditionViolated);
    CHECK_THROWS_AS(sieve_S({x014, 3}), PreconditionViolated);
}

TEST_CASE("enumerate_M examples") {
    const std::vector<long> s = {5, 13, 61, 101};
    CHECK(enumerate_M(s, 1, std::nullopt) == s);
    CHECK(enumerate_M(s, 2, 1000) == std::vector<long>{65, 305, 505, 793});
    CHECK(enumerate_M(s, 3, std::nullopt) == std::vector<long>{3965, 6565, 30805, 80093});
    CHECK(enumerate_M(s, 5, std::nullopt).empty());
    CHECK_THROWS_AS(enumerate_M(s, 0, std::nullopt), PreconditionViolated);
}

TEST_CASE("enumerate_M properties") {
    std::mt19937_64 rng(7);
    const std::vector<long> pool = primes_up_to(200);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<long> primes;
        for (long p : pool)
            if (rng() % 3 == 0) primes.push_back(p);
        const long r = 1 + static_cast<long>(rng() % 3);
        const long bound = 10 + static_cast<long>(rng() % 20000);
        const auto Ms = enumerate_M(primes, r, bound);
        CHECK(std::is_sorted(Ms.begin(), Ms.end()));
        CHECK(std::adjacent_find(Ms.begin(), Ms.end()) == Ms.end());
        for (long M : Ms) {
            CHECK(M <= bound);
            CHECK(is_squarefree(M));
            const auto f = prime_divisors(M);
            CHECK(static_cast<long>(f.size()) == r);
            for (long q : f) CHECK(std::find(primes.begin(), primes.end(), q) != primes.end());
        }
        // Count by brute force over products of the listed primes.
        long expected = 0;
        for (long M = 2; M <= bound; ++M) {
            if (!is_squarefree(M)) continue;
            const auto f = prime_divisors(M);
            bool ok = static_cast<long>(f.size()) == r;
            for (long q : f) ok = ok && std::find(primes.begin(), primes.end(), q) != primes.end();
            expected += ok;
        }
        CHECK(static_cast<long>(Ms.size()) == expected);
    }
}

TEST_CASE("admissibility") {
    const FamilyContext ctx = make_family_context(x014, false);
    CHECK_NOTHROW(require_admissible(ctx, 5));
    CHECK_NOTHROW(require_admissible(ctx, 65));
    CHECK_THROWS_AS(require_admissible(ctx, 3), InadmissibleTwist);
    CHECK_THROWS_AS(require_admissible(ctx, 10), InadmissibleTwist);
    CHECK_THROWS_AS(require_admissible(ctx, 25), InadmissibleTwist);
    CHECK_THROWS_AS(require_admissible(ctx, 17), InadmissibleTwist);
    CHECK_THROWS_AS(require_admissible(ctx, 5 * 17), InadmissibleTwist);
    CHECK_THROWS_AS(require_admissible(ctx, -5), InadmissibleTwist);
}

TEST_CASE("split conditions") {
    const SplitConditions s65 = check_split_conditions(x014, 65);
    CHECK(s65.M_mod_8 == 1);
    CHECK(s65.all_split);
    REQUIRE(s65.symbols.size() == 2);
    CHECK(s65.symbols[0] == std::pair<long, int>{2, 1});
    CHECK(s65.symbols[1] == std::pair<long, int>{7, 1});
    const SplitConditions s5 = check_split_conditions(x014, 5);
    CHECK_FALSE(s5.all_split);
    CHECK(s5.symbols[0].second == -1);
    CHECK(s5.symbols[1].second == -1);  // 5 is a nonresidue mod 7
}

TEST_CASE("twists of X0(14)") {
    const FamilyContext ctx = make_family_context(x014, true);
    const TwistReport r5 = verify_twist(ctx, 5, true);
    CHECK(r5.status == TwistStatus::verified);
    CHECK(r5.r == 1);
    CHECK(r5.ord2_computed == 0);
    CHECK(r5.twist_conductor == 14 * 25);
    REQUIRE(r5.torsion);
    CHECK(r5.torsion->order() == 2);
    long ord2_c5 = -1, ord2_c7 = -1, ord2_c2 = -1;
    for (const auto& d : r5.tamagawa_table) {
        const long v = valuation(Integer(d.tamagawa), 2);
        if (d.prime == 2) ord2_c2 = v;
        if (d.prime == 5) ord2_c5 = v;
        if (d.prime == 7) ord2_c7 = v;
    }
    CHECK(ord2_c2 == 1);
    CHECK(ord2_c5 == 1);
    CHECK(ord2_c7 == 0);
    REQUIRE(r5.ledger);
    CHECK(r5.ledger->sha2 == "trivial");
    CHECK(r5.ledger->rhs == 0);
    REQUIRE(r5.modsym);
    CHECK(r5.modsym->agrees);

    const TwistReport r65 = verify_twist(ctx, 65, true);
    CHECK(r65.status == TwistStatus::verified);
    CHECK(r65.ord2_computed == 1);
    REQUIRE(r65.ledger);
    CHECK(r65.ledger->rhs == 1);
    CHECK(r65.split.all_split);
    REQUIRE(r65.modsym);
    CHECK(r65.modsym->agrees);
    CHECK(r65.modsym->l_alg == r65.lvalue->value);
}

TEST_CASE("twist of 99C1") {
    const TwistReport r = verify_twist(c99c1, 5, true);
    CHECK(r.status == TwistStatus::verified);
    CHECK(r.ord2_computed == 0);
    REQUIRE(r.ledger);
    CHECK(r.ledger->balanced);
}

TEST_CASE("base curve fits the pattern with r = 0") {
    const TwistReport r = verify_twist(x014, 1, true);
    CHECK(r.ord2_predicted == -1);
    CHECK(r.ord2_computed == -1);
    REQUIRE(r.lvalue);
    CHECK(r.lvalue->value == Rational(1, 6));
}

TEST_CASE("ledger arithmetic") {
    TwistReport rep;
    rep.M = 5;
    rep.lvalue.emplace();
    rep.lvalue->value = Rational(2);
    rep.lvalue->ord2 = Val2::of(1);
    rep.torsion = TorsionGroup{{2}, {}, {}};
    ReductionData a, b;
    a.prime = 3;
    a.tamagawa = 4;
    b.prime = 5;
    b.tamagawa = 6;
    rep.tamagawa_table = {a, b};
    // Without a descent the Sha term is unknown.
    LedgerRecord open = bsd2_ledger(rep);
    CHECK(open.status == TwistStatus::undecided);
    CHECK(open.sha2 == "unknown");
    CHECK(open.rhs == 1);
    CHECK(open.balanced);

    SelmerResult sel;
    sel.sha2_conclusion = Sha2Conclusion::trivial;
    rep.selmer = sel;
    CHECK(bsd2_ledger(rep).status == TwistStatus::verified);
    rep.lvalue->ord2 = Val2::of(0);
    CHECK_THROWS_AS(bsd2_ledger(rep), LedgerMismatch);
}

TEST_CASE("family output does not depend on the thread count") {
    const FamilyContext ctx = make_family_context(x014, false);
    const FamilyRun one = run_family(ctx, 1, 400, std::nullopt, false, 1);
    const FamilyRun three = run_family(ctx, 1, 400, std::nullopt, false, 3);
    REQUIRE(one.reports.size() == 12);
    REQUIRE(three.reports.size() == one.reports.size());
    for (size_t i = 0; i < one.reports.size(); ++i) {
        CHECK(one.reports[i].M == three.reports[i].M);
        CHECK(one.reports[i].lvalue->value == three.reports[i].lvalue->value);
        CHECK(one.reports[i].status == TwistStatus::verified);
    }
    const FamilyRun first = run_family(ctx, 2, std::nullopt, 3, false, 2);
    REQUIRE(first.reports.size() == 3);
    CHECK(first.reports[0].M == 65);
    CHECK(first.reports[1].M == 305);
    CHECK(first.reports[2].M == 505);
}

TEST_CASE("configuration") {
    const Config d;
    CHECK(Config::from_json(d.to_json()).to_json() == d.to_json());
    CHECK(Config::from_json(nlohmann::json::parse(R"({"precision_bits": 256})")).precision_bits == 256);
    CHECK_THROWS_AS(Config::from_json(nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
    CHECK_THROWS_AS(Config::from_json(nlohmann::json::parse(R"({"precision_bits": 8})")), ConfigError);
    CHECK_THROWS_AS(Config::from_json(nlohmann::json::parse(R"({"precision_bits": "x"})")), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/bsd2.json"), ConfigError);

    const std::string path =
        (std::filesystem::temp_directory_path() / "bsd2_test_config.json").string();
    std::ofstream(path) << R"({"descent_extra_levels": 3})";
    ::setenv("BSD2_CONFIG", path.c_str(), 1);
    CHECK(Config::resolve(std::nullopt).descent_extra_levels == 3);
    ::unsetenv("BSD2_CONFIG");
    CHECK(Config::resolve(std::nullopt).descent_extra_levels == 0);
    CHECK(Config::resolve(path).descent_extra_levels == 3);
    std::filesystem::remove(path);
}

TEST_CASE("catalog") {
    const auto cat = parse_catalog("# comment\nfoo 1 0 1 4 -6  # trailing\n\nbar [0,0,1,-1,0]\n");
    REQUIRE(cat.size() == 2);
    CHECK(conductor(cat[0].curve) == 14);
    CHECK(resolve_curve("14a1", builtin_catalog()).label == "14A1");
    CHECK(conductor(resolve_curve("[1,-1,0,-15,8]", builtin_catalog()).curve) == 99);
    CHECK_THROWS_AS(resolve_curve("nope", builtin_catalog()), PreconditionViolated);
    CHECK_THROWS_AS(parse_catalog("bad 1 2"), PreconditionViolated);
    for (const auto& e : builtin_catalog()) CHECK(conductor(e.curve) == std::stol(e.label.substr(0, 2)));
}
