#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

#include "bsd2/config.hpp"
#include "bsd2/errors.hpp"
#include "bsd2/report.hpp"
#include "bsd2/twist.hpp"

using namespace bsd2;

namespace {

constexpr int exit_usage = 2;

struct Globals {
    std::optional<std::string> config_path;
    std::optional<std::string> catalog_path;
    bool table = false;
    bool timing = false;
};

int exit_code_for(const Error& e) {
    const std::string& k = e.kind();
    if (k == "PrecisionExhausted" || k == "NoRationalInRange") return 3;
    if (k == "CriteriaDisagree" || k == "LedgerMismatch" || k == "IdentityViolated" ||
        k == "IntegralityViolated" || k == "CrossCheckFailed" || k == "CalibrationMismatch")
        return 1;
    return exit_usage;
}

std::string factored(const Integer& n) {
    if (n == 0) return "0";
    std::string s = n < 0 ? "-" : "";
    bool first = true;
    for (const auto& [p, e] : factor(abs(n))) {
        if (!first) s += "*";
        first = false;
        s += p.get_str();
        if (e > 1) s += "^" + std::to_string(e);
    }
    return first ? s + "1" : s;
}

Json field_json(const CurveModel& E) {
    TwoDivisionField f;
    try {
        f = two_division_field(E);
    } catch (const Degree6Field&) {
        return {{"description", "degree 6"}};
    }
    Json j = {{"description", f.str()}};
    if (f.kind == TwoDivisionField::Kind::quadratic) j["discriminant"] = integer_json(f.discriminant);
    return j;
}

std::vector<long> parse_long_list(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t used = 0;
        long v = 0;
        try {
            v = std::stol(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size()) throw PreconditionViolated("not an integer: '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw PreconditionViolated("empty list");
    return out;
}

class Session {
public:
    Session(const Globals& g, Json command)
        : globals_(g),
          config_(Config::resolve(g.config_path)),
          catalog_(g.catalog_path ? load_catalog(*g.catalog_path) : builtin_catalog()),
          command_(std::move(command)) {}

    const Config& config() const { return config_; }
    CatalogEntry curve(const std::string& text) const { return resolve_curve(text, catalog_); }
    ReportWriter& writer() {
        if (!writer_) writer_.emplace(std::cout, command_, config_, globals_.timing);
        return *writer_;
    }
    void table(const std::string& line) const {
        if (globals_.table) std::cerr << line << '\n';
    }
    int finish() {
        writer().finish();
        return writer().exit_code();
    }

private:
    Globals globals_;
    Config config_;
    std::vector<CatalogEntry> catalog_;
    Json command_;
    std::optional<ReportWriter> writer_;
};

int cmd_curve_info(Session& s, const std::string& curve_text) {
    const CatalogEntry entry = s.curve(curve_text);
    const CurveModel E = minimal_model(entry.curve).model;
    Json j = {{"kind", "curve_info"},
              {"label", entry.label},
              {"input_model", curve_json(entry.curve)},
              {"minimal_model", curve_json(E)},
              {"discriminant", integer_json(E.discriminant())},
              {"discriminant_factored", factored(E.discriminant())},
              {"conductor", integer_json(conductor(E))},
              {"torsion", torsion_json(torsion_subgroup(E))},
              {"two_division_field", field_json(E)}};
    if (!two_torsion_x(E).empty()) {
        const CurveModel dual = minimal_model(two_isogenous_curve(E)).model;
        j["isogenous_curve"] = curve_json(dual);
        j["isogenous_two_division_field"] = field_json(dual);
    }
    Json tam = Json::array();
    for (const auto& d : local_data(E)) tam.push_back(reduction_json(d));
    j["tamagawa"] = tam;
    LValueOptions opts;
    opts.bits = s.config().precision_bits;
    opts.max_terms = s.config().max_series_terms;
    try {
        j["l_alg"] = lvalue_json(algebraic_l_value(E, opts));
    } catch (const SignMinusOne& e) {
        j["l_alg"] = {{"error", e.kind()}, {"message", e.what()}};
    }
    s.writer().item(j);
    s.table(entry.label + "  N = " + j["conductor"].dump() + "  disc = " +
            j["discriminant_factored"].get<std::string>() + "  tors = " +
            j["torsion"]["structure"].get<std::string>());
    return s.finish();
}

int cmd_sieve(Session& s, const std::string& curve_text, long bound, bool aq_nonzero) {
    const CatalogEntry entry = s.curve(curve_text);
    const auto primes = sieve_S(SieveSpec{entry.curve, bound, aq_nonzero}, s.config());
    const bool has_two_torsion = !two_torsion_x(entry.curve).empty();
    s.writer().item({{"kind", "sieve"},
                     {"label", entry.label},
                     {"bound", bound},
                     {"require_aq_nonzero", aq_nonzero},
                     {"primes", primes},
                     {"count", primes.size()},
                     {"cross_check", has_two_torsion ? "agree" : "skipped: no rational 2-torsion"},
                     {"status", "verified"}});
    std::string line;
    for (long q : primes) line += std::to_string(q) + " ";
    s.table(line);
    return s.finish();
}

void table_twist(const Session& s, const TwistReport& r) {
    std::ostringstream os;
    os << std::setw(10) << r.M << std::setw(4) << r.r << std::setw(8) << r.ord2_predicted << std::setw(8)
       << r.ord2_computed.str() << "  " << (r.lvalue ? to_string(r.lvalue->value) : "-") << "  "
       << to_string(r.status);
    s.table(os.str());
}

int cmd_verify(Session& s, const std::string& curve_text, const std::vector<long>& Ms, bool with_selmer,
               bool with_modsym) {
    const CatalogEntry entry = s.curve(curve_text);
    const FamilyContext ctx = make_family_context(entry.curve, with_modsym, s.config());
    for (long M : Ms) require_admissible(ctx, M);
    s.table("         M   r    pred    ord2  L_alg  status");
    for (long M : Ms) {
        const TwistReport r = verify_twist(ctx, M, with_selmer);
        Json j = twist_json(r);
        j["label"] = entry.label;
        s.writer().item(j);
        table_twist(s, r);
    }
    return s.finish();
}

int cmd_identities(Session& s, const std::string& curve_text, const std::vector<long>& ms) {
    const CatalogEntry entry = s.curve(curve_text);
    const CurveModel E = minimal_model(entry.curve).model;
    const Integer N = conductor(E);
    for (long m : ms) {
        const std::string where = "m = " + std::to_string(m);
        if (m < 5 || m % 2 == 0 || !is_squarefree(m))
            throw InadmissibleTwist(where + " must be odd, squarefree and greater than 1");
        for (long q : prime_divisors(m)) {
            if (q % 4 != 1) throw InadmissibleTwist(where + ": factor " + std::to_string(q) + " is not 1 mod 4");
            if (mpz_divisible_ui_p(N.get_mpz_t(), q))
                throw InadmissibleTwist(where + ": factor " + std::to_string(q) + " divides the conductor");
        }
    }
    const FamilyContext ctx = make_family_context(E, true, s.config());
    for (long m : ms) {
        for (const auto& r : identity_suite(*ctx.modsym, m)) {
            s.writer().item(identity_json(r));
            s.table(std::to_string(m) + "  " + r.identity + " " + r.parameters + "  " +
                    (r.passed ? "pass" : "FAIL"));
        }
    }
    return s.finish();
}

int cmd_family(Session& s, const std::string& curve_text, const std::vector<long>& rs,
               std::optional<long> product_bound, std::optional<long> count, unsigned jobs,
               bool with_selmer, bool with_modsym, bool aq_nonzero) {
    const CatalogEntry entry = s.curve(curve_text);
    const FamilyContext ctx = make_family_context(entry.curve, with_modsym, s.config(), aq_nonzero);
    s.table("         M   r    pred    ord2  L_alg  status");
    for (long r : rs) {
        const FamilyRun run = run_family(ctx, r, product_bound, count, with_selmer, jobs);
        std::map<std::string, long> ord2_histogram;
        long verified = 0;
        for (const auto& rep : run.reports) {
            Json j = twist_json(rep);
            j["label"] = entry.label;
            s.writer().item(j);
            table_twist(s, rep);
            ++ord2_histogram[rep.ord2_computed.str()];
            verified += rep.status == TwistStatus::verified;
        }
        s.writer().item({{"kind", "family_summary"},
                         {"label", entry.label},
                         {"r", r},
                         {"twists", run.reports.size()},
                         {"verified", verified},
                         {"ord2_predicted", r - 1},
                         {"ord2_histogram", ord2_histogram}});
    }
    return s.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2-adic BSD verification for quadratic twist families"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--config", g.config_path, "JSON configuration file (overrides $BSD2_CONFIG)");
    app.add_option("--catalog", g.catalog_path, "curve catalog: one 'label a1 a2 a3 a4 a6' per line");
    app.add_flag("--table", g.table, "print a human-readable table to stderr");
    app.add_flag("--timing", g.timing, "add wall-clock time to the summary line");

    std::string curve;
    auto* info = app.add_subcommand("curve-info", "minimal model, invariants and L^(alg) of a curve");
    info->add_option("curve", curve, "label or [a1,a2,a3,a4,a6]")->required();

    long bound = 400;
    bool aq_nonzero = false;
    auto* sieve = app.add_subcommand("sieve", "list the primes of the sieve set up to a bound");
    sieve->add_option("curve", curve)->required();
    sieve->add_option("--bound", bound)->capture_default_str();
    sieve->add_flag("--require-aq-nonzero", aq_nonzero);

    std::string M_list;
    bool with_selmer = false, with_modsym = false;
    auto* verify = app.add_subcommand("verify", "verify one or more twists");
    verify->add_option("curve", curve)->required();
    verify->add_option("--M", M_list, "twist parameter(s), comma separated")->required();
    verify->add_flag("--with-selmer", with_selmer);
    verify->add_flag("--with-modsym", with_modsym);

    std::string m_list;
    auto* identities = app.add_subcommand("identities", "exact modular-symbol identity suite");
    identities->add_option("curve", curve)->required();
    identities->add_option("--m-list", m_list, "comma separated m values")->required();

    std::string r_list;
    std::optional<long> product_bound, count;
    unsigned jobs = 1;
    auto* family = app.add_subcommand("family", "verify every admissible twist with r prime factors");
    family->add_option("curve", curve)->required();
    family->add_option("--r", r_list, "number of prime factors, comma separated")->required();
    auto* pb = family->add_option("--product-bound", product_bound);
    family->add_option("--count", count)->excludes(pb);
    family->add_option("--jobs", jobs)->capture_default_str()->check(CLI::Range(1U, 256U));
    family->add_flag("--with-selmer", with_selmer);
    family->add_flag("--with-modsym", with_modsym);
    family->add_flag("--require-aq-nonzero", aq_nonzero);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    // Flags that cannot change results stay out of the echo, so reports
    // for different --jobs values compare byte for byte.
    Json args = Json::array();
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--table" || a == "--timing" || a.rfind("--jobs=", 0) == 0) continue;
        if (a == "--jobs") {
            ++i;
            continue;
        }
        args.push_back(a);
    }
    const std::string name = app.get_subcommands().front()->get_name();
    Json command = {{"name", name}, {"args", args}};
    try {
        if (name == "family" && !product_bound && !count)
            throw PreconditionViolated("family needs --product-bound or --count");
        Session s(g, command);
        if (name == "curve-info") return cmd_curve_info(s, curve);
        if (name == "sieve") return cmd_sieve(s, curve, bound, aq_nonzero);
        if (name == "verify") return cmd_verify(s, curve, parse_long_list(M_list), with_selmer, with_modsym);
        if (name == "identities") return cmd_identities(s, curve, parse_long_list(m_list));
        return cmd_family(s, curve, parse_long_list(r_list), product_bound, count, jobs, with_selmer,
                          with_modsym, aq_nonzero);
    } catch (const Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
