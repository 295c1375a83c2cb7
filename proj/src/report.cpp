#include "bsd2/report.hpp"

namespace bsd2 {

Json integer_json(const Integer& n) {
    if (n.fits_slong_p()) return n.get_si();
    return n.get_str();
}

Json val2_json(const Val2& v) {
    if (v.infinite) return "inf";
    return v.value;
}

Json curve_json(const CurveModel& E) {
    Json a = Json::array();
    for (const auto& c : E.a()) a.push_back(integer_json(c));
    return a;
}

Json reduction_json(const ReductionData& d) {
    return {{"prime", integer_json(d.prime)},
            {"kodaira", d.kodaira},
            {"reduction", to_string(d.kind)},
            {"conductor_exponent", d.conductor_exponent},
            {"tamagawa", d.tamagawa},
            {"ord2_tamagawa", valuation(Integer(d.tamagawa), 2)}};
}

Json torsion_json(const TorsionGroup& t) {
    return {{"structure", t.str()}, {"order", t.order()}};
}

Json lvalue_json(const RationalLValue& v) {
    return {{"value", to_string(v.value)},
            {"ord2", val2_json(v.ord2)},
            {"provenance", "reconstructed"},
            {"numeric_estimate", v.numeric_estimate.str(40)},
            {"tolerance", v.tolerance.str(6)},
            {"denominator_bound", integer_json(v.denominator_bound)},
            {"terms_used", v.terms_used},
            {"bits", static_cast<long>(v.bits)}};
}

namespace {
Json integer_list(const std::vector<Integer>& xs) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(integer_json(x));
    return a;
}
}  // namespace

Json selmer_json(const SelmerResult& s) {
    return {{"phi_selmer_generators", integer_list(s.phi_selmer_generators)},
            {"phi_hat_selmer_generators", integer_list(s.phi_hat_selmer_generators)},
            {"dim_phi", s.dim_phi},
            {"dim_phi_hat", s.dim_phi_hat},
            {"two_torsion_dim", s.two_torsion_dim},
            {"sel2_lower", s.sel2_lower},
            {"sel2_upper", s.sel2_upper},
            {"sel2_refined_upper", s.sel2_refined_upper},
            {"analytic_rank_zero", s.analytic_rank_zero},
            {"sha2", to_string(s.sha2_conclusion)},
            {"provenance", "exact"}};
}

Json ledger_json(const LedgerRecord& l) {
    return {{"ord2_l_alg", val2_json(l.ord2_l_alg)},
            {"sha2", l.sha2},
            {"ord2_sha", l.ord2_sha},
            {"ord2_tamagawa", l.ord2_tamagawa},
            {"ord2_torsion", l.ord2_torsion},
            {"rhs", l.rhs},
            {"balanced", l.balanced},
            {"status", to_string(l.status)},
            {"assumption", l.assumption}};
}

Json identity_json(const IdentityReport& r) {
    return {{"kind", "identity"},
            {"identity", r.identity},
            {"m", r.m},
            {"parameters", r.parameters},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"provenance", "exact"},
            {"status", r.passed ? "verified" : "mismatch"}};
}

Json split_json(const SplitConditions& s) {
    Json symbols = Json::array();
    for (const auto& [l, v] : s.symbols) symbols.push_back({{"prime", l}, {"symbol", v}});
    return {{"M_mod_8", s.M_mod_8}, {"symbols", symbols}, {"all_split", s.all_split}};
}

Json twist_json(const TwistReport& r) {
    Json j = {{"kind", "twist"},
              {"M", r.M},
              {"r", r.r},
              {"ord2_predicted", r.ord2_predicted},
              {"ord2_computed", val2_json(r.ord2_computed)}};
    if (r.twist) j["twist_model"] = curve_json(*r.twist);
    j["twist_conductor"] = integer_json(r.twist_conductor);
    j["real_components"] = r.real_components;
    j["l_alg"] = r.lvalue ? lvalue_json(*r.lvalue) : Json(nullptr);
    Json tam = Json::array();
    for (const auto& d : r.tamagawa_table)
        if (d.kind != ReductionKind::good) tam.push_back(reduction_json(d));
    j["tamagawa"] = tam;
    j["torsion"] = r.torsion ? torsion_json(*r.torsion) : Json(nullptr);
    j["split_conditions"] = split_json(r.split);
    if (r.modsym) {
        const ModsymCrossPath& m = *r.modsym;
        j["modsym"] = {{"T_m", to_string(m.T_m)},
                       {"period_ratio", to_string(m.period_ratio)},
                       {"l_alg", to_string(m.l_alg)},
                       {"ord2", val2_json(m.ord2)},
                       {"provenance", "exact"},
                       {"numeric_check",
                        {{"symbol_side", m.numeric.symbol_side.str(30)},
                         {"numeric_side", m.numeric.numeric_side.str(30)},
                         {"tolerance", m.numeric.tolerance.str(6)},
                         {"passed", m.numeric.report.passed}}},
                       {"agrees", m.agrees}};
    }
    if (r.selmer) j["selmer"] = selmer_json(*r.selmer);
    if (r.ledger) j["ledger"] = ledger_json(*r.ledger);
    j["notes"] = r.notes;
    j["status"] = to_string(r.status);
    return j;
}

std::string item_status(const Json& item) {
    if (item.contains("status") && item["status"].is_string()) return item["status"].get<std::string>();
    return "";
}

ReportWriter::ReportWriter(std::ostream& out, Json command, const Config& config, bool timing)
    : out_(out), timing_(timing), start_(std::chrono::steady_clock::now()) {
    const nlohmann::json plain = config.to_json();
    Json config_json;
    for (const auto& [k, v] : plain.items()) config_json[k] = v;
    Json header = {{"kind", "header"},
                   {"schema_version", report_schema_version},
                   {"command", std::move(command)},
                   {"config", config_json}};
    out_ << header.dump() << '\n';
}

void ReportWriter::item(Json item) {
    const std::string s = item_status(item);
    if (s == "mismatch") ++mismatch_;
    if (s == "undecided") ++undecided_;
    if (s == "verified") ++verified_;
    ++items_;
    out_ << item.dump() << '\n';
}

void ReportWriter::finish() {
    Json summary = {{"kind", "summary"},
                    {"items", items_},
                    {"verified", verified_},
                    {"mismatch", mismatch_},
                    {"undecided", undecided_}};
    if (timing_) {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
        summary["wall_seconds"] = dt.count();
    }
    out_ << summary.dump() << '\n';
    out_.flush();
}

int ReportWriter::exit_code() const {
    if (mismatch_) return 1;
    if (undecided_) return 3;
    return 0;
}

}  // namespace bsd2
