#pragma once

#include <chrono>
#include <ostream>
#include <string>

#include <json.hpp>

#include "bsd2/config.hpp"
#include "bsd2/twist.hpp"

namespace bsd2 {

inline constexpr const char* report_schema_version = "bsd2-report/1";

using Json = nlohmann::ordered_json;

// Integers that fit in a long become JSON numbers, larger ones strings.
Json integer_json(const Integer& n);
Json val2_json(const Val2& v);  // number, or "inf"
Json curve_json(const CurveModel& E);
Json reduction_json(const ReductionData& d);
Json torsion_json(const TorsionGroup& t);
Json lvalue_json(const RationalLValue& v);
Json selmer_json(const SelmerResult& s);
Json ledger_json(const LedgerRecord& l);
Json identity_json(const IdentityReport& r);
Json split_json(const SplitConditions& s);
Json twist_json(const TwistReport& r);

// "verified", "mismatch" or "undecided"; empty for informational items.
std::string item_status(const Json& item);

// One JSON object per line: a header (schema, command, configuration), the
// items in the order given, and a closing summary. Output is a pure
// function of the inputs unless timing is requested.
class ReportWriter {
public:
    ReportWriter(std::ostream& out, Json command, const Config& config, bool timing);
    void item(Json item);
    void finish();
    // 1 on any mismatch, else 3 on any undecided, else 0.
    int exit_code() const;

private:
    std::ostream& out_;
    bool timing_;
    std::chrono::steady_clock::time_point start_;
    long verified_ = 0, mismatch_ = 0, undecided_ = 0, items_ = 0;
};

}  // namespace bsd2
