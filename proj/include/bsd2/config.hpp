#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bsd2/curve.hpp"

namespace bsd2 {

// Run-wide knobs; echoed into every report.
struct Config {
    long precision_bits = 128;
    long point_count_bound = 10'000'000;  // largest prime whose a_q may be counted
    long modsym_level_cap = 200;
    long descent_extra_levels = 0;
    long max_series_terms = 20'000'000;

    nlohmann::json to_json() const;
    // Unknown keys and out-of-range values raise ConfigError.
    static Config from_json(const nlohmann::json& j);
    static Config load(const std::string& path);
    // Explicit path if given, else $BSD2_CONFIG if set, else defaults.
    static Config resolve(const std::optional<std::string>& explicit_path);
};

struct CatalogEntry {
    std::string label;
    CurveModel curve;
};

// One curve per line: "label a1 a2 a3 a4 a6"; '#' starts a comment.
std::vector<CatalogEntry> parse_catalog(const std::string& text);
std::vector<CatalogEntry> load_catalog(const std::string& path);
// The five base curves of the twist families plus a few reference curves.
const std::vector<CatalogEntry>& builtin_catalog();

// A catalog label (case-insensitive) or a coefficient list such as
// "[1,0,1,4,-6]". Raises PreconditionViolated for unknown labels.
CatalogEntry resolve_curve(const std::string& text, const std::vector<CatalogEntry>& catalog);

}  // namespace bsd2
