#include "bsd2/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "bsd2/errors.hpp"

namespace bsd2 {

nlohmann::json Config::to_json() const {
    return {{"precision_bits", precision_bits},
            {"point_count_bound", point_count_bound},
            {"modsym_level_cap", modsym_level_cap},
            {"descent_extra_levels", descent_extra_levels},
            {"max_series_terms", max_series_terms}};
}

Config Config::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    Config c;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
        const long v = value.get<long>();
        if (key == "precision_bits") {
            if (v < 64 || v > 4096) throw ConfigError("precision_bits must lie in [64, 4096]");
            c.precision_bits = v;
        } else if (key == "point_count_bound") {
            if (v < 1000) throw ConfigError("point_count_bound must be at least 1000");
            c.point_count_bound = v;
        } else if (key == "modsym_level_cap") {
            if (v < 1) throw ConfigError("modsym_level_cap must be positive");
            c.modsym_level_cap = v;
        } else if (key == "descent_extra_levels") {
            if (v < 0 || v > 64) throw ConfigError("descent_extra_levels must lie in [0, 64]");
            c.descent_extra_levels = v;
        } else if (key == "max_series_terms") {
            if (v < 1000) throw ConfigError("max_series_terms must be at least 1000");
            c.max_series_terms = v;
        } else {
            throw ConfigError("unknown configuration key '" + key + "'");
        }
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read configuration file " + path);
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed configuration " + path + ": " + e.what());
    }
}

Config Config::resolve(const std::optional<std::string>& explicit_path) {
    if (explicit_path) return load(*explicit_path);
    if (const char* env = std::getenv("BSD2_CONFIG"); env && *env) return load(env);
    return {};
}

std::vector<CatalogEntry> parse_catalog(const std::string& text) {
    std::vector<CatalogEntry> out;
    std::istringstream lines(text);
    std::string line;
    long lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream is(line);
        std::string label;
        if (!(is >> label)) continue;
        std::string rest, tok;
        while (is >> tok) rest += tok + " ";
        try {
            out.push_back({label, parse_curve(rest)});
        } catch (const Error& e) {
            throw PreconditionViolated("catalog line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<CatalogEntry> load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionViolated("cannot read catalog " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_catalog(ss.str());
}

const std::vector<CatalogEntry>& builtin_catalog() {
    static const std::vector<CatalogEntry> catalog = parse_catalog(
        "11A1 0 -1 1 -10 -20\n"
        "14A1 1 0 1 4 -6\n"
        "34A1 1 0 0 -3 1\n"
        "37A1 0 0 1 -1 0\n"
        "46A1 1 -1 0 -10 -12\n"
        "56B1 0 -1 0 0 -4\n"
        "99C1 1 -1 0 -15 8\n");
    return catalog;
}

CatalogEntry resolve_curve(const std::string& text, const std::vector<CatalogEntry>& catalog) {
    const bool looks_numeric = std::any_of(text.begin(), text.end(), [](char c) {
        return c == '[' || c == ',' || c == ' ';
    });
    if (looks_numeric) return {text, parse_curve(text)};
    auto upper = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    };
    for (const auto& e : catalog)
        if (upper(e.label) == upper(text)) return e;
    throw PreconditionViolated("unknown curve label '" + text + "'");
}

}  // namespace bsd2
