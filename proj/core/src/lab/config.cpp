#include "modlab/lab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "modlab/error.hpp"

namespace modlab::lab {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += sep;
        out += items[i];
    }
    return out;
}

bool valid(const ParamSpec& spec, const std::string& value) {
    switch (spec.type) {
        case ParamType::real: return parse_real(value).has_value();
        case ParamType::integer: return parse_integer(value).has_value();
        case ParamType::real_list: return parse_real_list(value).has_value();
        case ParamType::choice:
            return std::find(spec.choices.begin(), spec.choices.end(), value) != spec.choices.end();
    }
    return false;
}

const char* type_name(ParamType t) {
    switch (t) {
        case ParamType::real: return "real";
        case ParamType::integer: return "integer";
        case ParamType::real_list: return "comma-separated reals";
        case ParamType::choice: return "choice";
    }
    return "?";
}

}  // namespace

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    fail(ErrorCode::SchemaViolation, "format must be csv or json, got '" + text + "'");
}

std::optional<double> parse_real(const std::string& text) {
    const auto s = trim(text);
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long long> parse_integer(const std::string& text) {
    const auto s = trim(text);
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::uint64_t> parse_u64(const std::string& text) {
    const auto s = trim(text);
    if (s.empty() || s[0] == '-' || s[0] == '+') return std::nullopt;
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
    return static_cast<std::uint64_t>(v);
}

std::optional<std::vector<double>> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_real(item);
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

ParamMap parse_config_text(const std::string& text) {
    ParamMap out;
    std::vector<std::string> problems;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            problems.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) {
            problems.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (!out.emplace(key, value).second) {
            problems.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    if (!problems.empty()) fail(ErrorCode::SchemaViolation, join(problems, "; "));
    return out;
}

ParamMap read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoFailure, "cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

ExperimentConfig make_config(std::string name, ParamMap params) {
    ExperimentConfig cfg;
    cfg.name = std::move(name);
    if (auto it = params.find("seed"); it != params.end()) {
        const auto seed = parse_u64(it->second);
        if (!seed) fail(ErrorCode::SchemaViolation, "seed must be an unsigned 64-bit integer");
        cfg.seed = *seed;
        params.erase(it);
    }
    if (auto it = params.find("format"); it != params.end()) {
        cfg.format = parse_format(it->second);
        params.erase(it);
    }
    if (auto it = params.find("out_dir"); it != params.end()) {
        cfg.out_dir = it->second;
        params.erase(it);
    }
    cfg.params = std::move(params);
    return cfg;
}

Params::Params(const ExperimentSchema& schema, const ParamMap& given) {
    std::set<std::string> known;
    std::vector<std::string> missing;
    std::vector<std::string> malformed;
    for (const auto& spec : schema.params) {
        known.insert(spec.key);
        const auto it = given.find(spec.key);
        if (it == given.end()) {
            if (!spec.default_value) {
                missing.push_back(spec.key);
                continue;
            }
            echo_.emplace_back(spec.key, *spec.default_value);
            continue;
        }
        if (!valid(spec, it->second)) {
            std::string what = spec.key + " (expected " + type_name(spec.type);
            if (spec.type == ParamType::choice) what += " of " + join(spec.choices, "|");
            malformed.push_back(what + ", got '" + it->second + "')");
        }
        echo_.emplace_back(spec.key, it->second);
    }
    std::vector<std::string> unknown;
    for (const auto& [key, value] : given) {
        if (!known.count(key)) unknown.push_back(key);
    }
    std::vector<std::string> problems;
    if (!missing.empty()) problems.push_back("missing keys: " + join(missing, ", "));
    if (!unknown.empty()) problems.push_back("unknown keys: " + join(unknown, ", "));
    if (!malformed.empty()) problems.push_back("malformed values: " + join(malformed, ", "));
    if (!problems.empty()) fail(ErrorCode::SchemaViolation, schema.name + ": " + join(problems, "; "));
}

const std::string& Params::raw(const std::string& key) const {
    for (const auto& [k, v] : echo_) {
        if (k == key) return v;
    }
    fail(ErrorCode::InternalInconsistency, "parameter '" + key + "' is not in the schema");
}

double Params::real(const std::string& key) const { return *parse_real(raw(key)); }
long long Params::integer(const std::string& key) const { return *parse_integer(raw(key)); }
std::vector<double> Params::real_list(const std::string& key) const { return *parse_real_list(raw(key)); }
const std::string& Params::text(const std::string& key) const { return raw(key); }

}  // namespace modlab::lab
