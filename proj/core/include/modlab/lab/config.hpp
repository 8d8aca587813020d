#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace modlab::lab {

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& text);

enum class ParamType { real, integer, real_list, choice };

struct ParamSpec {
    std::string key;
    ParamType type = ParamType::real;
    /// Empty means the key is required.
    std::optional<std::string> default_value;
    std::string doc;
    std::vector<std::string> choices;  // for ParamType::choice
};

struct ExperimentSchema {
    std::string name;
    std::string summary;
    std::vector<ParamSpec> params;
};

using ParamMap = std::map<std::string, std::string>;

struct ExperimentConfig {
    std::string name;
    ParamMap params;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;
};

/// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
/// Duplicate keys and lines without `=` are SchemaViolation.
ParamMap parse_config_text(const std::string& text);
ParamMap read_config_file(const std::string& path);

/// Splits out the reserved keys seed, format and out_dir.
ExperimentConfig make_config(std::string name, ParamMap params);

/// Typed view of a validated parameter map.
class Params {
public:
    /// Validates `given` against the schema, reporting every unknown key,
    /// missing key and malformed value in one SchemaViolation.
    Params(const ExperimentSchema& schema, const ParamMap& given);

    double real(const std::string& key) const;
    long long integer(const std::string& key) const;
    std::vector<double> real_list(const std::string& key) const;
    const std::string& text(const std::string& key) const;

    /// Resolved key/value pairs in schema order.
    const std::vector<std::pair<std::string, std::string>>& echo() const noexcept { return echo_; }

private:
    const std::string& raw(const std::string& key) const;
    std::vector<std::pair<std::string, std::string>> echo_;
};

std::optional<double> parse_real(const std::string& text);
std::optional<long long> parse_integer(const std::string& text);
std::optional<std::vector<double>> parse_real_list(const std::string& text);
std::optional<std::uint64_t> parse_u64(const std::string& text);

}  // namespace modlab::lab
