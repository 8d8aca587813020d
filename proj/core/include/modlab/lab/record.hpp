#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "modlab/lab/config.hpp"

namespace modlab::lab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kGeneratorName = "philox4x32-10";

struct ExperimentRecord {
    std::string experiment;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> params_echo;
    /// Scalar results, written before the table.
    std::vector<std::pair<std::string, double>> summary;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

/// 17 significant digits; nan, inf and -inf spelled out.
std::string format_number(double v);

std::string provenance_line(const ExperimentRecord& record);
std::string render_csv(const ExperimentRecord& record);
/// Non-finite numbers become null.
std::string render_json(const ExperimentRecord& record);

std::string output_filename(const ExperimentRecord& record, OutputFormat format);

/// Writes `<name>-<seed>.<ext>` into out_dir (created if needed) and returns
/// its path. Throws IoFailure.
std::string write_record(const ExperimentRecord& record, const std::string& out_dir, OutputFormat format);

}  // namespace modlab::lab
