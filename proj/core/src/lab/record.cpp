#include "modlab/lab/record.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "modlab/error.hpp"

namespace modlab::lab {
namespace {

std::string quoted(const std::string& s) { return nlohmann::json(s).dump(); }

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

}  // namespace

void ExperimentRecord::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
        fail(ErrorCode::InternalInconsistency, experiment + ": row width does not match the column count");
    }
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string provenance_line(const ExperimentRecord& record) {
    return std::string("# modlab ") + kToolVersion + " experiment=" + record.experiment +
           " seed=" + std::to_string(record.seed) + " rng=" + kGeneratorName;
}

std::string render_csv(const ExperimentRecord& record) {
    std::string out = provenance_line(record) + "\n";
    for (const auto& [k, v] : record.params_echo) out += "# param " + k + " = " + v + "\n";
    for (const auto& [k, v] : record.summary) out += "# summary " + k + " = " + format_number(v) + "\n";
    for (std::size_t c = 0; c < record.columns.size(); ++c) {
        if (c) out += ",";
        out += record.columns[c];
    }
    out += "\n";
    for (const auto& row : record.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            out += format_number(row[c]);
        }
        out += "\n";
    }
    return out;
}

std::string render_json(const ExperimentRecord& record) {
    std::string out = "{\n";
    out += "  \"provenance\": {\"tool\": \"modlab\", \"version\": " + quoted(kToolVersion) +
           ", \"seed\": " + std::to_string(record.seed) + ", \"rng\": " + quoted(kGeneratorName) + "},\n";
    out += "  \"experiment\": " + quoted(record.experiment) + ",\n";
    out += "  \"params\": {";
    for (std::size_t i = 0; i < record.params_echo.size(); ++i) {
        out += i ? ", " : "";
        out += quoted(record.params_echo[i].first) + ": " + quoted(record.params_echo[i].second);
    }
    out += "},\n  \"summary\": {";
    for (std::size_t i = 0; i < record.summary.size(); ++i) {
        out += i ? ", " : "";
        out += quoted(record.summary[i].first) + ": " + json_number(record.summary[i].second);
    }
    out += "},\n  \"columns\": [";
    for (std::size_t i = 0; i < record.columns.size(); ++i) {
        out += i ? ", " : "";
        out += quoted(record.columns[i]);
    }
    out += "],\n  \"rows\": [";
    for (std::size_t r = 0; r < record.rows.size(); ++r) {
        out += r ? ",\n    [" : "\n    [";
        for (std::size_t c = 0; c < record.rows[r].size(); ++c) {
            out += c ? ", " : "";
            out += json_number(record.rows[r][c]);
        }
        out += "]";
    }
    out += record.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string output_filename(const ExperimentRecord& record, OutputFormat format) {
    return record.experiment + "-" + std::to_string(record.seed) + "." + to_string(format);
}

std::string write_record(const ExperimentRecord& record, const std::string& out_dir, OutputFormat format) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) fail(ErrorCode::IoFailure, "cannot create output directory '" + out_dir + "': " + ec.message());
    const auto path = (fs::path(out_dir) / output_filename(record, format)).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
    out << (format == OutputFormat::csv ? render_csv(record) : render_json(record));
    out.close();
    if (!out) fail(ErrorCode::IoFailure, "failed writing '" + path + "'");
    return path;
}

}  // namespace modlab::lab
