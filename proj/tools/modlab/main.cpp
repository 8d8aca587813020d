#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "modlab/error.hpp"
#include "modlab/lab/config.hpp"
#include "modlab/lab/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitSchema = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(const modlab::Error& e) {
    if (modlab::is_schema_error(e.code())) return kExitSchema;
    if (modlab::is_numerical_guard(e.code())) return kExitNumerical;
    return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modlab: modular-momentum desk experiments"};
    std::string experiment;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;

    app.add_option("experiment", experiment, "experiment name, or 'list' to show all experiments")->required();
    app.add_option("--config,-c", config_path, "key = value parameter file");
    app.add_option("--out,-o", out_dir, "output directory (default: current directory)");
    app.add_option("--format,-f", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed,-s", seed, "64-bit unsigned seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitSchema;
    }

    if (experiment == "list") {
        std::cout << modlab::lab::describe_experiments();
        return kExitOk;
    }

    try {
        modlab::lab::ParamMap params;
        if (!config_path.empty()) params = modlab::lab::read_config_file(config_path);
        auto cfg = modlab::lab::make_config(experiment, std::move(params));
        if (out_dir) cfg.out_dir = *out_dir;
        if (format) cfg.format = modlab::lab::parse_format(*format);
        if (seed) cfg.seed = *seed;
        const auto result = modlab::lab::run(cfg);
        std::cout << result.path << "\n";
        for (const auto& [key, value] : result.record.summary) {
            std::cout << "  " << key << " = " << modlab::lab::format_number(value) << "\n";
        }
        return kExitOk;
    } catch (const modlab::Error& e) {
        std::cerr << "modlab: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "modlab: " << e.what() << "\n";
        return kExitFailure;
    }
}
