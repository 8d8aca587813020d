#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "modlab/lab/config.hpp"
#include "modlab/lab/experiments.hpp"
#include "modlab/lab/record.hpp"
#include "modlab/lab/sampling.hpp"
#include "modlab/states.hpp"
#include "support.hpp"

using namespace modlab;
using namespace modlab::lab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& leaf) {
    const auto dir = fs::temp_directory_path() / ("modlab-test-" + leaf);
    fs::remove_all(dir);
    return dir;
}

std::string message_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
    using C = PhiloxCounter;
    CHECK(philox4x32_10(C{0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniform draws") {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < 20000; ++i) {
        const double u = uniform01(42, i);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / 20000.0 - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / 20000.0));
    CHECK(uniform01(42, 7) == uniform01(42, 7));
    CHECK(uniform01(42, 7) != uniform01(43, 7));
}

TEST_CASE("lattice sampler") {
    std::vector<double> point(16, 0.0);
    point[5] = 0.3;
    const LatticeSampler single(point);
    for (std::uint64_t i = 0; i < 200; ++i) CHECK(single.draw(1, i) == 5);

    // two equal cells: the count in the upper cell is Binomial(N, 1/2)
    std::vector<double> pair(16, 0.0);
    pair[3] = 0.5;
    pair[12] = 0.5;
    const LatticeSampler two(pair);
    const int n = 40000;
    int upper = 0;
    for (int i = 0; i < n; ++i) {
        const auto k = two.draw(9, static_cast<std::uint64_t>(i));
        CHECK((k == 3 || k == 12));
        upper += k == 12;
    }
    CHECK(std::abs(upper - n / 2) < 3.0 * std::sqrt(n / 4.0));

    CHECK_ERROR(LatticeSampler(std::vector<double>(4, 0.0)), ErrorCode::ZeroState);
    CHECK_ERROR(LatticeSampler(std::vector<double>{0.5, -0.1}), ErrorCode::InvalidArgument);
}

TEST_CASE("detections are independent of the thread count") {
    const auto g = make_grid(1024, -32.0, 64.0);
    const auto psi = make_two_slit(g, 8.0, PacketSpec{PacketKind::bump, -4.0, 1.0, 0.0}, 0.0);
    const auto amps = to_momentum(psi);
    const auto serial = sample_detections(amps, 5000, 11, 1);
    const auto threaded = sample_detections(amps, 5000, 11, 4);
    REQUIRE(serial.size() == threaded.size());
    bool same = true;
    long long recoil = 0;
    for (std::size_t i = 0; i < serial.size(); ++i) {
        same = same && serial[i].lattice_step == threaded[i].lattice_step &&
               serial[i].recoil_step == threaded[i].recoil_step;
        recoil -= serial[i].lattice_step;
        CHECK(serial[i].recoil_step == recoil);
        CHECK(serial[i].p_detected == static_cast<double>(serial[i].lattice_step) * g.dp());
    }
    CHECK(same);
    CHECK_ERROR(sample_detections(amps, 0, 1), ErrorCode::InvalidArgument);
}

TEST_CASE("config text") {
    const auto params = parse_config_text("# comment\n  L = 8 \n\nalpha=0.5 # trailing\nkind = bump\n");
    CHECK(params == ParamMap{{"L", "8"}, {"alpha", "0.5"}, {"kind", "bump"}});

    const auto msg = message_of([] { (void)parse_config_text("a = 1\nno equals\na = 2\n = 3\n"); });
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("duplicate") != std::string::npos);
    CHECK_ERROR(parse_config_text("a = 1\na = 2\n"), ErrorCode::SchemaViolation);
    CHECK_ERROR(read_config_file("/nonexistent/modlab.cfg"), ErrorCode::IoFailure);

    const auto cfg = make_config("scattering", {{"r", "10"}, {"seed", "17"}, {"format", "json"}, {"out_dir", "x"}});
    CHECK(cfg.seed == 17);
    CHECK(cfg.format == OutputFormat::json);
    CHECK(cfg.out_dir == "x");
    CHECK(cfg.params == ParamMap{{"r", "10"}});
    CHECK_ERROR(make_config("scattering", {{"seed", "-3"}}), ErrorCode::SchemaViolation);
    CHECK_ERROR(parse_format("xml"), ErrorCode::SchemaViolation);
}

TEST_CASE("value parsers") {
    CHECK(parse_real("1e-3") == 1e-3);
    CHECK_FALSE(parse_real("1.0x"));
    CHECK_FALSE(parse_real("nan"));
    CHECK(parse_integer("-12") == -12);
    CHECK_FALSE(parse_integer("1.5"));
    CHECK(parse_real_list("1, 0.5,0.25") == std::vector<double>{1.0, 0.5, 0.25});
    CHECK_FALSE(parse_real_list("1,,2"));
    CHECK(parse_u64("18446744073709551615") == UINT64_MAX);
    CHECK_FALSE(parse_u64("-1"));
}

TEST_CASE("schema validation reports every problem at once") {
    const auto& schema = schema_for("scattering");
    const auto msg = message_of([&] { Params(schema, {{"alpha", "abc"}, {"bogus", "1"}}); });
    CHECK(msg.find("scattering") != std::string::npos);
    CHECK(msg.find("r") != std::string::npos);
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK(msg.find("alpha") != std::string::npos);

    const Params ok(schema, {{"alpha", "0.5"}, {"r", "10"}});
    CHECK(ok.real("k") == 1.0);
    CHECK(ok.integer("n_theta") == 181);
    REQUIRE(ok.echo().size() == schema.params.size());
    CHECK(ok.echo().front().first == schema.params.front().key);

    const auto unknown = message_of([] { (void)schema_for("nope"); });
    for (const auto& name : experiment_names()) CHECK(unknown.find(name) != std::string::npos);
    CHECK_ERROR(schema_for("nope"), ErrorCode::UnknownExperiment);
}

TEST_CASE("every experiment has a documented schema") {
    const auto names = experiment_names();
    CHECK(names.size() == 9);
    for (const auto& schema : experiment_schemas()) {
        CHECK_FALSE(schema.summary.empty());
        for (const auto& p : schema.params) {
            CHECK_FALSE(p.doc.empty());
            if (p.type == ParamType::choice) CHECK_FALSE(p.choices.empty());
            if (!p.default_value) continue;
            const auto& v = *p.default_value;
            switch (p.type) {
                case ParamType::real: CHECK(parse_real(v).has_value()); break;
                case ParamType::integer: CHECK(parse_integer(v).has_value()); break;
                case ParamType::real_list: CHECK(parse_real_list(v).has_value()); break;
                case ParamType::choice: CHECK(std::find(p.choices.begin(), p.choices.end(), v) != p.choices.end()); break;
            }
        }
    }
    const auto listing = describe_experiments();
    for (const auto& name : names) CHECK(listing.find(name) != std::string::npos);
}

TEST_CASE("record rendering") {
    ExperimentRecord rec;
    rec.experiment = "demo";
    rec.seed = 5;
    rec.params_echo = {{"L", "8"}, {"label", "a\"b"}};
    rec.summary = {{"score", 0.1}};
    rec.columns = {"x", "y"};
    rec.add_row({1.0, std::nan("")});
    rec.add_row({-0.5, INFINITY});
    CHECK_ERROR(rec.add_row({1.0}), ErrorCode::InternalInconsistency);

    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(-INFINITY) == "-inf");

    const auto csv = render_csv(rec);
    CHECK(csv ==
          "# modlab 0.1.0 experiment=demo seed=5 rng=philox4x32-10\n"
          "# param L = 8\n"
          "# param label = a\"b\n"
          "# summary score = 0.10000000000000001\n"
          "x,y\n"
          "1,nan\n"
          "-0.5,inf\n");

    const auto doc = nlohmann::json::parse(render_json(rec));
    CHECK(doc["experiment"] == "demo");
    CHECK(doc["params"]["label"] == "a\"b");
    CHECK(doc["rows"][0][1].is_null());
    CHECK(doc["rows"][1][0] == -0.5);
    CHECK(doc["columns"].size() == 2);
    CHECK(doc["provenance"]["rng"] == "philox4x32-10");
    CHECK(doc["provenance"]["seed"] == 5);

    CHECK(output_filename(rec, OutputFormat::csv) == "demo-5.csv");
    CHECK(output_filename(rec, OutputFormat::json) == "demo-5.json");
}

TEST_CASE("runs write reproducible files") {
    const auto dir = scratch_dir("repro");
    for (auto format : {OutputFormat::csv, OutputFormat::json}) {
        ExperimentConfig cfg;
        cfg.name = "random-walk";
        cfg.params = {{"n_electrons", "50"}, {"n_repeats", "200"}, {"checkpoints", "5,50"}};
        cfg.seed = 99;
        cfg.out_dir = dir.string();
        cfg.format = format;
        const auto first = run(cfg);
        const auto bytes = slurp(first.path);
        fs::remove(first.path);
        const auto second = run(cfg);
        CHECK(second.path == first.path);
        CHECK(slurp(second.path) == bytes);
        CHECK_FALSE(bytes.empty());

        cfg.seed = 100;
        CHECK(slurp(run(cfg).path) != bytes);
    }
    fs::remove_all(dir);
}

TEST_CASE("runner errors") {
    CHECK_ERROR(run_experiment("nope", {}, 0), ErrorCode::UnknownExperiment);
    CHECK_ERROR(run_experiment("scattering", {{"alpha", "0.5"}}, 0), ErrorCode::SchemaViolation);
    CHECK_ERROR(run_experiment("scattering", {{"alpha", "0.5"}, {"r", "10"}, {"n_max", "12"}}, 0),
                ErrorCode::TruncationTooSmall);
    CHECK_ERROR(run_experiment("random-walk", {{"width_fraction", "0.1"}, {"n_electrons", "5"}, {"n_repeats", "100"}, {"require_two_point", "1"}}, 0),
                ErrorCode::RegimeViolation);
}

TEST_CASE("random walk outside the two-point regime uses the step prediction") {
    const auto rec = run_experiment(
        "random-walk", {{"width_fraction", "0.1"}, {"n_electrons", "20"}, {"n_repeats", "4000"}, {"checkpoints", "5"}}, 4);
    double regime = -1.0;
    for (const auto& [k, v] : rec.summary) {
        if (k == "two_point_regime") regime = v;
    }
    CHECK(regime == 0.0);
    REQUIRE(rec.rows.size() == 2);
    // relative_error compares against the step prediction here; 4000 repeats give a few percent spread
    for (const auto& row : rec.rows) CHECK(std::abs(row[4]) < 0.05);
}
