#include "ris/config.hpp"
#include "ris/csv.hpp"
#include "ris/error.hpp"
#include "ris/experiments.hpp"
#include "ris/rng.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace ris;
using nlohmann::json;

namespace {

ExperimentConfig small(ExperimentKind kind, std::vector<double> ns) {
    ExperimentConfig c;
    c.experiment = kind;
    c.seed = 11;
    c.scenario.M = 16;
    c.sweep = SweepSpec{"N", std::move(ns)};
    c.mc.trials = 300;
    c.mc.bootstrap_resamples = 20;
    c.resolve();
    return c;
}

std::vector<std::string> header_of(const std::vector<ResultRow>& rows) {
    return parse_csv(to_csv(rows)).header;
}

}  // namespace

TEST_CASE("config: unknown keys are rejected at every level") {
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"sceanrio": {}})")), Error);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"scenario": {"Mm": 4}})")), Error);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"mc": {"trails": 4}})")), Error);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"scenario": {"angles": {"azimuth": 1}}})")), Error);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"experiment": "sweep"})")), Error);
    CHECK_THROWS_AS(config_from_json(json::parse(R"({"scenario": {"M": "four"}})")), Error);
    try {
        config_from_json(json::parse(R"({"scenario": {"Mm": 4}})"));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
        CHECK(std::string(e.what()).find("Mm") != std::string::npos);
    }
}

TEST_CASE("config: resolve validates sweeps and draws angles from the seed") {
    ExperimentConfig c;
    c.sweep = SweepSpec{"N", {16, 15}};
    CHECK_THROWS_AS(c.resolve(), Error);
    ExperimentConfig d;
    d.sweep = SweepSpec{"M", {16}};
    CHECK_THROWS_AS(d.resolve(), Error);

    ExperimentConfig a, b;
    a.seed = b.seed = 42;
    a.resolve();
    b.resolve();
    REQUIRE(a.angles.has_value());
    CHECK(a.angles->user_ris_azimuth == b.angles->user_ris_azimuth);
    CHECK(a.scenario.angles.bs_elevation == b.scenario.angles.bs_elevation);
    CHECK(a.mc.seed == 42);
    CHECK(a.resolved_sweep().values == default_sweep(ExperimentKind::NmseSweep).values);
}

TEST_CASE("config: json round trip is lossless") {
    ExperimentConfig c = small(ExperimentKind::PowerScaling, {16, 64});
    c.e_u_dbm = 17.5;
    c.scenario.epsilon = 3.25;
    c.validate.cases = {{4, 9}};
    const json j = config_to_json(c);
    ExperimentConfig back = config_from_json(j);
    back.resolve();
    CHECK(config_to_json(back) == j);
    CHECK(back.angles->ris_bs_azimuth == c.angles->ris_bs_azimuth);
    CHECK(back.scenario.epsilon == 3.25);
}

TEST_CASE("config: sweep argument parsing") {
    const SweepSpec s = parse_sweep_arg("N=16,64,256");
    CHECK(s.var == "N");
    CHECK(s.values == std::vector<double>{16, 64, 256});
    CHECK_THROWS_AS(parse_sweep_arg("16,64"), Error);
    CHECK_THROWS_AS(parse_sweep_arg("N="), Error);
    CHECK_THROWS_AS(parse_sweep_arg("N=16,x"), Error);
}

TEST_CASE("config: file loading accepts comments and reports bad paths") {
    const auto dir = std::filesystem::temp_directory_path() / "ris_cfg_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "c.json";
    std::ofstream(path) << "{\n  // trial count\n  \"mc\": {\"trials\": 12}\n}\n";
    CHECK(config_from_json(load_config_file(path.string())).mc.trials == 12);
    CHECK_THROWS_AS(load_config_file((dir / "missing.json").string()), Error);
}

TEST_CASE("csv: doubles round-trip exactly") {
    RngStream rng(5, 55);
    for (int i = 0; i < 20000; ++i) {
        std::uint64_t bits = rng.next_u64();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) continue;
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv: rows must share the header") {
    ResultRow a, b;
    a.set("x", 1.0).set("y", std::int64_t{2});
    b.set("x", 1.0);
    std::ostringstream out;
    CHECK_THROWS(write_csv(out, {a, b}));
    ResultRow c;
    c.set("x", 0.5).set("y", std::int64_t{3});
    const CsvTable t = parse_csv(to_csv({a, c}));
    CHECK(t.header == std::vector<std::string>{"x", "y"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][t.column("x")] == "0.5");
    CHECK(format_cell(Cell{true}) == "true");
}

TEST_CASE("nmse-sweep: schema and trends") {
    const ExperimentConfig c = small(ExperimentKind::NmseSweep, {16, 64, 256});
    const auto rows = run_nmse_sweep(c);
    REQUIRE(rows.size() == 3);
    const auto h = header_of(rows);
    for (const char* col : {"N", "M", "tau", "noise_ratio", "nmse_cf", "mse_per_antenna_cf", "nmse_mc", "nmse_mc_ci_low",
                            "nmse_mc_ci_high", "mse_per_antenna_mc", "ls_mse_per_antenna_mc", "ls_mse_ref",
                            "nmse_los_cf", "mse_per_antenna_los_cf", "nmse_tau_alt_cf", "seed", "trials"})
        CHECK(std::find(h.begin(), h.end(), col) != h.end());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].number("nmse_cf") < rows[i - 1].number("nmse_cf"));
        CHECK(rows[i].number("mse_per_antenna_cf") > rows[i - 1].number("mse_per_antenna_cf"));
    }
    for (const auto& r : rows) {
        // near-LoS links behave like the RIS-free system: flat in N
        CHECK(r.number("nmse_los_cf") == doctest::Approx(rows[0].number("nmse_los_cf")).epsilon(1e-3));
        CHECK(r.number("nmse_tau_alt_cf") < r.number("nmse_cf"));
        CHECK(r.number("mse_per_antenna_cf") < r.number("noise_ratio"));
    }
}

TEST_CASE("stat-vs-inst: infeasible overhead is reported, not clamped") {
    ExperimentConfig c = small(ExperimentKind::StatVsInst, {16, 256});
    c.mc.trials = 20;
    const auto rows = run_stat_vs_inst(c);
    REQUIRE(rows.size() == 2);
    CHECK(std::get<bool>(*rows[0].find("feasible")));
    CHECK(rows[0].number("inst_overhead_rate") > 0.0);
    CHECK_FALSE(std::get<bool>(*rows[1].find("feasible")));
    CHECK(std::isnan(rows[1].number("inst_overhead_rate")));
    CHECK(rows[1].number("inst_overhead_factor") < 0.0);
    for (const auto& r : rows) {
        CHECK(r.number("inst_rate_raw") >= r.number("stat_rate"));
        CHECK(r.number("inst_ideal_rate") == doctest::Approx(r.number("inst_rate_raw") * (1.0 - 1.0 / 196.0)));
    }
    const std::string csv = to_csv(rows);
    CHECK(csv.find(",nan,") != std::string::npos);
}

TEST_CASE("power-scaling: rates approach the recorded limits") {
    const ExperimentConfig c = small(ExperimentKind::PowerScaling, {64, 1024});
    const ExperimentResult r = run_power_scaling(c);
    REQUIRE(r.rows.size() == 2);
    const double limit = r.extra.at("rician_n2_limit").get<double>();
    CHECK(r.rows[1].number("rician_n2_limit") == limit);
    CHECK(std::abs(r.rows[1].number("rician_n2_rate") - limit) < std::abs(r.rows[0].number("rician_n2_rate") - limit));
    CHECK(r.rows[1].number("rayleigh_n2_rate") < r.rows[0].number("rayleigh_n2_rate"));
}

TEST_CASE("validate: closed forms agree with simulation on a small case") {
    ExperimentConfig c;
    c.experiment = ExperimentKind::Validate;
    c.seed = 7;
    c.validate.cases = {{4, 4}};
    c.mc.trials = 20000;
    c.mc.bootstrap_resamples = 50;
    c.validate.nmse_tol = 0.05;
    c.validate.mse_tol = 0.05;
    c.validate.rate_tol = 0.05;
    c.resolve();
    const ExperimentResult r = run_validate(c);
    CHECK(r.validation_passed);
    CHECK(r.rows.size() == 5);
    const json meta = run_metadata(c, r);
    CHECK(meta.at("validation_passed").get<bool>());
}

TEST_CASE("sidecar metadata carries everything needed to rerun") {
    const ExperimentConfig c = small(ExperimentKind::PowerScaling, {16});
    const ExperimentResult r = run_experiment(c);
    const json meta = run_metadata(c, r);
    CHECK(meta.at("schema") == csv_schema(ExperimentKind::PowerScaling));
    CHECK(meta.at("schema_version") == kCsvSchemaVersion);
    CHECK(meta.at("seed") == 11);
    CHECK(meta.at("experiment") == "power-scaling");
    CHECK(meta.contains("version"));
    CHECK(meta.at("results").contains("rayleigh_n_limit"));

    ExperimentConfig again = config_from_json(meta.at("config"));
    again.resolve();
    CHECK(to_csv(run_experiment(again).rows) == to_csv(r.rows));

    const auto dir = std::filesystem::temp_directory_path() / "ris_out_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "ps.csv").string();
    write_outputs(path, c, r);
    CHECK(std::filesystem::exists(path));
    std::ifstream side(path + ".meta.json");
    CHECK(json::parse(side) == meta);
}
