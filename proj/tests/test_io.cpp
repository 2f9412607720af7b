#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "twosec/io.hpp"

using namespace twosec;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("twosec_io_" + name);
    fs::remove_all(p);
    return p;
}
std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}
const RunResult& bau_run() {
    static const RunResult r = run_scenario(default_config("dice_like_hom"), ScenarioKind::bau, "hom_bau");
    return r;
}
}  // namespace

TEST_CASE("number formatting") {
    CHECK(fmt(0.1) == "0.1");
    CHECK(fmt(1.0 / 3.0) == "0.333333333333");
    CHECK(fmt(123456789012345.0) == "1.23456789012e+14");
    CHECK(fmt(-0.0) == "0");
    CHECK(fmt(2100) == "2100");
}

TEST_CASE("strict csv reader") {
    auto p = scratch("t.csv");
    write_csv(p.string(), Table{{"year", "a"}, {{"2015", "1.5"}, {"2020", "2e-3"}}});
    auto t = read_csv(p.string(), {"year", "a"});
    CHECK(t.rows.size() == 2);
    CHECK_THROWS_AS(read_csv(p.string(), {"year", "b"}), IoError);
    std::ofstream(p) << "year,a\n2015,abc\n";
    CHECK_THROWS_AS(read_csv(p.string()), IoError);
    std::ofstream(p) << "year,a\n2015\n";
    CHECK_THROWS_AS(read_csv(p.string()), IoError);
    CHECK_THROWS_AS(write_csv(p.string(), Table{{"a", "b"}, {{"1"}}}), IoError);
}

TEST_CASE("run outputs follow their schemas") {
    const auto& r = bau_run();
    CHECK(r.converged);
    auto dir = scratch("run");
    write_run(r, dir.string());
    auto tr = read_csv((dir / "trajectory.csv").string(), trajectory_columns());
    auto dg = read_csv((dir / "diagnostics.csv").string(), diagnostics_columns());
    CHECK(tr.rows.size() == 28);
    CHECK(dg.rows.size() == 28);
    CHECK(tr.rows.front()[0] == "2015");
    CHECK(tr.rows.back()[0] == "2150");
    const std::string summary = slurp(dir / "summary.json");
    CHECK_NOTHROW(validate_summary(summary));
    auto j = nlohmann::json::parse(summary);
    CHECK(j["scenario"] == "bau");
    CHECK(j["net_zero_year"].is_null());
    CHECK(j["snapshots"].contains("2100"));
    CHECK(j["snapshots"]["2100"]["capital_loss_pct"].get<double>() > 0);
    auto man = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(man["config_hash"].get<std::string>().size() == 16);
    CHECK(man["solves"].size() == 2);  // scenario and its frontier
}

TEST_CASE("summary schema violations are reported") {
    auto j = nlohmann::json::parse(summary_json(bau_run()));
    auto broken = j;
    broken.erase("objective");
    CHECK_THROWS_AS(validate_summary(broken.dump()), IoError);
    broken = j;
    broken["net_zero_year"] = "soon";
    CHECK_THROWS_AS(validate_summary(broken.dump()), IoError);
    broken = j;
    broken["scenario"] = "laissez_faire";
    CHECK_THROWS_AS(validate_summary(broken.dump()), IoError);
    CHECK_THROWS_AS(validate_summary("{not json"), IoError);
}

TEST_CASE("optimal summary carries a net-zero year") {
    auto r = run_scenario(default_config("structural_change_het"), ScenarioKind::optimal, "", RunOptions{false, false});
    auto j = nlohmann::json::parse(summary_json(r));
    CHECK(j["net_zero_year"].is_number_integer());
    CHECK(j["tax_identity_max_gap"].get<double>() < 0.01);
    CHECK(j["kkt"]["max"].get<double>() < 1e-5);
    CHECK(r.damages.empty());
}

TEST_CASE("identical runs write identical files") {
    auto a = scratch("det_a"), b = scratch("det_b");
    write_run(bau_run(), a.string());
    auto again = run_scenario(default_config("dice_like_hom"), ScenarioKind::bau, "hom_bau");
    write_run(again, b.string());
    for (const char* f : {"trajectory.csv", "diagnostics.csv", "summary.json"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("compare joins runs and rejects bad inputs") {
    auto a = scratch("cmp_a"), b = scratch("cmp_b"), bad = scratch("cmp_bad");
    write_run(bau_run(), a.string());
    auto fr = bau_run();
    fr.label = "other";
    write_run(fr, b.string());
    auto t = compare_runs({a.string(), b.string()});
    CHECK(t.header == std::vector<std::string>{"year", "scenario", "metric", "value"});
    const std::size_t per_run = 28 * (trajectory_columns().size() - 1 + diagnostics_columns().size() - 1);
    CHECK(t.rows.size() == 2 * per_run);

    fs::create_directories(bad);
    try {
        compare_runs({a.string(), bad.string()});
        FAIL("expected an error");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find(bad.string()) != std::string::npos);
    }
    CHECK_THROWS(compare_runs({a.string()}));

    // a run cut short at 2100
    fs::copy(a, bad, fs::copy_options::overwrite_existing | fs::copy_options::recursive);
    auto tr = read_csv((bad / "trajectory.csv").string());
    tr.rows.resize(18);
    write_csv((bad / "trajectory.csv").string(), tr);
    CHECK_THROWS_AS(compare_runs({a.string(), bad.string()}), AlignmentError);
}

TEST_CASE("sweeps") {
    auto c = default_config("dice_like_hom");
    try {
        run_sweep(c, "zeta9", {"1"}, ScenarioKind::bau);
        FAIL("expected an error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("eps_I") != std::string::npos);
    }
    auto s = run_sweep(c, "discount_rate", {"0.015"}, ScenarioKind::bau);
    REQUIRE(s.runs.size() == 1);
    // a one-value sweep at the benchmark is the plain run
    CHECK(s.runs[0].traj.objective == bau_run().traj.objective);
    auto dir = scratch("sweep");
    write_sweep(s, "discount_rate", dir.string());
    CHECK(fs::exists(dir / "discount_rate=0.015" / "summary.json"));
    auto t = read_csv((dir / "comparison.csv").string());
    CHECK(t.rows.size() == 1);
    CHECK(t.rows[0][0] == "0.015");
}
