#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twosec/diagnostics.hpp"

namespace twosec {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// stderr logger; level from TWOSEC_LOG (error, warn, info, debug), default warn
enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };
LogLevel log_level();
void log(LogLevel lvl, const std::string& msg);

// 12 significant digits, locale independent
std::string fmt(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
void write_csv(const std::string& path, const Table& t);
// strict reader: header must match `expect` when given; every non-year cell must parse as a number
Table read_csv(const std::string& path, const std::vector<std::string>& expect = {});

const std::vector<std::string>& trajectory_columns();
const std::vector<std::string>& diagnostics_columns();

struct SolveTiming {
    std::string label;
    double seconds = 0;
    bool converged = false;
    double stationarity = 0;
};

struct RunResult {
    ModelConfig cfg;  // overrides applied
    ScenarioKind kind = ScenarioKind::optimal;
    std::string label;
    Trajectory traj;
    std::optional<Trajectory> frontier;
    std::vector<SccRecord> scc;
    std::vector<DamageRecord> damages;  // empty without a frontier
    std::vector<BaumolRecord> baumol;
    std::optional<int> net_zero;
    KktReport kkt;
    std::vector<TaxIdentityRecord> tax;
    std::vector<SolveTiming> timings;
    bool converged = true;
    bool pulse_scc = false;
    std::vector<std::string> notes;
};

struct RunOptions {
    bool pulse_scc = false;  // SCC by emission pulse instead of multipliers
    bool with_frontier = true;
};

// Solves the scenario (and its frontier) and computes every diagnostic. A
// non-converged solve keeps the best trajectory and sets converged = false.
RunResult run_scenario(const ModelConfig& cfg, ScenarioKind kind, const std::string& label,
                       const RunOptions& opt = {}, const Trajectory* frontier = nullptr);

Table trajectory_table(const RunResult& r);
Table diagnostics_table(const RunResult& r);
std::string summary_json(const RunResult& r);
// throws IoError naming the first schema violation
void validate_summary(const std::string& json_text);

// writes trajectory.csv, diagnostics.csv, summary.json, manifest.json
void write_run(const RunResult& r, const std::string& dir);

struct SweepResult {
    std::vector<std::string> values;
    std::vector<RunResult> runs;
};
SweepResult run_sweep(const ModelConfig& cfg, const std::string& param, const std::vector<std::string>& values,
                      ScenarioKind kind, const RunOptions& opt = {});
Table sweep_table(const SweepResult& s, const std::string& param);
// one subdirectory per value plus comparison.csv
void write_sweep(const SweepResult& s, const std::string& param, const std::string& dir);

// long-format join of completed run directories
Table compare_runs(const std::vector<std::string>& dirs);

}  // namespace twosec
