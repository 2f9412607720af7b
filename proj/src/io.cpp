#include "twosec/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace twosec {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

LogLevel log_level() {
    const char* e = std::getenv("TWOSEC_LOG");
    if (!e) return LogLevel::warn;
    const std::string s = e;
    if (s == "error") return LogLevel::error;
    if (s == "info") return LogLevel::info;
    if (s == "debug") return LogLevel::debug;
    return LogLevel::warn;
}

void log(LogLevel lvl, const std::string& msg) {
    static std::mutex mu;
    if (lvl > log_level()) return;
    static const char* tag[] = {"error", "warn", "info", "debug"};
    std::lock_guard<std::mutex> lk(mu);
    std::cerr << "[" << tag[static_cast<int>(lvl)] << "] " << msg << "\n";
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0) return "0";  // folds -0
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, r.ptr);
}

namespace {

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    if (*b == '+') ++b;
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc() && r.ptr == e;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot write " + p.string());
    f << text;
    if (!f) throw IoError("write failed for " + p.string());
}

std::string read_text(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot read " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

void write_csv(const std::string& path, const Table& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) {
        if (r.size() != t.header.size()) throw IoError("row width does not match header in " + path);
        line(r);
    }
    write_text(path, out);
}

Table read_csv(const std::string& path, const std::vector<std::string>& expect) {
    std::istringstream in(read_text(path));
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");
    t.header = split(line, ',');
    if (!expect.empty() && t.header != expect) throw IoError(path + ": unexpected header");
    int n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != t.header.size())
            throw IoError(path + ":" + std::to_string(n) + ": expected " + std::to_string(t.header.size()) + " fields");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            double v;
            const auto& h = t.header[i];
            if (h == "scenario" || h == "metric" || h == "value_label") continue;
            if (cells[i].empty() && h != "year") continue;  // optional column
            if (!parse_number(cells[i], v) && cells[i] != "nan")
                throw IoError(path + ":" + std::to_string(n) + ": column " + h + " is not numeric");
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

const std::vector<std::string>& trajectory_columns() {
    static const std::vector<std::string> c{
        "year", "K", "T_at", "T_lo", "M_at", "mu", "savings_rate", "relative_price", "Y_goods", "Y_services",
        "Y_nominal", "C", "I", "energy", "emissions_industrial", "emissions_total", "consumption_pc",
        "marginal_abatement"};
    return c;
}

const std::vector<std::string>& diagnostics_columns() {
    static const std::vector<std::string> c{
        "year", "scc_consumption", "scc_investment", "ratio", "transformation_ratio", "capital_loss_pct",
        "consumption_loss_pct", "services_share_consumption", "services_share_investment",
        "services_value_added_share"};
    return c;
}

// ---------------------------------------------------------------- runs

RunResult run_scenario(const ModelConfig& cfg, ScenarioKind kind, const std::string& label, const RunOptions& opt,
                       const Trajectory* frontier) {
    RunResult r;
    r.cfg = cfg;
    r.kind = kind;
    r.label = label.empty() ? cfg.variant + "_" + to_string(kind) : label;
    r.pulse_scc = opt.pulse_scc;

    auto solve_logged = [&](ScenarioKind k, const std::string& lab) {
        log(LogLevel::info, "solving " + lab);
        Trajectory t;
        try {
            t = solve(cfg, ScenarioSpec{k, {}, lab});
        } catch (const NonConvergence& e) {
            log(LogLevel::error, lab + ": " + e.what());
            t = e.best;
            r.converged = false;
            r.notes.push_back(lab + ": " + e.what());
        }
        r.timings.push_back({lab, t.info.seconds, t.info.converged, t.info.stationarity});
        log(LogLevel::info, lab + " done in " + fmt(t.info.seconds) + " s, stationarity " + fmt(t.info.stationarity));
        return t;
    };

    r.traj = solve_logged(kind, r.label);
    if (kind == ScenarioKind::frontier) {
        r.frontier = r.traj;
    } else if (frontier) {
        r.frontier = *frontier;
    } else if (opt.with_frontier) {
        r.frontier = solve_logged(ScenarioKind::frontier, cfg.variant + "_frontier");
    }

    r.scc = scc_series(r.traj, cfg, opt.pulse_scc);
    if (r.frontier) r.damages = damage_relative_to_frontier(r.traj, *r.frontier, cfg);
    r.baumol = baumol_indicators(r.traj, cfg);
    r.net_zero = net_zero_year(r.traj, cfg);
    r.kkt = kkt_residuals(r.traj, cfg, ScenarioSpec{kind, {}, {}});
    if (kind == ScenarioKind::optimal) r.tax = tax_identity(r.traj, cfg);
    return r;
}

Table trajectory_table(const RunResult& r) {
    Table t;
    t.header = trajectory_columns();
    for (const auto& p : r.traj.periods) {
        if (p.year > r.cfg.paths.report_until) break;
        const auto& a = p.alloc;
        t.rows.push_back({std::to_string(p.year), fmt(p.K), fmt(p.climate.t_at), fmt(p.climate.t_lo),
                          fmt(p.climate.m_at), fmt(a.mu), fmt(p.s), fmt(a.p2 / a.p1), fmt(a.y1), fmt(a.y2),
                          fmt(a.y_nominal), fmt(a.c_agg), fmt(a.i_agg), fmt(a.energy), fmt(p.emissions_industrial),
                          fmt(p.emissions_total), fmt(p.consumption_pc), fmt(p.marginal_abatement)});
    }
    return t;
}

Table diagnostics_table(const RunResult& r) {
    Table t;
    t.header = diagnostics_columns();
    const Exogenous ex = build_exogenous(r.cfg);
    for (std::size_t i = 0; i < r.scc.size(); ++i) {
        const auto& s = r.scc[i];
        const auto& p = r.traj.periods[i];
        const auto& b = r.baumol[i];
        const double tr = transformation_ratio(r.cfg, ex.A1[i], ex.A2[i], ex.A_I[i], p.climate.t_at);
        std::string kl, cl;
        if (!r.damages.empty()) {
            kl = fmt(r.damages[i].capital_loss_pct);
            cl = fmt(r.damages[i].consumption_loss_pct);
        }
        t.rows.push_back({std::to_string(s.year), fmt(s.scc_consumption), fmt(s.scc_investment), fmt(s.ratio),
                          fmt(tr), kl, cl, fmt(b.services_share_consumption), fmt(b.services_share_investment),
                          fmt(b.services_value_added_share)});
    }
    return t;
}

namespace {

// json numbers go through the same 12-digit formatting as the CSVs
ordered_json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return ordered_json::parse(fmt(v));
}

const std::vector<int> kSnapshotYears{2050, 2100, 2150};

}  // namespace

std::string summary_json(const RunResult& r) {
    ordered_json j;
    j["variant"] = r.cfg.variant;
    j["scenario"] = to_string(r.kind);
    j["label"] = r.label;
    j["objective"] = num(r.traj.objective);
    j["net_zero_year"] = r.net_zero ? ordered_json(*r.net_zero) : ordered_json(nullptr);
    j["converged"] = r.converged;
    j["stationarity"] = num(r.traj.info.stationarity);
    ordered_json k;
    k["savings"] = num(r.kkt.savings);
    k["abatement"] = num(r.kkt.abatement);
    k["energy"] = r.kkt.energy_applicable ? num(r.kkt.energy) : ordered_json(nullptr);
    k["euler"] = num(r.kkt.euler);
    k["max"] = num(r.kkt.max());
    j["kkt"] = k;
    double worst_tax = 0;
    for (const auto& t : r.tax) worst_tax = std::max(worst_tax, t.relative_gap);
    j["tax_identity_max_gap"] = r.kind == ScenarioKind::optimal ? num(worst_tax) : ordered_json(nullptr);
    j["scc_method"] = r.pulse_scc ? "pulse" : "multiplier";

    ordered_json snaps = ordered_json::object();
    for (int y : kSnapshotYears) {
        if (y > r.cfg.paths.report_until) continue;
        const int t = period_of_year(r.cfg, y);
        if (t >= static_cast<int>(r.scc.size())) continue;
        const auto& p = r.traj.periods[t];
        ordered_json s;
        s["K"] = num(p.K);
        s["T_at"] = num(p.climate.t_at);
        s["mu"] = num(p.alloc.mu);
        s["savings_rate"] = num(p.s);
        s["C"] = num(p.alloc.c_agg);
        s["consumption_pc"] = num(p.consumption_pc);
        s["relative_price"] = num(p.alloc.p2 / p.alloc.p1);
        s["emissions_total"] = num(p.emissions_total);
        s["scc_investment"] = num(r.scc[t].scc_investment);
        s["scc_consumption"] = num(r.scc[t].scc_consumption);
        s["capital_loss_pct"] = r.damages.empty() ? ordered_json(nullptr) : num(r.damages[t].capital_loss_pct);
        s["consumption_loss_pct"] =
            r.damages.empty() ? ordered_json(nullptr) : num(r.damages[t].consumption_loss_pct);
        snaps[std::to_string(y)] = s;
    }
    j["snapshots"] = snaps;
    return j.dump(2) + "\n";
}

void validate_summary(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw IoError(std::string("summary: not valid JSON: ") + e.what());
    }
    auto need = [](const ordered_json& o, const std::string& key, auto pred, const char* what) {
        if (!o.contains(key)) throw IoError("summary: missing field '" + key + "'");
        if (!pred(o.at(key))) throw IoError("summary: field '" + key + "' must be " + what);
    };
    auto is_num = [](const ordered_json& v) { return v.is_number(); };
    auto num_or_null = [](const ordered_json& v) { return v.is_number() || v.is_null(); };
    auto is_str = [](const ordered_json& v) { return v.is_string(); };
    if (!j.is_object()) throw IoError("summary: top level must be an object");
    need(j, "variant", is_str, "a string");
    need(j, "scenario", [](const ordered_json& v) {
        return v.is_string() && (v == "frontier" || v == "bau" || v == "optimal");
    }, "frontier, bau or optimal");
    need(j, "label", is_str, "a string");
    need(j, "objective", is_num, "a number");
    need(j, "net_zero_year", [](const ordered_json& v) { return v.is_null() || v.is_number_integer(); },
         "an integer or null");
    need(j, "converged", [](const ordered_json& v) { return v.is_boolean(); }, "a boolean");
    need(j, "stationarity", is_num, "a number");
    need(j, "kkt", [](const ordered_json& v) { return v.is_object(); }, "an object");
    for (const char* k : {"savings", "abatement", "euler", "max"}) need(j["kkt"], k, is_num, "a number");
    need(j["kkt"], "energy", num_or_null, "a number or null");
    need(j, "tax_identity_max_gap", num_or_null, "a number or null");
    need(j, "scc_method", is_str, "a string");
    need(j, "snapshots", [](const ordered_json& v) { return v.is_object(); }, "an object");
    for (const auto& [year, s] : j["snapshots"].items()) {
        for (const char* k : {"K", "T_at", "mu", "savings_rate", "C", "consumption_pc", "relative_price",
                              "emissions_total", "scc_investment", "scc_consumption"})
            need(s, k, is_num, "a number");
        need(s, "capital_loss_pct", num_or_null, "a number or null");
        need(s, "consumption_loss_pct", num_or_null, "a number or null");
    }
}

void write_run(const RunResult& r, const std::string& dir) {
    const fs::path d(dir);
    fs::create_directories(d);
    write_csv((d / "trajectory.csv").string(), trajectory_table(r));
    write_csv((d / "diagnostics.csv").string(), diagnostics_table(r));
    const std::string summary = summary_json(r);
    validate_summary(summary);
    write_text(d / "summary.json", summary);

    ordered_json m;
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(config_hash(r.cfg)));
    m["config_hash"] = hash;
    m["variant"] = r.cfg.variant;
    ordered_json labels = ordered_json::array();
    for (const auto& t : r.timings) labels.push_back(t.label);
    m["scenario_labels"] = labels;
    const auto& sv = r.cfg.solver;
    m["solver"] = {{"method", "projected L-BFGS with Newton polish"},
                   {"savings_bounds", {sv.s_lo, sv.s_hi}},
                   {"savings_init", sv.s_init},
                   {"mu_init", {sv.mu_init_start, sv.mu_ramp_periods}},
                   {"terminal_fixed_periods", sv.terminal_fixed},
                   {"terminal_anchor_period", sv.terminal_anchor},
                   {"max_iter", sv.max_iter},
                   {"tolerance", sv.kkt_tol},
                   {"horizon", r.cfg.paths.horizon}};
    m["outputs"] = {(d / "trajectory.csv").string(), (d / "diagnostics.csv").string(),
                    (d / "summary.json").string(), (d / "manifest.json").string()};
    ordered_json solves = ordered_json::array();
    for (const auto& t : r.timings)
        solves.push_back({{"label", t.label}, {"seconds", t.seconds}, {"converged", t.converged},
                          {"stationarity", t.stationarity}});
    m["solves"] = solves;
    m["notes"] = r.notes;
    write_text(d / "manifest.json", m.dump(2) + "\n");
}

// ---------------------------------------------------------------- sweeps

SweepResult run_sweep(const ModelConfig& cfg, const std::string& param, const std::vector<std::string>& values,
                      ScenarioKind kind, const RunOptions& opt) {
    if (values.empty()) throw ValidationError("sweep needs at least one value");
    SweepResult out;
    out.values = values;
    std::vector<ModelConfig> cfgs;
    for (const auto& v : values) {
        ModelConfig c = cfg;
        set_param(c, param, v);  // unknown keys fail here, before any solve
        validate(c);
        cfgs.push_back(std::move(c));
    }
    std::vector<std::future<RunResult>> jobs;
    for (std::size_t i = 0; i < cfgs.size(); ++i)
        jobs.push_back(std::async(std::launch::async, [&, i] {
            return run_scenario(cfgs[i], kind, param + "=" + values[i], opt);
        }));
    for (auto& j : jobs) out.runs.push_back(j.get());
    return out;
}

Table sweep_table(const SweepResult& s, const std::string& param) {
    Table t;
    t.header = {"value_label", "objective", "net_zero_year", "K_2100", "T_2100", "capital_loss_2100",
                "consumption_loss_2100", "scc_investment_2100", "scc_consumption_2100", "scc_gap_2100",
                "scc_ratio_2150"};
    (void)param;
    for (std::size_t i = 0; i < s.runs.size(); ++i) {
        const auto& r = s.runs[i];
        const int t21 = period_of_year(r.cfg, 2100);
        const int t215 = period_of_year(r.cfg, std::min(2150, r.cfg.paths.report_until));
        const auto& p = r.traj.periods[t21];
        const auto& a = r.scc[t21];
        t.rows.push_back({s.values[i], fmt(r.traj.objective), r.net_zero ? std::to_string(*r.net_zero) : "",
                          fmt(p.K), fmt(p.climate.t_at),
                          r.damages.empty() ? "" : fmt(r.damages[t21].capital_loss_pct),
                          r.damages.empty() ? "" : fmt(r.damages[t21].consumption_loss_pct), fmt(a.scc_investment),
                          fmt(a.scc_consumption), fmt(a.scc_investment - a.scc_consumption),
                          fmt(r.scc[t215].scc_investment / r.scc[t215].scc_consumption)});
    }
    return t;
}

void write_sweep(const SweepResult& s, const std::string& param, const std::string& dir) {
    fs::create_directories(dir);
    for (std::size_t i = 0; i < s.runs.size(); ++i)
        write_run(s.runs[i], (fs::path(dir) / (param + "=" + s.values[i])).string());
    write_csv((fs::path(dir) / "comparison.csv").string(), sweep_table(s, param));
}

// ---------------------------------------------------------------- compare

Table compare_runs(const std::vector<std::string>& dirs) {
    if (dirs.size() < 2) throw ValidationError("compare needs at least two run directories");
    Table out;
    out.header = {"year", "scenario", "metric", "value"};
    std::vector<std::string> years;
    std::set<std::string> seen;
    for (const auto& dir : dirs) {
        const fs::path d(dir);
        if (!fs::exists(d / "summary.json")) throw IoError("run directory " + dir + " has no summary.json");
        const std::string text = read_text(d / "summary.json");
        validate_summary(text);
        std::string label = ordered_json::parse(text)["label"].get<std::string>();
        if (!seen.insert(label).second) label = dir;  // keep scenario names unique
        const Table tr = read_csv((d / "trajectory.csv").string(), trajectory_columns());
        const Table dg = read_csv((d / "diagnostics.csv").string(), diagnostics_columns());
        std::vector<std::string> ys;
        for (const auto& row : tr.rows) ys.push_back(row[0]);
        if (years.empty()) years = ys;
        else if (ys != years) throw AlignmentError("run directory " + dir + " covers different years");
        if (dg.rows.size() != tr.rows.size()) throw AlignmentError("run directory " + dir + " has ragged outputs");
        for (std::size_t i = 0; i < tr.rows.size(); ++i) {
            for (std::size_t c = 1; c < tr.header.size(); ++c)
                out.rows.push_back({tr.rows[i][0], label, tr.header[c], tr.rows[i][c]});
            for (std::size_t c = 1; c < dg.header.size(); ++c)
                if (!dg.rows[i][c].empty()) out.rows.push_back({dg.rows[i][0], label, dg.header[c], dg.rows[i][c]});
        }
    }
    return out;
}

}  // namespace twosec
