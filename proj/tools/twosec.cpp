// twosec: solve, sweep and compare two-sector climate-economy scenarios.
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "twosec/io.hpp"

using namespace twosec;

namespace {

ModelConfig base_config(const std::string& path, const std::string& variant,
                        const std::vector<std::string>& overrides) {
    ModelConfig c = path.empty() ? default_config(variant) : load_config(path);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
        set_param(c, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate(c);
    return c;
}

std::vector<ScenarioKind> scenario_list(const std::string& arg) {
    if (arg == "all") return {ScenarioKind::frontier, ScenarioKind::bau, ScenarioKind::optimal};
    std::vector<ScenarioKind> out;
    std::size_t pos = 0;
    while (pos <= arg.size()) {
        const auto comma = arg.find(',', pos);
        out.push_back(scenario_kind(arg.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<std::string> value_list(const std::string& arg) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = arg.find(',', pos);
        std::string v = arg.substr(pos, comma - pos);
        if (v.empty()) throw ValidationError("empty entry in --values");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-sector climate-economy planner"};
    app.require_subcommand(1);

    std::string config_path, variant = "structural_change_het", scenario = "optimal", out = "out";
    std::vector<std::string> overrides;
    bool pulse = false;

    auto common = [&](CLI::App* sub) {
        auto* cfg = sub->add_option("--config", config_path, "config file (TOML subset)");
        sub->add_option("--variant", variant, "built-in variant when no config file is given")->excludes(cfg);
        sub->add_option("--set", overrides, "key=value override, repeatable");
        sub->add_flag("--pulse-scc", pulse, "SCC by emission pulse instead of multipliers");
    };

    auto* run = app.add_subcommand("run", "solve one or more scenarios");
    common(run);
    run->add_option("--scenario", scenario, "frontier, bau, optimal, a comma list, or all");
    run->add_option("--out", out, "output directory")->required();

    std::string param, values;
    auto* sweep = app.add_subcommand("sweep", "solve one scenario per parameter value");
    common(sweep);
    sweep->add_option("--param", param, "sweepable key")->required();
    sweep->add_option("--values", values, "comma-separated values")->required();
    sweep->add_option("--scenario", scenario, "frontier, bau or optimal");
    sweep->add_option("--out", out, "output directory")->required();

    std::vector<std::string> dirs;
    std::string compare_out;
    auto* compare = app.add_subcommand("compare", "join completed run directories into one long CSV");
    compare->add_option("dirs", dirs, "run directories")->required()->expected(2, -1);
    compare->add_option("--out", compare_out, "CSV path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const ModelConfig cfg = base_config(config_path, variant, overrides);
            const auto kinds = scenario_list(scenario);
            RunOptions opt;
            opt.pulse_scc = pulse;
            std::optional<Trajectory> frontier;
            bool ok = true;
            for (auto k : kinds) {
                auto r = run_scenario(cfg, k, cfg.variant + "_" + to_string(k), opt, frontier ? &*frontier : nullptr);
                if (r.frontier && !frontier) frontier = r.frontier;
                const std::string dir =
                    kinds.size() == 1 ? out : (std::filesystem::path(out) / to_string(k)).string();
                write_run(r, dir);
                ok = ok && r.converged;
                std::cout << r.label << ": objective " << fmt(r.traj.objective) << ", net zero "
                          << (r.net_zero ? std::to_string(*r.net_zero) : "none") << ", kkt " << fmt(r.kkt.max())
                          << " -> " << dir << "\n";
            }
            if (!ok) {
                std::cerr << "error: at least one solve did not converge (best iterates written)\n";
                return 2;
            }
        } else if (*sweep) {
            const ModelConfig cfg = base_config(config_path, variant, overrides);
            RunOptions opt;
            opt.pulse_scc = pulse;
            auto s = run_sweep(cfg, param, value_list(values), scenario_kind(scenario), opt);
            write_sweep(s, param, out);
            bool ok = true;
            for (const auto& r : s.runs) ok = ok && r.converged;
            std::cout << s.runs.size() << " runs -> " << out << "\n";
            if (!ok) {
                std::cerr << "error: at least one solve did not converge (best iterates written)\n";
                return 2;
            }
        } else if (*compare) {
            const Table t = compare_runs(dirs);
            if (compare_out.empty()) {
                for (std::size_t i = 0; i < t.header.size(); ++i) std::cout << (i ? "," : "") << t.header[i];
                std::cout << "\n";
                for (const auto& r : t.rows) {
                    for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "," : "") << r[i];
                    std::cout << "\n";
                }
            } else {
                write_csv(compare_out, t);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
