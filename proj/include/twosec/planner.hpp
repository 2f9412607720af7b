#pragma once
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "twosec/climate.hpp"
#include "twosec/config.hpp"
#include "twosec/economy.hpp"

namespace twosec {

enum class ScenarioKind { frontier, bau, optimal };
std::string to_string(ScenarioKind k);
ScenarioKind scenario_kind(const std::string& name);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::optimal;
    std::vector<std::pair<std::string, std::string>> config_overrides;
    std::string label;
};

// exogenous per-period paths
struct Exogenous {
    std::vector<double> L, A1, A2, A_E, A_I;
    std::vector<double> chi;   // forcing added when computing temperature at period t
    std::vector<double> land;  // GtCO2/yr
    std::vector<double> disc;  // beta^(years elapsed)
};
Exogenous build_exogenous(const ModelConfig& c);

// Scenario-adjusted model: frontier switches damages off; only the optimal
// scenario prices carbon into the energy split.
struct Model {
    ModelConfig cfg;
    ScenarioKind kind = ScenarioKind::optimal;
    Exogenous ex;
    bool price_carbon = false;
    int N = 0;
};
Model make_model(const ModelConfig& base, const ScenarioSpec& sc);

struct PeriodRecord {
    int period = 0, year = 0;
    ClimateState climate;  // start of period
    double K = 0;          // start of period
    double s = 0;          // savings share of nominal output
    PeriodAllocation alloc;
    double F1 = 0, F2 = 0;  // damaged TFP
    double GC = 0, GI = 0;
    double consumption_pc = 0;  // thousand 2010US$ per person per year
    double utility = 0;         // discounted period welfare
    double emissions_industrial = 0, emissions_total = 0;  // GtCO2/yr
    double forcing_next = 0;
    double marginal_abatement = 0;  // $/tCO2
    // multipliers (shadow values of start-of-period states)
    double lambda_K = 0;
    std::array<double, 3> lambda_M{};
    double lambda_T = 0, lambda_Tlo = 0;
    double lambda_C = 0;  // d welfare / d annual aggregate consumption
    double lambda_E = 0;  // d welfare / d GtCO2 emitted during the period
};

struct SolveInfo {
    int iterations = 0;
    int evaluations = 0;
    double stationarity = 0;  // max relative projected gradient
    bool converged = false;
    double seconds = 0;
    std::string message;
};

struct Trajectory {
    ScenarioKind kind = ScenarioKind::optimal;
    std::string label;
    std::vector<PeriodRecord> periods;
    // state after the last period (K, M, T at index N)
    double K_end = 0;
    ClimateState climate_end;
    double objective = 0;
    bool feasible = true;
    bool has_multipliers = false;
    std::vector<double> s, mu;  // full-length decision paths
    SolveInfo info;
};

struct Pulse {
    int period = -1;
    double emissions = 0;  // GtCO2 added to the period total
    double capital = 0;    // trillion added to next-period capital
};

// full-length decision paths
Trajectory simulate(const Model& m, const std::vector<double>& s, const std::vector<double>& mu,
                    const Pulse* pulse = nullptr);
double objective(const Trajectory& tr);

// Welfare and adjoint gradient for full-length decision paths.
struct Gradient {
    double W = 0;
    bool feasible = true;
    std::vector<double> ds, dmu, dshare;        // dW/d control
    std::vector<double> demis;                  // dW/d extra GtCO2 emitted in period t
    std::vector<double> ns, nmu, nshare;        // sums of |contributions| for relative residuals
    std::vector<double> share_scale;            // welfare value of the labor an energy-share shift moves
    std::vector<std::array<double, 6>> lambda;  // dW/d state, size N+1
    // per-period (U, next state) x (state, s, mu, energy share, emission injection)
    std::vector<std::array<std::array<double, 10>, 7>> jac;
    std::vector<double> U_C;  // d period welfare / d annual consumption
    std::vector<double> GC, q;
};
Gradient welfare_gradient(const Model& m, const std::vector<double>& s, const std::vector<double>& mu);

struct NonConvergence : std::runtime_error {
    Trajectory best;
    NonConvergence(const std::string& msg, Trajectory t) : std::runtime_error(msg), best(std::move(t)) {}
};

Trajectory solve(const ModelConfig& cfg, const ScenarioSpec& sc);
// expands the reduced savings vector under the terminal convention
std::vector<double> expand_savings(const ModelConfig& c, const std::vector<double>& s_free);
std::pair<std::vector<double>, std::vector<double>> initial_decisions(const Model& m);
// attaches multipliers from one adjoint pass
void attach_multipliers(const Model& m, Trajectory& tr);

struct KktReport {
    double savings = 0;      // consumption/investment margin
    double abatement = 0;    // mu margin
    double energy = 0;       // energy-labor margin (not applicable under bau)
    double euler = 0;        // intertemporal capital condition
    bool energy_applicable = true;
    int worst_period = -1;
    std::string worst_condition;
    double max() const;
};
KktReport kkt_residuals(const Trajectory& tr, const ModelConfig& cfg, const ScenarioSpec& sc);
KktReport kkt_residuals(const Model& m, const std::vector<double>& s, const std::vector<double>& mu);

}  // namespace twosec
