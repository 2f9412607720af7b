#pragma once
#include <optional>
#include <stdexcept>
#include <vector>

#include "twosec/planner.hpp"

namespace twosec {

struct MissingMultipliers : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PulseInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AlignmentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// $/tCO2 in 2010 dollars
struct SccRecord {
    int year = 0;
    double scc_consumption = 0;
    double scc_investment = 0;
    double ratio = 0;  // scc_consumption / scc_investment
};

struct PulseOptions {
    double size = 1.0;        // GtCO2
    bool richardson = true;   // combine size and size/2
    double capital_step = 1e-4;  // relative to next-period capital
};

// period index of a reporting year; throws DomainError outside the window
int period_of_year(const ModelConfig& cfg, int year);

// The config must already carry any scenario overrides; the model is rebuilt
// from it with the trajectory's scenario kind.
SccRecord scc_pulse(const Trajectory& tr, const ModelConfig& cfg, int year, const PulseOptions& opt = {});
SccRecord scc_multiplier(const Trajectory& tr, const ModelConfig& cfg, int year);
std::vector<SccRecord> scc_series(const Trajectory& tr, const ModelConfig& cfg, bool pulse = false);

// SCC_CE / SCC_IE implied by the damaged sector productivities
double transformation_ratio(const ModelConfig& cfg, double A1, double A2, double A_I, double T);

struct DamageRecord {
    int year = 0;
    double capital_loss_pct = 0;
    double consumption_loss_pct = 0;
};
std::vector<DamageRecord> damage_relative_to_frontier(const Trajectory& scenario, const Trajectory& frontier,
                                                      const ModelConfig& cfg);

struct BaumolRecord {
    int year = 0;
    double relative_price = 0;  // p_services / p_goods
    double services_share_consumption = 0;
    double services_share_investment = 0;
    double services_value_added_share = 0;
};
std::vector<BaumolRecord> baumol_indicators(const Trajectory& tr, const ModelConfig& cfg);

std::optional<int> net_zero_year(const Trajectory& tr, const ModelConfig& cfg);

struct TaxIdentityRecord {
    int year = 0;
    double marginal_abatement = 0;
    double scc_investment = 0;
    double relative_gap = 0;
};
// interior-mu reporting periods only
std::vector<TaxIdentityRecord> tax_identity(const Trajectory& tr, const ModelConfig& cfg);

}  // namespace twosec
