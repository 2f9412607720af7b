#include "twosec/climate.hpp"

#include <algorithm>

namespace twosec {

ClimateState initial_climate(const ModelConfig& c) {
    const auto& in = c.initial;
    return {in.M0[0], in.M0[1], in.M0[2], in.T0, in.T_lo0};
}

double land_emissions(int period, const ClimateParams& p) {
    if (period < 0) throw DomainError("land_emissions: negative period");
    return p.E_land_0 * std::pow(p.land_decay, period);
}

double exogenous_forcing(int period, const ModelConfig& c) {
    const auto& cl = c.climate;
    const double ramp = (c.paths.forcing_ramp_until - c.paths.start_year) / c.paths.period_years;
    const double w = std::min(static_cast<double>(period), ramp) / ramp;
    return cl.chi_ex_2015 + (cl.chi_ex_2100 - cl.chi_ex_2015) * w;
}

}  // namespace twosec
