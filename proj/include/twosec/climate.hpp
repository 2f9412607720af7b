#pragma once
#include <array>
#include <cmath>
#include <stdexcept>

#include "twosec/config.hpp"
#include "twosec/dual.hpp"

namespace twosec {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

template <class S>
struct ClimateStateT {
    S m_at, m_up, m_lo;  // GtC
    S t_at, t_lo;        // degC above preindustrial
};
using ClimateState = ClimateStateT<double>;

ClimateState initial_climate(const ModelConfig& c);

// emissions_period is total GtCO2 over the period, injected into the atmosphere
template <class S>
ClimateStateT<S> carbon_cycle_step(const ClimateStateT<S>& x, const S& emissions_period, const ClimateParams& p) {
    const auto& f = p.phi;
    ClimateStateT<S> y = x;
    y.m_at = f[0][0] * x.m_at + f[0][1] * x.m_up + f[0][2] * x.m_lo + emissions_period / p.co2_per_c;
    y.m_up = f[1][0] * x.m_at + f[1][1] * x.m_up + f[1][2] * x.m_lo;
    y.m_lo = f[2][0] * x.m_at + f[2][1] * x.m_up + f[2][2] * x.m_lo;
    return y;
}

template <class S>
S radiative_forcing(const S& m_at, double chi_ex, const ClimateParams& p) {
    if (!(value(m_at) > 0.0)) throw DomainError("radiative_forcing: atmospheric carbon must be positive");
    using std::log2;
    return p.kappa * log2(m_at / p.M_preind) + chi_ex;
}

template <class S>
std::array<S, 2> temperature_step(const ClimateStateT<S>& x, const S& forcing, const ClimateParams& p) {
    const double z1 = p.zeta1, z2 = p.zeta2, z3 = p.zeta3, z4 = p.zeta4;
    S t_at = (1.0 - z1 * z2 - z1 * z3) * x.t_at + z1 * z3 * x.t_lo + z1 * forcing;
    S t_lo = (1.0 - z4) * x.t_at + z4 * x.t_lo;
    return {t_at, t_lo};
}

// GtCO2 per year
double land_emissions(int period, const ClimateParams& p);
// W/m2; linear ramp between the start year and the ramp-end year, flat afterwards
double exogenous_forcing(int period, const ModelConfig& c);

}  // namespace twosec
