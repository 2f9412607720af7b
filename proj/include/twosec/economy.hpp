#pragma once
// Within-period economics. Labor arguments are in millions of people and
// enter production in billions, so calibrated TFP levels keep their
// familiar magnitudes (A = 5.024, A_E = 17.9382).
#include <tuple>
#include <utility>

#include "twosec/climate.hpp"
#include "twosec/config.hpp"
#include "twosec/dual.hpp"

namespace twosec {

inline constexpr double kLaborUnit = 1000.0;  // millions per production labor unit

struct InfeasibleAllocation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PeriodAllocation {
    double k1 = 0, k2 = 0, ke = 0;
    double l1 = 0, l2 = 0, le = 0;
    double e1 = 0, e2 = 0;
    double y1 = 0, y2 = 0;  // real sector outputs
    double c1 = 0, c2 = 0;
    double i1 = 0, i2 = 0;
    double mu = 0;
    double p1 = 0, p2 = 0, pe = 0;
    double tax = 0;  // wedge between user and producer energy price
    double w = 0, r = 0;
    double c_agg = 0, i_agg = 0, y_nominal = 0;
    double energy = 0;
    double abatement = 0;  // trillion per year, investment units
};

struct DamageOutcome {
    double d1 = 0, d2 = 0;
};

double damage_fraction(double t_at, double theta);
double sector_output(double A, double damage, double k, double l, double e, double alpha, double nu);
double energy_output(double A_E, double k_e, double l_e, double alpha_E);
double ces_aggregate(double x1, double x2, double weight_on_1, double elasticity, double scale = 1.0);
// unit cost of the aggregate above (scale 1)
double ces_price_index(double p1, double p2, double weight_on_1, double elasticity);
double relative_price(double fhat1, double fhat2);
std::pair<double, double> ces_expenditure_split(double total_expenditure, double p1, double p2, double weight_on_1,
                                                double elasticity);

double backstop_price(int period, const AbatementParams& a);
// trillion 2010US$ per year
double abatement_cost(double mu, double e_total, int period, const AbatementParams& a);
// d cost / d abated emissions, trillion per GtCO2 (x1000 for $/tCO2)
double abatement_marginal_cost(double mu, double e_total, int period, const AbatementParams& a);

struct StaticInputs {
    double K = 0, L = 0, T = 0;
    double A1 = 0, A2 = 0, A_E = 0, A_I = 1;
    double c_expenditure = 0, i_expenditure = 0;
    double mu = 0;
    int period = 0;
    bool price_carbon = false;  // energy users face tau = marginal abatement cost
};

// nominal final output implied by the factor allocation (expenditures must exhaust it)
double producible_output(const StaticInputs& in, const ModelConfig& c);
PeriodAllocation static_allocation(const StaticInputs& in, const ModelConfig& c);

// ---------------------------------------------------------------- templated kernels

template <class S>
S sigmoid(const S& u) {
    using std::exp;
    if (value(u) >= 0.0) return 1.0 / (1.0 + exp(-u));
    S e = exp(u);
    return e / (1.0 + e);
}

struct LogisticCoefs {
    double a, b0, b1;
};
inline LogisticCoefs logistic_coefs(int period, const AbatementParams& a) {
    const double tl = (period - a.time_origin) / a.time_unit;
    return {a.a_coefs[0] + a.a_coefs[1] * tl, a.b0_coefs[0] + a.b0_coefs[1] * tl, a.b1_coefs[0] + a.b1_coefs[1] * tl};
}

// x = mu * E in GtCO2/yr
template <class S>
S abatement_cost_x(const S& x, int period, const AbatementParams& a) {
    using std::log;
    using std::pow;
    const auto k = logistic_coefs(period, a);
    const double P = backstop_price(period, a);
    S u = k.b1 * pow(x, a.b2) - k.b0 - std::log(k.a);
    return a.a_bar * P * sigmoid(u) * x / 1000.0;
}

template <class S>
S abatement_marginal_x(const S& x, int period, const AbatementParams& a) {
    using std::pow;
    const auto k = logistic_coefs(period, a);
    const double P = backstop_price(period, a);
    S xb = pow(x, a.b2);
    S sg = sigmoid(k.b1 * xb - k.b0 - std::log(k.a));
    return a.a_bar * P / 1000.0 * (sg + sg * (1.0 - sg) * k.b1 * a.b2 * xb);
}

// Energy/final split and composite production for one period.
// Final sectors share capital/labor and energy/labor ratios, so final output
// is q * X with X a Cobb-Douglas composite of the final-sector factor pool.
template <class S>
struct StaticCore {
    S share;  // energy-sector labor share
    S LE, Lf, KE, Kf, E, X;
    S F1, F2;  // damaged TFP
    S GC, GI;  // consumption/investment transformation indices
    S q;       // nominal output per unit of X (investment-good numeraire)
    S tau;
};

template <class S>
struct StaticExog {
    double L, A1, A2, A_E, A_I;
    int period;
};

namespace detail {

template <class S>
S ces_index(const S& F1, const S& F2, double w_goods, double eps) {
    using std::pow;
    // [w F1^(eps-1) + (1-w) F2^(eps-1)]^(1/(eps-1)), factored for range safety
    S m = value(F1) > value(F2) ? F1 : F2;
    S r1 = F1 / m, r2 = F2 / m;
    return m * pow(w_goods * pow(r1, eps - 1.0) + (1.0 - w_goods) * pow(r2, eps - 1.0), 1.0 / (eps - 1.0));
}

template <class S>
void fill_alloc(StaticCore<S>& o, const S& K, const S& share, double L, double A_E, const TechnologyParams& t) {
    using std::pow;
    const double rho = (t.alpha_E / (1.0 - t.alpha_E)) * ((1.0 - t.alpha - t.nu) / t.alpha);
    o.share = share;
    o.LE = L * share;
    o.Lf = L - o.LE;
    S kf = K / (o.Lf + rho * o.LE);
    o.KE = rho * kf * o.LE;
    o.Kf = kf * o.Lf;
    o.E = A_E * pow(o.KE, t.alpha_E) * pow(o.LE / kLaborUnit, 1.0 - t.alpha_E);
    o.X = pow(o.Kf, t.alpha) * pow(o.Lf / kLaborUnit, 1.0 - t.alpha - t.nu) * pow(o.E, t.nu);
}

// normalized energy-labor optimality condition; zero at the market split
template <class S>
S share_residual(const StaticCore<S>& o, const TechnologyParams& t) {
    return (t.nu - o.tau * o.E / (o.q * o.X)) * (1.0 - t.alpha_E) * (1.0 - o.share) - (1.0 - t.alpha - t.nu) * o.share;
}

}  // namespace detail

inline double untaxed_energy_share(const TechnologyParams& t) {
    const double r0 = t.nu * (1.0 - t.alpha_E) / (1.0 - t.alpha - t.nu);
    return r0 / (1.0 + r0);
}

template <class S>
StaticCore<S> evaluate_split(const S& K, const S& T, const S& mu, const S& share, const StaticExog<S>& x,
                             bool price_carbon, const ModelConfig& c) {
    const auto& t = c.technology;
    StaticCore<S> o;
    o.F1 = x.A1 / (1.0 + c.sectors[0].theta * T * T);
    o.F2 = x.A2 / (1.0 + c.sectors[1].theta * T * T);
    o.GC = detail::ces_index(o.F1, o.F2, 1.0 - c.preference.omega_c_services, c.preference.eps_c);
    o.GI = detail::ces_index(o.F1, o.F2, 1.0 - t.omega_I_services, t.eps_I);
    o.q = x.A_I * o.GI;
    detail::fill_alloc(o, K, share, x.L, x.A_E, t);
    o.tau = price_carbon ? abatement_marginal_x(S(mu * o.E), x.period, c.abatement) : S(0.0);
    return o;
}

// Solves the energy-labor share. Derivatives of the root w.r.t. the scalar's
// directions follow from one implicit-function Newton step at the converged value.
template <class S>
StaticCore<S> solve_static(const S& K, const S& T, const S& mu, const StaticExog<S>& x, bool price_carbon,
                           const ModelConfig& c, const S& dshare = S(0.0)) {
    const auto& t = c.technology;
    const double s0 = untaxed_energy_share(t);
    if (!price_carbon) return evaluate_split(K, T, mu, S(s0) + dshare, x, false, c);

    using D1 = Dual<1>;
    StaticExog<D1> x1{x.L, x.A1, x.A2, x.A_E, x.A_I, x.period};
    const D1 K1(value(K)), T1(value(T)), mu1(value(mu));
    auto resid = [&](double sh) {
        auto o = evaluate_split(K1, T1, mu1, D1::seed(sh, 0), x1, true, c);
        return detail::share_residual(o, t);
    };
    // a negative marginal cost (late logistic coefficients) subsidizes energy and
    // moves the root above the untaxed share
    double sh = s0;
    D1 g = resid(sh);
    double lo = 1e-9, hi = s0;
    if (g.v > 0.0) {
        lo = s0;
        hi = 1.0 - 1e-9;
    }
    if (g.v != 0.0) {
        for (int it = 0; it < 200; ++it) {
            if (g.v > 0.0) lo = sh;
            else hi = sh;
            double next = sh - g.v / g.d[0];
            if (!(next > lo && next < hi) || !(g.d[0] < 0.0)) next = 0.5 * (lo + hi);
            if (std::abs(next - sh) <= 1e-15 * sh) {
                sh = next;
                break;
            }
            sh = next;
            g = resid(sh);
            if (g.v == 0.0) break;
        }
        g = resid(sh);
    }
    const double slope = g.d[0];
    auto o = evaluate_split(K, T, mu, S(sh), x, true, c);
    S r = detail::share_residual(o, t);
    S share = sh - r / slope + dshare;
    return evaluate_split(K, T, mu, share, x, true, c);
}

}  // namespace twosec
