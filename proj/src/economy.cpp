#include "twosec/economy.hpp"

#include <cmath>
#include <string>

namespace twosec {

double damage_fraction(double t_at, double theta) {
    if (theta < 0) throw DomainError("damage_fraction: theta must be nonnegative");
    return 1.0 - 1.0 / (1.0 + theta * t_at * t_at);
}

double sector_output(double A, double damage, double k, double l, double e, double alpha, double nu) {
    if (!(k > 0 && l > 0 && e > 0)) throw DomainError("sector_output: factor inputs must be positive");
    return (1.0 - damage) * A * std::pow(k, alpha) * std::pow(l / kLaborUnit, 1.0 - alpha - nu) * std::pow(e, nu);
}

double energy_output(double A_E, double k_e, double l_e, double alpha_E) {
    if (!(k_e > 0 && l_e > 0)) throw DomainError("energy_output: factor inputs must be positive");
    return A_E * std::pow(k_e, alpha_E) * std::pow(l_e / kLaborUnit, 1.0 - alpha_E);
}

double ces_aggregate(double x1, double x2, double w, double eps, double scale) {
    if (x1 < 0 || x2 < 0) throw DomainError("ces_aggregate: inputs must be nonnegative");
    if (!(eps > 0) || eps == 1.0) throw DomainError("ces_aggregate: elasticity must be positive and not 1");
    if (eps < 1.0) {
        if (x1 == 0 && x2 == 0) throw DomainError("ces_aggregate: both inputs zero with complementary goods");
        if (x1 == 0 || x2 == 0) return 0.0;
    }
    const double r = (eps - 1.0) / eps;
    const double m = std::max(x1, x2);
    const double s = std::pow(w, 1.0 / eps) * std::pow(x1 / m, r) + std::pow(1.0 - w, 1.0 / eps) * std::pow(x2 / m, r);
    return scale * m * std::pow(s, 1.0 / r);
}

double ces_price_index(double p1, double p2, double w, double eps) {
    return std::pow(w * std::pow(p1, 1.0 - eps) + (1.0 - w) * std::pow(p2, 1.0 - eps), 1.0 / (1.0 - eps));
}

double relative_price(double fhat1, double fhat2) {
    if (!(fhat1 > 0)) throw DomainError("relative_price: fhat1 must be positive");
    if (!(fhat2 > 0)) throw DomainError("relative_price: fhat2 must be positive");
    return fhat1 / fhat2;
}

std::pair<double, double> ces_expenditure_split(double total, double p1, double p2, double w, double eps) {
    if (!(p1 > 0 && p2 > 0)) throw DomainError("ces_expenditure_split: prices must be positive");
    if (total < 0) throw DomainError("ces_expenditure_split: negative expenditure");
    // expenditure shares follow w p^(1-eps) / sum
    const double a1 = w * std::pow(p1, 1.0 - eps);
    const double a2 = (1.0 - w) * std::pow(p2, 1.0 - eps);
    const double share1 = a1 / (a1 + a2);
    return {total * share1 / p1, total * (1.0 - share1) / p2};
}

double backstop_price(int period, const AbatementParams& a) {
    return a.backstop_0 * std::pow(1.0 - a.backstop_decline, period);
}

double abatement_cost(double mu, double e_total, int period, const AbatementParams& a) {
    if (mu < 0 || mu > 1) throw DomainError("abatement_cost: mu outside [0,1]");
    if (e_total < 0) throw DomainError("abatement_cost: negative emissions");
    return abatement_cost_x(mu * e_total, period, a);
}

double abatement_marginal_cost(double mu, double e_total, int period, const AbatementParams& a) {
    if (mu < 0 || mu > 1) throw DomainError("abatement_marginal_cost: mu outside [0,1]");
    if (e_total < 0) throw DomainError("abatement_marginal_cost: negative emissions");
    return abatement_marginal_x(mu * e_total, period, a);
}

namespace {
void check_inputs(const StaticInputs& in) {
    if (!(in.K > 0 && in.L > 0)) throw DomainError("static_allocation: aggregate capital and labor must be positive");
    if (!(in.A1 > 0 && in.A2 > 0 && in.A_E > 0 && in.A_I > 0))
        throw DomainError("static_allocation: productivities must be positive");
    if (in.c_expenditure < 0 || in.i_expenditure < 0) throw DomainError("static_allocation: negative expenditure");
    if (in.mu < 0 || in.mu > 1) throw DomainError("static_allocation: mu outside [0,1]");
}

StaticCore<double> core_of(const StaticInputs& in, const ModelConfig& c) {
    StaticExog<double> x{in.L, in.A1, in.A2, in.A_E, in.A_I, in.period};
    return solve_static<double>(in.K, in.T, in.mu, x, in.price_carbon, c);
}
}  // namespace

double producible_output(const StaticInputs& in, const ModelConfig& c) {
    check_inputs(in);
    auto o = core_of(in, c);
    return o.q * o.X;
}

PeriodAllocation static_allocation(const StaticInputs& in, const ModelConfig& c) {
    check_inputs(in);
    const auto& t = c.technology;
    const auto o = core_of(in, c);
    const double Y = o.q * o.X;
    const double spend = in.c_expenditure + in.i_expenditure;
    if (spend > Y * (1 + 1e-9))
        throw InfeasibleAllocation("expenditures " + std::to_string(spend) + " exceed producible output " +
                                   std::to_string(Y));
    if (spend < Y * (1 - 1e-9))
        throw InfeasibleAllocation("expenditures " + std::to_string(spend) + " leave output " + std::to_string(Y) +
                                   " unallocated");

    PeriodAllocation a;
    a.mu = in.mu;
    a.y_nominal = Y;
    a.energy = o.E;
    a.tax = o.tau;
    a.p1 = o.q / o.F1;
    a.p2 = o.q / o.F2;
    const double wc = 1.0 - c.preference.omega_c_services;
    const double wi = 1.0 - t.omega_I_services;
    std::tie(a.c1, a.c2) = ces_expenditure_split(in.c_expenditure, a.p1, a.p2, wc, c.preference.eps_c);
    std::tie(a.i1, a.i2) = ces_expenditure_split(in.i_expenditure, a.p1, a.p2, wi, t.eps_I);
    a.y1 = a.c1 + a.i1;
    a.y2 = a.c2 + a.i2;

    // final-sector factors follow nominal value-added shares
    const double v1 = a.p1 * a.y1 / Y, v2 = a.p2 * a.y2 / Y;
    a.l1 = o.Lf * v1;
    a.l2 = o.Lf * v2;
    a.k1 = o.Kf * v1;
    a.k2 = o.Kf * v2;
    a.e1 = o.E * v1;
    a.e2 = o.E * v2;
    a.ke = o.KE;
    a.le = o.LE;

    a.pe = o.q * t.nu * o.X / o.E;
    a.w = o.q * (1.0 - t.alpha - t.nu) * o.X / o.Lf;
    a.r = o.q * t.alpha * o.X / o.Kf;
    a.c_agg = in.c_expenditure * o.GC / o.q;
    a.i_agg = in.i_expenditure;
    a.abatement = abatement_cost_x(in.mu * o.E, in.period, c.abatement);
    return a;
}

}  // namespace twosec
