#include "twosec/diagnostics.hpp"

#include <cmath>
#include <string>

namespace twosec {

int period_of_year(const ModelConfig& cfg, int year) {
    const double k = (year - cfg.paths.start_year) / cfg.paths.period_years;
    const int p = static_cast<int>(std::lround(k));
    if (std::abs(k - p) > 1e-12 || year < cfg.paths.start_year || year > cfg.paths.report_until)
        throw DomainError("year " + std::to_string(year) + " is not a reporting year");
    return p;
}

namespace {

void check_year(const Trajectory& tr, int t) {
    if (t + 1 >= static_cast<int>(tr.periods.size()))
        throw DomainError("trajectory too short for period " + std::to_string(t));
}

// welfare value of one extra trillion of consumption spread over period t
double consumption_value(const Trajectory& tr, const ModelConfig& cfg, const Exogenous& ex, int t) {
    const auto& r = tr.periods[t];
    return ex.disc[t] * 1000.0 * std::pow(r.consumption_pc, -cfg.preference.sigma) / cfg.paths.period_years;
}

}  // namespace

SccRecord scc_multiplier(const Trajectory& tr, const ModelConfig& cfg, int year) {
    if (!tr.has_multipliers) throw MissingMultipliers("trajectory carries no multipliers");
    const int t = period_of_year(cfg, year);
    check_year(tr, t);
    const auto& r = tr.periods[t];
    const double lk = tr.periods[t + 1].lambda_K;
    const double uc = r.lambda_C / cfg.paths.period_years;
    SccRecord s;
    s.year = year;
    // lambda_E is per GtCO2 and the denominators per trillion
    s.scc_investment = -1000.0 * r.lambda_E / lk;
    s.scc_consumption = -1000.0 * r.lambda_E / uc;
    s.ratio = lk / uc;
    return s;
}

SccRecord scc_pulse(const Trajectory& tr, const ModelConfig& cfg, int year, const PulseOptions& opt) {
    const int t = period_of_year(cfg, year);
    check_year(tr, t);
    const Model m = make_model(cfg, ScenarioSpec{tr.kind, {}, {}});
    const double W0 = simulate(m, tr.s, tr.mu).objective;
    auto welfare = [&](Pulse p) {
        p.period = t;
        auto x = simulate(m, tr.s, tr.mu, &p);
        if (!x.feasible) throw PulseInfeasible("pulse at " + std::to_string(year) + " makes the path infeasible");
        return x.objective;
    };
    auto slope = [&](double h) { return (welfare({t, h, 0.0}) - W0) / h; };
    double dE = slope(opt.size);
    if (opt.richardson) dE = 2.0 * slope(0.5 * opt.size) - dE;

    const double hk = opt.capital_step * tr.periods[t + 1].K;
    const double dK = (welfare({t, 0.0, hk}) - welfare({t, 0.0, -hk})) / (2.0 * hk);
    const double uc = consumption_value(tr, m.cfg, m.ex, t);

    SccRecord s;
    s.year = year;
    s.scc_investment = -1000.0 * dE / dK;
    s.scc_consumption = -1000.0 * dE / uc;
    s.ratio = dK / uc;
    return s;
}

std::vector<SccRecord> scc_series(const Trajectory& tr, const ModelConfig& cfg, bool pulse) {
    std::vector<SccRecord> out;
    for (const auto& r : tr.periods) {
        if (r.year > cfg.paths.report_until) break;
        out.push_back(pulse ? scc_pulse(tr, cfg, r.year) : scc_multiplier(tr, cfg, r.year));
    }
    return out;
}

double transformation_ratio(const ModelConfig& cfg, double A1, double A2, double A_I, double T) {
    if (!(A1 > 0 && A2 > 0 && A_I > 0)) throw DomainError("transformation_ratio: productivities must be positive");
    const double F1 = A1 / (1.0 + cfg.sectors[0].theta * T * T);
    const double F2 = A2 / (1.0 + cfg.sectors[1].theta * T * T);
    const double gc = detail::ces_index(F1, F2, 1.0 - cfg.preference.omega_c_services, cfg.preference.eps_c);
    const double gi = detail::ces_index(F1, F2, 1.0 - cfg.technology.omega_I_services, cfg.technology.eps_I);
    return gc / (A_I * gi);
}

std::vector<DamageRecord> damage_relative_to_frontier(const Trajectory& sc, const Trajectory& fr,
                                                      const ModelConfig& cfg) {
    if (sc.periods.size() != fr.periods.size())
        throw AlignmentError("trajectories cover different horizons (" + std::to_string(sc.periods.size()) + " vs " +
                             std::to_string(fr.periods.size()) + " periods)");
    std::vector<DamageRecord> out;
    for (std::size_t i = 0; i < sc.periods.size(); ++i) {
        const auto &a = sc.periods[i], &b = fr.periods[i];
        if (a.year != b.year) throw AlignmentError("year mismatch at period " + std::to_string(i));
        if (a.year > cfg.paths.report_until) break;
        out.push_back({a.year, 100.0 * (1.0 - a.K / b.K), 100.0 * (1.0 - a.alloc.c_agg / b.alloc.c_agg)});
    }
    return out;
}

std::vector<BaumolRecord> baumol_indicators(const Trajectory& tr, const ModelConfig& cfg) {
    std::vector<BaumolRecord> out;
    for (const auto& r : tr.periods) {
        if (r.year > cfg.paths.report_until) break;
        const auto& a = r.alloc;
        BaumolRecord b;
        b.year = r.year;
        b.relative_price = a.p2 / a.p1;
        const double ce = a.p1 * a.c1 + a.p2 * a.c2, ie = a.p1 * a.i1 + a.p2 * a.i2;
        b.services_share_consumption = ce > 0 ? a.p2 * a.c2 / ce : 0.0;
        b.services_share_investment = ie > 0 ? a.p2 * a.i2 / ie : 0.0;
        b.services_value_added_share = a.p2 * a.y2 / a.y_nominal;
        out.push_back(b);
    }
    return out;
}

std::optional<int> net_zero_year(const Trajectory& tr, const ModelConfig& cfg) {
    for (const auto& r : tr.periods) {
        if (r.year > cfg.paths.report_until) break;
        if (r.alloc.mu >= 1.0 - 1e-6) return r.year;
    }
    return std::nullopt;
}

std::vector<TaxIdentityRecord> tax_identity(const Trajectory& tr, const ModelConfig& cfg) {
    std::vector<TaxIdentityRecord> out;
    for (const auto& r : tr.periods) {
        if (r.year > cfg.paths.report_until) break;
        if (!(r.alloc.mu > 1e-6 && r.alloc.mu < 1.0 - 1e-6)) continue;
        auto s = scc_multiplier(tr, cfg, r.year);
        out.push_back({r.year, r.marginal_abatement, s.scc_investment,
                       std::abs(r.marginal_abatement - s.scc_investment) / std::abs(s.scc_investment)});
    }
    return out;
}

}  // namespace twosec
