#include "twosec/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "twosec/optimizer.hpp"

namespace twosec {

std::string to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::frontier: return "frontier";
        case ScenarioKind::bau: return "bau";
        case ScenarioKind::optimal: return "optimal";
    }
    return "?";
}

ScenarioKind scenario_kind(const std::string& name) {
    if (name == "frontier") return ScenarioKind::frontier;
    if (name == "bau") return ScenarioKind::bau;
    if (name == "optimal") return ScenarioKind::optimal;
    throw ValidationError("unknown scenario '" + name + "' (frontier, bau, optimal)");
}

Exogenous build_exogenous(const ModelConfig& c) {
    const int N = c.paths.horizon;
    Exogenous e;
    e.L.resize(N);
    e.L[0] = c.paths.L0;
    for (int t = 1; t < N; ++t) e.L[t] = e.L[t - 1] * std::pow(c.paths.L_asym / e.L[t - 1], c.paths.L_growth_exp);
    auto grow = [&](double x0, double g) {
        std::vector<double> v(N);
        for (int t = 0; t < N; ++t) v[t] = x0 * std::pow(1.0 + g, t);
        return v;
    };
    e.A1 = grow(c.sectors[0].A0, c.sectors[0].gamma);
    e.A2 = grow(c.sectors[1].A0, c.sectors[1].gamma);
    e.A_E = grow(c.technology.A_E0, c.technology.gamma_E);
    e.A_I = grow(c.technology.A_I0, c.technology.gamma_I);
    e.chi.resize(N);
    e.land.resize(N);
    e.disc.resize(N);
    for (int t = 0; t < N; ++t) {
        e.chi[t] = exogenous_forcing(t + 1, c);
        e.land[t] = land_emissions(t, c.climate);
        e.disc[t] = std::pow(c.preference.beta_annual, c.paths.period_years * t);
    }
    return e;
}

Model make_model(const ModelConfig& base, const ScenarioSpec& sc) {
    Model m;
    m.cfg = base;
    for (const auto& [k, v] : sc.config_overrides) set_param(m.cfg, k, v);
    validate(m.cfg);
    m.kind = sc.kind;
    if (sc.kind == ScenarioKind::frontier) m.cfg.sectors[0].theta = m.cfg.sectors[1].theta = 0.0;
    m.price_carbon = sc.kind == ScenarioKind::optimal && m.cfg.solver.price_carbon_in_energy;
    m.N = m.cfg.paths.horizon;
    m.ex = build_exogenous(m.cfg);
    return m;
}

namespace {

// inputs: K, M_at, M_up, M_lo, T, T_lo, s, mu, energy-share perturbation, emission injection (GtCO2)
// outputs: period welfare, next K, M_at, M_up, M_lo, T, T_lo
constexpr int kIn = 10;

template <class S>
struct KernelOut {
    std::array<S, 7> y;
    StaticCore<S> core;
    S Y, C, cpc, theta, emis, forcing;
};

template <class S>
KernelOut<S> kernel(const Model& m, int t, const std::array<S, kIn>& in, const Pulse* pulse) {
    using std::pow;
    const auto& c = m.cfg;
    const auto& ex = m.ex;
    const S &K = in[0], &s = in[6], &mu = in[7];
    StaticExog<S> x{ex.L[t], ex.A1[t], ex.A2[t], ex.A_E[t], ex.A_I[t], t};
    KernelOut<S> o;
    o.core = solve_static(K, in[4], mu, x, m.price_carbon, c, in[8]);
    const auto& k = o.core;
    const double dt = c.paths.period_years;
    const double sig = c.preference.sigma;
    o.Y = k.q * k.X;
    o.C = (1.0 - s) * k.X * k.GC;
    o.cpc = 1000.0 * o.C / ex.L[t];
    const S U = ex.disc[t] * ex.L[t] * pow(o.cpc, 1.0 - sig) / (1.0 - sig);
    o.theta = abatement_cost_x(S(mu * k.E), t, c.abatement);
    S Kn = (1.0 - c.delta_period()) * K + dt * (s * o.Y - o.theta);
    o.emis = (1.0 - mu) * k.E + ex.land[t];
    S inj = dt * o.emis + in[9];
    if (pulse && pulse->period == t) {
        Kn = Kn + pulse->capital;
        inj = inj + pulse->emissions;
    }
    ClimateStateT<S> st{in[1], in[2], in[3], in[4], in[5]};
    auto nx = carbon_cycle_step(st, inj, c.climate);
    o.forcing = radiative_forcing(nx.m_at, ex.chi[t], c.climate);
    auto temp = temperature_step(st, o.forcing, c.climate);
    o.y = {U, Kn, nx.m_at, nx.m_up, nx.m_lo, temp[0], temp[1]};
    return o;
}

bool usable(double Kn, double K0) { return std::isfinite(Kn) && Kn > 1e-6 * K0; }

}  // namespace

Trajectory simulate(const Model& m, const std::vector<double>& s, const std::vector<double>& mu, const Pulse* pulse) {
    const auto& c = m.cfg;
    const int N = m.N;
    Trajectory tr;
    tr.kind = m.kind;
    tr.s = s;
    tr.mu = mu;
    std::array<double, 6> x{c.initial.K0, c.initial.M0[0], c.initial.M0[1], c.initial.M0[2], c.initial.T0,
                            c.initial.T_lo0};
    double W = 0;
    for (int t = 0; t < N; ++t) {
        std::array<double, kIn> in{x[0], x[1], x[2], x[3], x[4], x[5], s[t], mu[t], 0.0, 0.0};
        auto o = kernel<double>(m, t, in, pulse);
        PeriodRecord r;
        r.period = t;
        r.year = c.year_of(t);
        r.climate = {x[1], x[2], x[3], x[4], x[5]};
        r.K = x[0];
        r.s = s[t];
        StaticInputs si{x[0], m.ex.L[t], x[4], m.ex.A1[t], m.ex.A2[t], m.ex.A_E[t], m.ex.A_I[t],
                        (1.0 - s[t]) * o.Y, s[t] * o.Y, mu[t], t, m.price_carbon};
        r.alloc = static_allocation(si, c);
        r.F1 = o.core.F1;
        r.F2 = o.core.F2;
        r.GC = o.core.GC;
        r.GI = o.core.GI;
        r.consumption_pc = o.cpc;
        r.utility = o.y[0];
        r.emissions_industrial = (1.0 - mu[t]) * o.core.E;
        r.emissions_total = o.emis;
        r.forcing_next = o.forcing;
        r.marginal_abatement = 1000.0 * abatement_marginal_x(mu[t] * o.core.E, t, c.abatement);
        tr.periods.push_back(r);
        W += o.y[0];
        if (!usable(o.y[1], c.initial.K0)) {
            tr.feasible = false;
            break;
        }
        for (int i = 0; i < 6; ++i) x[i] = o.y[i + 1];
    }
    tr.K_end = x[0];
    tr.climate_end = {x[1], x[2], x[3], x[4], x[5]};
    tr.objective = tr.feasible ? W : std::numeric_limits<double>::lowest();
    return tr;
}

double objective(const Trajectory& tr) { return tr.objective; }

Gradient welfare_gradient(const Model& m, const std::vector<double>& s, const std::vector<double>& mu) {
    using D = Dual<kIn>;
    const auto& c = m.cfg;
    const int N = m.N;
    Gradient G;
    G.jac.resize(N);
    G.U_C.resize(N);
    G.share_scale.resize(N);
    G.GC.resize(N);
    G.q.resize(N);
    std::array<double, 6> x{c.initial.K0, c.initial.M0[0], c.initial.M0[1], c.initial.M0[2], c.initial.T0,
                            c.initial.T_lo0};
    for (int t = 0; t < N; ++t) {
        std::array<double, kIn> v{x[0], x[1], x[2], x[3], x[4], x[5], s[t], mu[t], 0.0, 0.0};
        std::array<D, kIn> in;
        for (int k = 0; k < kIn; ++k) in[k] = D::seed(v[k], k);
        auto o = kernel<D>(m, t, in, nullptr);
        for (int i = 0; i < 7; ++i)
            for (int k = 0; k < kIn; ++k) G.jac[t][i][k] = o.y[i].d[k];
        G.W += o.y[0].v;
        G.U_C[t] = m.ex.disc[t] * 1000.0 * std::pow(o.cpc.v, -c.preference.sigma);
        G.GC[t] = o.core.GC.v;
        G.q[t] = o.core.q.v;
        // value of the labor an energy-share shift moves, priced like consumption spending
        G.share_scale[t] = G.U_C[t] * G.GC[t] / G.q[t] * o.Y.v * (1.0 - m.cfg.technology.alpha - m.cfg.technology.nu) /
                           (1.0 - o.core.share.v);
        if (!usable(o.y[1].v, c.initial.K0)) {
            G.feasible = false;
            return G;
        }
        for (int i = 0; i < 6; ++i) x[i] = o.y[i + 1].v;
    }

    G.lambda.assign(N + 1, {});
    G.ds.resize(N);
    G.dmu.resize(N);
    G.demis.resize(N);
    G.dshare.resize(N);
    G.ns.resize(N);
    G.nmu.resize(N);
    G.nshare.resize(N);
    for (int t = N - 1; t >= 0; --t) {
        const auto& J = G.jac[t];
        const auto& ln = G.lambda[t + 1];
        std::array<double, kIn> g{}, a{};
        for (int k = 0; k < kIn; ++k) {
            g[k] = J[0][k];
            a[k] = std::abs(J[0][k]);
            for (int i = 1; i < 7; ++i) {
                g[k] += ln[i - 1] * J[i][k];
                a[k] += std::abs(ln[i - 1] * J[i][k]);
            }
        }
        for (int k = 0; k < 6; ++k) G.lambda[t][k] = g[k];
        G.ds[t] = g[6];
        G.dmu[t] = g[7];
        G.dshare[t] = g[8];
        G.demis[t] = g[9];
        G.ns[t] = a[6];
        G.nmu[t] = a[7];
        G.nshare[t] = a[8];
    }
    return G;
}

std::vector<double> expand_savings(const ModelConfig& c, const std::vector<double>& s_free) {
    const int N = c.paths.horizon;
    const int nf = N - c.solver.terminal_fixed;
    std::vector<double> s(N);
    for (int t = 0; t < N; ++t) s[t] = t < nf ? s_free[t] : s_free[c.solver.terminal_anchor];
    return s;
}

std::pair<std::vector<double>, std::vector<double>> initial_decisions(const Model& m) {
    const auto& sv = m.cfg.solver;
    std::vector<double> s(m.N, sv.s_init), mu(m.N, 0.0);
    if (m.kind == ScenarioKind::optimal) {
        const int R = sv.mu_ramp_periods;
        for (int t = 0; t < m.N; ++t)
            mu[t] = R > 1 && t < R ? sv.mu_init_start + (1.0 - sv.mu_init_start) * t / (R - 1.0) : 1.0;
    }
    return {s, mu};
}

void attach_multipliers(const Model& m, Trajectory& tr) {
    auto G = welfare_gradient(m, tr.s, tr.mu);
    if (!G.feasible) return;
    for (auto& r : tr.periods) {
        const auto& l = G.lambda[r.period];
        r.lambda_K = l[0];
        r.lambda_M = {l[1], l[2], l[3]};
        r.lambda_T = l[4];
        r.lambda_Tlo = l[5];
        r.lambda_C = G.U_C[r.period];
        r.lambda_E = G.demis[r.period];
    }
    tr.has_multipliers = true;
}

Trajectory solve(const ModelConfig& cfg, const ScenarioSpec& sc) {
    const auto t0 = std::chrono::steady_clock::now();
    const Model m = make_model(cfg, sc);
    const auto& sv = m.cfg.solver;
    const int N = m.N;
    const int nf = N - sv.terminal_fixed;
    const bool opt = m.kind == ScenarioKind::optimal;
    const int n = nf + (opt ? N : 0);

    auto [s0, mu0] = initial_decisions(m);
    std::vector<double> z0(n), lo(n), hi(n);
    for (int t = 0; t < nf; ++t) {
        z0[t] = s0[t];
        lo[t] = sv.s_lo;
        hi[t] = sv.s_hi;
    }
    if (opt)
        for (int t = 0; t < N; ++t) {
            z0[nf + t] = mu0[t];
            lo[nf + t] = 0.0;
            hi[nf + t] = 1.0;
        }

    auto unpack = [&](const std::vector<double>& z) {
        std::vector<double> s = expand_savings(m.cfg, std::vector<double>(z.begin(), z.begin() + nf));
        std::vector<double> mu = opt ? std::vector<double>(z.begin() + nf, z.end()) : std::vector<double>(N, 0.0);
        return std::make_pair(s, mu);
    };

    const double wscale = [&] {
        auto [s, mu] = unpack(z0);
        auto tr = simulate(m, s, mu);
        if (!tr.feasible) throw std::runtime_error("solve: infeasible initial decisions");
        return std::abs(tr.objective);
    }();

    BoxProblem prob;
    prob.lo = lo;
    prob.hi = hi;
    prob.eval = [&](const std::vector<double>& z) {
        auto [s, mu] = unpack(z);
        BoxEval e;
        auto G = welfare_gradient(m, s, mu);
        if (!G.feasible) {
            e.ok = false;
            e.f = std::numeric_limits<double>::infinity();
            return e;
        }
        e.f = -G.W / wscale;
        e.g.assign(n, 0.0);
        e.scale.assign(n, 0.0);
        for (int t = 0; t < N; ++t) {
            const int i = t < nf ? t : sv.terminal_anchor;
            e.g[i] -= G.ds[t] / wscale;
            e.scale[i] += G.ns[t] / wscale;
        }
        if (opt)
            for (int t = 0; t < N; ++t) {
                e.g[nf + t] = -G.dmu[t] / wscale;
                e.scale[nf + t] = G.nmu[t] / wscale;
            }
        return e;
    };

    BoxOptions bo;
    bo.max_iter = sv.max_iter;
    bo.tol = sv.kkt_tol;
    auto res = minimize_box(prob, z0, bo);

    auto [s, mu] = unpack(res.x);
    Trajectory tr = simulate(m, s, mu);
    tr.label = sc.label.empty() ? to_string(sc.kind) : sc.label;
    attach_multipliers(m, tr);
    tr.info.iterations = res.iterations;
    tr.info.evaluations = res.evaluations;
    tr.info.stationarity = res.stationarity;
    tr.info.converged = res.stationarity < 1e-6 && res.monotone;
    tr.info.message = res.message;
    tr.info.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!tr.info.converged)
        throw NonConvergence("solve did not converge: " + res.message + ", stationarity " +
                                 std::to_string(res.stationarity) + " after " + std::to_string(res.iterations) +
                                 " iterations",
                             tr);
    return tr;
}

double KktReport::max() const {
    double m = std::max({savings, abatement, euler});
    return energy_applicable ? std::max(m, energy) : m;
}

KktReport kkt_residuals(const Model& m, const std::vector<double>& s, const std::vector<double>& mu) {
    const auto& sv = m.cfg.solver;
    const int N = m.N;
    const int nf = N - sv.terminal_fixed;
    const double dt = m.cfg.paths.period_years;
    auto G = welfare_gradient(m, s, mu);
    KktReport r;
    if (!G.feasible) {
        r.savings = r.abatement = r.energy = r.euler = std::numeric_limits<double>::infinity();
        return r;
    }
    double worst = 0;
    auto note = [&](double& slot, double v, int t, const char* what) {
        slot = std::max(slot, v);
        if (v > worst) {
            worst = v;
            r.worst_period = t;
            r.worst_condition = what;
        }
    };
    auto projected = [](double g, double x, double lo, double hi) {
        // welfare gradient; maximizing
        if (x <= lo && g < 0) return 0.0;
        if (x >= hi && g > 0) return 0.0;
        return g;
    };
    auto interior = [&](int t) { return s[t] > sv.s_lo && s[t] < sv.s_hi; };

    // savings margin on the reduced variables
    std::vector<double> gs(nf, 0.0), ns(nf, 0.0);
    for (int t = 0; t < N; ++t) {
        const int i = t < nf ? t : sv.terminal_anchor;
        gs[i] += G.ds[t];
        ns[i] += G.ns[t];
    }
    for (int i = 0; i < nf; ++i)
        if (ns[i] > 0) note(r.savings, std::abs(projected(gs[i], s[i], sv.s_lo, sv.s_hi)) / ns[i], i, "savings");

    if (m.kind == ScenarioKind::optimal)
        for (int t = 0; t < N; ++t)
            if (G.nmu[t] > 0) note(r.abatement, std::abs(projected(G.dmu[t], mu[t], 0.0, 1.0)) / G.nmu[t], t, "abatement");

    r.energy_applicable = m.kind != ScenarioKind::bau;
    if (r.energy_applicable)
        for (int t = 0; t < N; ++t)
            note(r.energy, std::abs(G.dshare[t]) / G.share_scale[t], t, "energy");

    // v_t = value of a unit of expenditure spent on consumption; the Euler condition
    // prices next period's capital with v_{t+1}/dt in place of its costate
    for (int t = 0; t + 1 < nf; ++t) {
        const int u = t + 1;
        if (t == sv.terminal_anchor || u == sv.terminal_anchor || !interior(t) || !interior(u)) continue;
        const double vt = G.U_C[t] * G.GC[t] / G.q[t];
        const double vu = G.U_C[u] * G.GC[u] / G.q[u];
        const auto& J = G.jac[u];
        double rhs = J[0][0] + vu / dt * J[1][0];
        double mag = std::abs(J[0][0]) + std::abs(vu / dt * J[1][0]);
        for (int i = 2; i < 7; ++i) {
            rhs += G.lambda[u + 1][i - 1] * J[i][0];
            mag += std::abs(G.lambda[u + 1][i - 1] * J[i][0]);
        }
        note(r.euler, std::abs(vt / dt - rhs) / std::max(vt / dt, mag), t, "euler");
    }
    return r;
}

KktReport kkt_residuals(const Trajectory& tr, const ModelConfig& cfg, const ScenarioSpec& sc) {
    return kkt_residuals(make_model(cfg, sc), tr.s, tr.mu);
}

}  // namespace twosec
