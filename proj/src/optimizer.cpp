#include "twosec/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace twosec {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool at_lower(double x, double lo) { return x <= lo; }
bool at_upper(double x, double hi) { return x >= hi; }

// variables held at a bound by an outward-pointing gradient
std::vector<char> free_mask(const Vec& x, const Vec& g, const Vec& lo, const Vec& hi) {
    std::vector<char> m(x.size(), 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        if ((at_lower(x[i], lo[i]) && g[i] > 0) || (at_upper(x[i], hi[i]) && g[i] < 0)) m[i] = 0;
    return m;
}

Vec project(Vec x, const Vec& lo, const Vec& hi) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
}

struct Counter {
    const BoxProblem& p;
    int n = 0;
    BoxEval operator()(const Vec& x) {
        ++n;
        return p.eval(x);
    }
};

// projected Armijo backtracking along x + a d
bool line_search(Counter& ev, const BoxProblem& p, const Vec& x, const BoxEval& e, const Vec& d, Vec& xn,
                 BoxEval& en) {
    double a = 1.0;
    for (int k = 0; k < 60; ++k, a *= 0.5) {
        Vec t(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) t[i] = x[i] + a * d[i];
        t = project(std::move(t), p.lo, p.hi);
        Vec step(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) step[i] = t[i] - x[i];
        const double slope = dot(e.g, step);
        if (slope >= 0) continue;
        BoxEval c = ev(t);
        if (c.ok && std::isfinite(c.f) && c.f <= e.f + 1e-4 * slope) {
            xn = std::move(t);
            en = std::move(c);
            return true;
        }
    }
    return false;
}

}  // namespace

double relative_stationarity(const Vec& x, const BoxEval& e, const Vec& lo, const Vec& hi) {
    double worst = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double g = e.g[i];
        if ((at_lower(x[i], lo[i]) && g > 0) || (at_upper(x[i], hi[i]) && g < 0)) g = 0;
        if (g == 0) continue;
        const double s = e.scale.empty() ? 1.0 : e.scale[i];
        worst = std::max(worst, s > 0 ? std::abs(g) / s : std::numeric_limits<double>::infinity());
    }
    return worst;
}

BoxResult minimize_box(const BoxProblem& p, Vec x0, const BoxOptions& opt) {
    const std::size_t n = x0.size();
    Counter ev{p};
    BoxResult res;
    Vec x = project(std::move(x0), p.lo, p.hi);
    BoxEval e = ev(x);
    if (!e.ok || !std::isfinite(e.f)) throw std::runtime_error("minimize_box: infeasible starting point");

    auto stat = [&] { return relative_stationarity(x, e, p.lo, p.hi); };

    // ---- limited-memory phase
    std::deque<std::pair<Vec, Vec>> mem;
    int it = 0, flat = 0;
    for (; it < opt.max_iter; ++it) {
        if (stat() < opt.qn_tol) break;
        auto m = free_mask(x, e.g, p.lo, p.hi);
        Vec q(n);
        for (std::size_t i = 0; i < n; ++i) q[i] = m[i] ? -e.g[i] : 0.0;
        if (!mem.empty()) {
            std::vector<double> alpha(mem.size());
            auto masked = [&](const Vec& v) {
                Vec r(n);
                for (std::size_t i = 0; i < n; ++i) r[i] = m[i] ? v[i] : 0.0;
                return r;
            };
            std::vector<std::pair<Vec, Vec>> mm;
            for (auto& [s, y] : mem) mm.emplace_back(masked(s), masked(y));
            for (int k = static_cast<int>(mm.size()) - 1; k >= 0; --k) {
                const double sy = dot(mm[k].first, mm[k].second);
                if (sy <= 0) continue;
                alpha[k] = dot(mm[k].first, q) / sy;
                for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * mm[k].second[i];
            }
            const auto& [sl, yl] = mm.back();
            const double yy = dot(yl, yl);
            const double gamma = yy > 0 && dot(sl, yl) > 0 ? dot(sl, yl) / yy : 1.0;
            for (auto& v : q) v *= gamma;
            for (std::size_t k = 0; k < mm.size(); ++k) {
                const double sy = dot(mm[k].first, mm[k].second);
                if (sy <= 0) continue;
                const double beta = dot(mm[k].second, q) / sy;
                for (std::size_t i = 0; i < n; ++i) q[i] += (alpha[k] - beta) * mm[k].first[i];
            }
        }
        if (mem.empty() || dot(q, e.g) >= 0) {
            mem.clear();
            double big = 0;
            for (std::size_t i = 0; i < n; ++i) {
                q[i] = m[i] ? -e.g[i] : 0.0;
                big = std::max(big, std::abs(q[i]));
            }
            if (big == 0) break;
            for (auto& v : q) v *= 0.01 / big;
        }
        Vec xn;
        BoxEval en;
        if (!line_search(ev, p, x, e, q, xn, en)) {
            if (!mem.empty()) {
                mem.clear();
                continue;
            }
            res.message = "quasi-Newton line search stalled";
            break;
        }
        if (en.f > e.f) res.monotone = false;
        flat = (e.f - en.f <= 1e-15 * std::abs(e.f)) ? flat + 1 : 0;
        Vec s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xn[i] - x[i];
            y[i] = en.g[i] - e.g[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
            mem.emplace_back(std::move(s), std::move(y));
            if (static_cast<int>(mem.size()) > opt.memory) mem.pop_front();
        }
        x = std::move(xn);
        e = std::move(en);
        if (flat >= 20) break;
    }
    res.iterations = it;
    if (it >= opt.max_iter) res.message = "iteration limit";

    // ---- Newton polish on the free set, only from a quasi-Newton end point
    for (int k = 0; k < opt.max_newton && it < opt.max_iter; ++k) {
        if (stat() < opt.tol) break;
        auto m = free_mask(x, e.g, p.lo, p.hi);
        std::vector<int> F;
        for (std::size_t i = 0; i < n; ++i)
            if (m[i]) F.push_back(static_cast<int>(i));
        const int nf = static_cast<int>(F.size());
        if (nf == 0) break;
        Eigen::MatrixXd H(nf, nf);
        for (int c = 0; c < nf; ++c) {
            const int j = F[c];
            const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
            double up = h, dn = h;
            if (x[j] + h > p.hi[j]) up = 0;
            if (x[j] - h < p.lo[j]) dn = 0;
            Vec xp = x, xm = x;
            xp[j] += up;
            xm[j] -= dn;
            BoxEval gp = up > 0 ? ev(xp) : e;
            BoxEval gm = dn > 0 ? ev(xm) : e;
            for (int r = 0; r < nf; ++r) H(r, c) = (gp.g[F[r]] - gm.g[F[r]]) / (up + dn);
        }
        H = 0.5 * (H + H.transpose()).eval();
        Eigen::VectorXd g(nf);
        for (int r = 0; r < nf; ++r) g(r) = e.g[F[r]];
        const double hnorm = H.diagonal().cwiseAbs().maxCoeff();
        double lambda = 0;
        Eigen::VectorXd d;
        bool solved = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::MatrixXd A = H;
            A.diagonal().array() += lambda;
            Eigen::LLT<Eigen::MatrixXd> llt(A);
            if (llt.info() == Eigen::Success) {
                d = -llt.solve(g);
                if (d.dot(g) < 0) {
                    solved = true;
                    break;
                }
            }
            lambda = lambda == 0 ? 1e-10 * hnorm : lambda * 10;
        }
        if (!solved) {
            res.message = "Newton polish: no descent direction";
            break;
        }
        Vec dir(n, 0.0);
        for (int r = 0; r < nf; ++r) dir[F[r]] = d(r);
        Vec xn;
        BoxEval en;
        if (!line_search(ev, p, x, e, dir, xn, en)) {
            res.message = "Newton polish line search stalled";
            break;
        }
        if (en.f > e.f) res.monotone = false;
        x = std::move(xn);
        e = std::move(en);
        ++res.iterations;
    }

    res.stationarity = stat();
    res.x = std::move(x);
    res.at = std::move(e);
    res.evaluations = ev.n;
    if (res.message.empty()) res.message = res.stationarity < opt.tol ? "converged" : "iteration limit";
    return res;
}

}  // namespace twosec
