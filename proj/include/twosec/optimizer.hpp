#pragma once
// Bound-constrained minimizer: projected limited-memory quasi-Newton followed
// by a projected Newton polish on the free variables (Hessian by differences
// of the analytic gradient).
#include <functional>
#include <string>
#include <vector>

namespace twosec {

struct BoxEval {
    double f = 0;
    std::vector<double> g;
    // per-variable magnitude used to turn gradient entries into relative residuals
    std::vector<double> scale;
    bool ok = true;
};

struct BoxProblem {
    std::vector<double> lo, hi;
    std::function<BoxEval(const std::vector<double>&)> eval;
};

struct BoxOptions {
    int max_iter = 4000;
    int memory = 20;
    double qn_tol = 1e-7;      // hand over to the Newton polish below this
    double tol = 1e-10;        // target relative stationarity
    int max_newton = 40;
};

struct BoxResult {
    std::vector<double> x;
    BoxEval at;
    double stationarity = 0;
    int iterations = 0;
    int evaluations = 0;
    bool monotone = true;  // incumbent never got worse
    std::string message;
};

// max over variables of |projected gradient| / scale
double relative_stationarity(const std::vector<double>& x, const BoxEval& e, const std::vector<double>& lo,
                             const std::vector<double>& hi);

BoxResult minimize_box(const BoxProblem& p, std::vector<double> x0, const BoxOptions& opt);

}  // namespace twosec
