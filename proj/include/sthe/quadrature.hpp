#pragma once

#include <functional>
#include <vector>

#include "sthe/common.hpp"

namespace sthe {

struct QuadResult {
    cplx value{0.0, 0.0};
    double error = 0.0;
    int intervals = 0;
    bool converged = true;
};

using CFun = std::function<cplx(double)>;
using RFun = std::function<double(double)>;

// Adaptive Gauss-Kronrod (7/15) with absolute tolerance. Bisects the interval
// with the largest error estimate until the total estimate is below tol or the
// subdivision budget runs out; converged is false in the latter case.
QuadResult gk_adaptive(const CFun& f, double a, double b, double tol, int max_intervals = 2000);

double gk_adaptive_real(const RFun& f, double a, double b, double tol, int max_intervals = 2000);

// Throws Error("tolerance-not-met") when the adaptive rule does not converge.
QuadResult gk_checked(const CFun& f, double a, double b, double tol, int max_intervals = 2000);

// Single 15-point Kronrod panel with its embedded Gauss estimate.
QuadResult gk15(const CFun& f, double a, double b);

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Nodes and weights for weight exp(-t) on [0, inf).
const GaussRule& gauss_laguerre(int n);
// Nodes and weights for weight exp(-v^2) on (-inf, inf).
const GaussRule& gauss_hermite(int n);

}  // namespace sthe
