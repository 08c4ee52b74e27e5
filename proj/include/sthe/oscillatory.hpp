#pragma once

#include <functional>

#include "sthe/quadrature.hpp"

namespace sthe {

// Integrals of the form int_p^q Q(u) exp(i lambda s(u)) du with the phase
// s(u) = u / (u^2 + 1), stationary at u = +-1.

using ZFun = std::function<cplx(cplx)>;

inline double phase_s(double u) { return u / (u * u + 1.0); }

// Panels split at the stationary points and at every 2 pi of phase, each
// integrated by adaptive Gauss-Kronrod. Works for any bounded amplitude.
QuadResult osc_panels(const CFun& amp, double lambda, double p, double q, double tol);

// Steepest-descent deformation with Gauss-Laguerre (endpoint paths) and
// Gauss-Hermite (paths through the saddles) rules. amp must be analytic off
// u = +-i. The error estimate compares 32- and 48-node rules.
QuadResult osc_nsd(const ZFun& amp, double lambda, double p, double q, double tol);

// Chooses NSD for analytic amplitudes at large |lambda| and falls back to the
// panel method whenever the NSD error estimate misses tol.
QuadResult osc_integral(const ZFun& amp, bool analytic, double lambda, double p, double q, double tol);

// Number of 2 pi phase cycles over [p, q].
double phase_cycles(double lambda, double p, double q);

}  // namespace sthe
