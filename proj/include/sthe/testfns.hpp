#pragma once

#include "sthe/lattice.hpp"
#include "sthe/profiles.hpp"
#include "sthe/quadrature.hpp"

namespace sthe {

// Full: f = 1_{[T,inf),eta}(y) h(x, theta)
// Averaged: g = 1_{[T,inf),eta}(y) hbar(theta)
// Renormalized: f0 = 1_{[T,inf),eta}((T/B1) y) hbar(theta)
enum class Variant { Full, Averaged, Renormalized };

struct TestFunctionSpec {
    double T = 2.0;
    double eta = 0.0;
    double B1 = 2.0;
    Profile profile = Profile::constant();
    int cusp = 1;
    LatticeModel model = LatticeModel::modular();
    Variant variant = Variant::Full;

    void validate() const;
    double scale() const { return variant == Variant::Renormalized ? T / B1 : 1.0; }
    SmoothedIndicator indicator() const { return SmoothedIndicator(T, eta, model.B0, B1); }
    // Image heights at or below lower_height() contribute nothing; at or above
    // upper_height() the indicator equals 1.
    double lower_height() const { return indicator().lower() / scale(); }
    double upper_height() const { return indicator().upper() / scale(); }
    // The profile actually lifted: h for Full, hbar otherwise.
    Profile lifted_profile() const;
};

cplx eval_f(const TestFunctionSpec& spec, const TangentPoint& p);
cplx eval_phi(const TestFunctionSpec& spec, const TangentPoint& p);

// Oracle: adaptive quadrature of x -> phi(x + iy, 0) e(m x), split at the
// closed-form firing breakpoints. Never touches the coset expansion.
QuadResult direct_horocycle_integral(const TestFunctionSpec& spec, double alpha, double beta, double y, long m,
                                     double tol = 1e-9);

// Semi-analytic: enumerate firing (c, d) translates and integrate the
// profile along each firing interval in the variable u = (x + d/c)/y.
QuadResult interval_decomposition_integral(const TestFunctionSpec& spec, double alpha, double beta, double y,
                                           long m, double tol = 1e-9);

// ---- shared per-coset machinery ----

// Support and plateau of u -> indicator(scale * y'(u)) for a coset with
// lower-left entry c_real: |u| <= sqrt(A_lo) fires, |u| <= sqrt(A_hi) is the plateau.
struct CosetWindow {
    double A_lo = -1.0;
    double A_hi = -1.0;
};
CosetWindow coset_window(const TestFunctionSpec& spec, double c_real, double y);

// int_p^q ind(scale y'(u)) hhat_j(theta(u)) e(m y u) exp(i Lambda_j s(u)) du with
// Lambda_j = 2 pi j / (c^2 y), theta(u) = -2 arg(u + i), y'(u) = 1/(c^2 y (u^2+1)).
// p, q are clipped to the support.
QuadResult coset_mode_integral(const TestFunctionSpec& spec, const Profile& prof, int j, double c_real, double y,
                               long m, double p, double q, double tol);

// e(num/den) with the fraction reduced exactly first.
cplx e_frac(i64 num, i64 den);

// int_alpha^beta e(k x) dx
cplx exp_segment(long k, double alpha, double beta);

}  // namespace sthe
