#pragma once

#include <utility>

#include "sthe/testfns.hpp"

namespace sthe {

// A = 1/(T y c^2) - 1
double coset_A(double c, double T, double y);

// y * sum over reps with c <= 1/sqrt(Ty) of e(-m d/c) int_{-sqrt B}^{sqrt B} hhat_0(theta(u)) e(m y u) du
QuadResult main_term(const TestFunctionSpec& spec, long m, double y, double tol = 1e-9);

// e(-m d/c) * int_R f(sigma^{-1} gamma (x + iy, 0)) e(m y u) du in the variable
// u = (x + d/c)/y, i.e. without the factor y.
QuadResult exact_coset_integral(const TestFunctionSpec& spec, const DoubleCosetRep& rep, long m, double y,
                                double tol = 1e-9);

// I(T, j) = int_{-sqrt A}^{sqrt A} hhat(j, theta(u)) e(m y u) e^{i T p(u)} du,
// p(u) = 2 pi j (A + 1) u/(u^2 + 1), with the sharp A of the rep.
QuadResult stationary_phase_I(const TestFunctionSpec& spec, const DoubleCosetRep& rep, int j, long m, double y,
                              double tol = 1e-9);

// Fourier coefficient int_0^1 phi(x + iy, 0) e(m x) dx assembled from the
// identity coset and the double-coset sum.
QuadResult expansion_fourier_integral(const TestFunctionSpec& spec, long m, double y, double tol = 1e-9);

// (T int_0^1 phi_{T,eta} e(mx), B1 int_0^1 phi0_{eta~}(x + i (T/B1) y) e(mx)), both
// lifted from the x-averaged profile.
std::pair<cplx, cplx> renormalized_pair(const TestFunctionSpec& spec, long m, double y, double B1,
                                        double eta_tilde, double tol = 1e-9, double delta = 0.1);

struct AverageGap {
    cplx full;      // int_alpha^beta phi_{T,eta}, full profile
    cplx averaged;  // int_alpha^beta varphi_{T,eta~}, x-averaged profile
    double gap;
};
AverageGap profile_vs_average_gap(const TestFunctionSpec& spec, double alpha, double beta, double y, double eta,
                                  double eta_tilde, double tol = 1e-9, double delta = 0.1);

}  // namespace sthe
