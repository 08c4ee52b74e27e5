#pragma once

#include <string>

#include "sthe/expansion.hpp"

namespace sthe {

// (1/mu) int_0^{2pi} int_0^1 h dx dtheta
cplx limit_value(const LatticeModel& model, const Profile& profile);

// <phi> = (T/mu) int int int 1_{[T,inf),eta}(y) h dx dtheta dy / y^2
cplx mean_value_Q(double T, double eta, const LatticeModel& model, const Profile& profile, double B1 = 2.0);

struct EnvelopeInputs {
    double alpha = 0.0;
    double beta = 1.0;
    double T = 10.0;
    double y = 1e-3;
    double B0 = 1.0;
    double B1 = 2.0;
    double s1 = 0.5;
    double s1p = 0.5;
    double eta = 0.25;
    double delta = 0.1;

    void validate() const;
};

// T^4 |eta|^{-4} [ (Ty/(L^2 B1))^{1/2} log^2(L B1/(Ty)) + (Ty/(L^2 B1))^{1-s1'} + (Ty/(L B1))^{1-s1} ],
// L = beta - alpha, implied constant 1.
double error_envelope_E(const EnvelopeInputs& in);

enum class RateKind { Qualitative, Effective };  // qualitative and effective segment-length rates
RateKind parse_rate_kind(const std::string& s);

// Smallest admissible beta - alpha.
double admissible_rate(RateKind th, double T, double y, double B1, double delta);

enum class Method { Oracle, Interval, Expansion };
Method parse_method(const std::string& s);
std::string method_name(Method m);

// T/(beta - alpha) * int_alpha^beta phi(x + iy, 0) dx
QuadResult sthe_lhs(const TestFunctionSpec& spec, double alpha, double beta, double y, Method method,
                    double tol = 1e-9);

}  // namespace sthe
