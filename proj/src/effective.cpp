#include "sthe/effective.hpp"

namespace sthe {

cplx limit_value(const LatticeModel& model, const Profile& profile) {
    return profile.theta_integral_mean() / model.covolume;
}

cplx mean_value_Q(double T, double eta, const LatticeModel& model, const Profile& profile, double B1) {
    if (eta == 0.0) return limit_value(model, profile);
    const SmoothedIndicator ind(T, eta, model.B0, B1);
    // int_0^inf ind(y) / y^2 dy = band part + 1/upper
    const double lo = ind.lower(), hi = ind.upper();
    const double band = gk_adaptive_real([&](double y) { return ind(y) / (y * y); }, lo, hi, 1e-15, 4000);
    return T / model.covolume * profile.theta_integral_mean() * (band + 1.0 / hi);
}

void EnvelopeInputs::validate() const {
    const double Ty = T * y;
    if (!(alpha < beta)) throw Error("precondition", "alpha < beta violated");
    if (!(Ty > 0.0 && Ty < 0.75)) throw Error("precondition", "0 < Ty < 3/4 violated");
    if (!(T - eta_bound(B0, B1) > y)) throw Error("precondition", "T - min((B1-B0)/2, 1/4) > y violated");
    if (!(delta > 0.0 && delta <= 0.5)) throw Error("precondition", "0 < delta <= 1/2 violated");
    if (eta == 0.0) throw Error("precondition", "eta != 0 required for the envelope");
    if (std::abs(eta) > eta_bound(B0, B1)) throw Error("precondition", "|eta| <= min((B1-B0)/2, 1/4) violated");
    if (!(0.5 <= s1p && s1p <= s1 && s1 < 1.0)) throw Error("precondition", "1/2 <= s1' <= s1 < 1 violated");
}

double error_envelope_E(const EnvelopeInputs& in) {
    in.validate();
    const double L = in.beta - in.alpha;
    const double Ty = in.T * in.y;
    const double r2 = Ty / (L * L * in.B1);
    const double r1 = Ty / (L * in.B1);
    const double lg = std::log(L * in.B1 / Ty);
    const double bracket = std::sqrt(r2) * lg * lg + std::pow(r2, 1.0 - in.s1p) + std::pow(r1, 1.0 - in.s1);
    return std::pow(in.T, 4) * std::pow(std::abs(in.eta), -4) * bracket;
}

RateKind parse_rate_kind(const std::string& s) {
    if (s == "qualitative") return RateKind::Qualitative;
    if (s == "effective") return RateKind::Effective;
    throw Error("parse", "unknown rate '" + s + "' (use qualitative or effective)");
}

double admissible_rate(RateKind th, double T, double y, double B1, double delta) {
    if (!(T > 0 && y > 0 && B1 > 0 && delta > 0)) throw Error("domain", "admissible_rate needs positive inputs");
    const double r = T * y / B1;
    const double head = th == RateKind::Qualitative ? std::max(std::pow(T, -1.0 / 6.0), std::sqrt(r))
                                                   : std::max(std::pow(T, 4) * std::sqrt(r), std::pow(T, -1.0 / 6.0));
    return head * std::pow(r, -delta);
}

Method parse_method(const std::string& s) {
    if (s == "oracle" || s == "direct") return Method::Oracle;
    if (s == "interval") return Method::Interval;
    if (s == "expansion") return Method::Expansion;
    throw Error("parse", "unknown method '" + s + "'");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Oracle: return "oracle";
        case Method::Interval: return "interval";
        default: return "expansion";
    }
}

QuadResult sthe_lhs(const TestFunctionSpec& spec, double alpha, double beta, double y, Method method, double tol) {
    if (!(alpha < beta)) throw Error("domain", "segment needs alpha < beta");
    const double L = beta - alpha;
    const double scale = spec.T / L;
    QuadResult r;
    switch (method) {
        case Method::Oracle: r = direct_horocycle_integral(spec, alpha, beta, y, 0, tol / scale); break;
        case Method::Interval: r = interval_decomposition_integral(spec, alpha, beta, y, 0, tol / scale); break;
        case Method::Expansion: {
            const double periods = std::round(L);
            if (periods < 1.0 || std::abs(L - periods) > 1e-12)
                throw Error("precondition", "expansion method needs beta - alpha to be a whole number of periods");
            r = expansion_fourier_integral(spec, 0, y, tol / spec.T);
            r.value *= periods;
            r.error *= periods;
            break;
        }
    }
    r.value *= scale;
    r.error *= scale;
    return r;
}

}  // namespace sthe
