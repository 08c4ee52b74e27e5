#include "sthe/expansion.hpp"

#include <map>
#include <vector>

namespace sthe {

double coset_A(double c, double T, double y) {
    if (!(c > 0.0) || !(T > 0.0) || !(y > 0.0)) throw Error("domain", "coset_A needs c, T, y > 0");
    return 1.0 / (T * y * c * c) - 1.0;
}

namespace {

void require_height(const TestFunctionSpec& spec, double y) {
    if (!(y > 0.0)) throw Error("domain", "need y > 0");
    if (spec.variant != Variant::Renormalized && !(spec.T - eta_bound(spec.model.B0, spec.B1) > y))
        throw Error("precondition", "T - min((B1-B0)/2, 1/4) > y violated");
}

TestFunctionSpec sharp(const TestFunctionSpec& spec) {
    TestFunctionSpec s = spec;
    s.eta = 0.0;
    return s;
}

// Level that image heights must reach in the sharp case.
double sharp_level(const TestFunctionSpec& spec) { return spec.T / spec.scale(); }

}  // namespace

QuadResult main_term(const TestFunctionSpec& spec, long m, double y, double tol) {
    spec.validate();
    require_height(spec, y);
    const TestFunctionSpec sh = sharp(spec);
    const Profile prof = spec.lifted_profile();
    const double L = sharp_level(spec);
    const double c_max = 1.0 / std::sqrt(L * y);
    std::vector<DoubleCosetRep> reps = double_cosets(spec.model, spec.cusp, c_max);

    QuadResult out;
    if (reps.empty()) return out;
    const double tol_each = tol / (y * double(reps.size()));
    size_t i = 0;
    while (i < reps.size()) {
        const i64 c = reps[i].c;
        const double cr = reps[i].c_real();
        if (L * y * cr * cr > 1.0 + 1e-12) throw Error("invariant", "contributing coset with T y c^2 > 1");
        cplx phases = 0.0;
        size_t k = i;
        for (; k < reps.size() && reps[k].c == c; ++k) phases += e_frac(-mul_checked(m, reps[k].d), c);
        QuadResult J = coset_mode_integral(sh, prof, 0, cr, y, m, -1e300, 1e300, tol_each);
        out.value += y * phases * J.value;
        out.error += y * double(k - i) * J.error;
        out.converged = out.converged && J.converged;
        i = k;
    }
    return out;
}

QuadResult exact_coset_integral(const TestFunctionSpec& spec, const DoubleCosetRep& rep, long m, double y,
                                double tol) {
    spec.validate();
    const Profile prof = spec.lifted_profile();
    const std::vector<int> modes = prof.mode_indices();
    QuadResult out;
    for (int j : modes) {
        QuadResult J = coset_mode_integral(spec, prof, j, rep.c_real(), y, m, -1e300, 1e300,
                                           tol / double(modes.size()));
        out.value += e_frac(-mul_checked(j, rep.a), rep.c) * J.value;
        out.error += J.error;
        out.converged = out.converged && J.converged;
    }
    out.value *= e_frac(-mul_checked(m, rep.d), rep.c);
    return out;
}

QuadResult stationary_phase_I(const TestFunctionSpec& spec, const DoubleCosetRep& rep, int j, long m, double y,
                              double tol) {
    spec.validate();
    if (j == 0) throw Error("domain", "stationary_phase_I needs j != 0");
    const TestFunctionSpec sh = sharp(spec);
    const double A = coset_A(rep.c_real(), sharp_level(spec), y);
    if (A <= 0.0) return {};
    return coset_mode_integral(sh, spec.lifted_profile(), j, rep.c_real(), y, m, -1e300, 1e300, tol);
}

QuadResult expansion_fourier_integral(const TestFunctionSpec& spec, long m, double y, double tol) {
    spec.validate();
    require_height(spec, y);
    const Profile prof = spec.lifted_profile();
    const std::vector<int> modes = prof.mode_indices();

    QuadResult out;
    if (spec.cusp == 1) {
        const double w = spec.indicator()(spec.scale() * y);
        if (w != 0.0) out.value += w * prof.mode(int(m), 0.0);
    }

    const double c_max = 1.0 / std::sqrt(spec.lower_height() * y);
    std::vector<DoubleCosetRep> reps = double_cosets(spec.model, spec.cusp, c_max);
    if (reps.empty()) return out;
    const double tol_each = tol / (y * double(reps.size() * modes.size()));

    size_t i = 0;
    while (i < reps.size()) {
        const i64 c = reps[i].c;
        const double cr = reps[i].c_real();
        size_t k = i;
        while (k < reps.size() && reps[k].c == c) ++k;
        for (int j : modes) {
            QuadResult J = coset_mode_integral(spec, prof, j, cr, y, m, -1e300, 1e300, tol_each);
            if (J.value == 0.0 && J.error == 0.0) continue;
            if (!J.converged)
                throw Error("tolerance-not-met", "mode integral for c = " + std::to_string(c) + " achieved " +
                                                     sci(J.error) + " > " + sci(tol_each) + " (mode " + std::to_string(j) + ")");
            // Kloosterman-type phase sum over the reps sharing this c
            cplx phases = 0.0;
            for (size_t t = i; t < k; ++t) {
                const i64 num = -(add_checked(mul_checked(m, reps[t].d), mul_checked(j, reps[t].a)));
                phases += e_frac(num, c);
            }
            out.value += y * phases * J.value;
            out.error += y * double(k - i) * J.error;
        }
        i = k;
    }
    return out;
}

std::pair<cplx, cplx> renormalized_pair(const TestFunctionSpec& spec, long m, double y, double B1,
                                        double eta_tilde, double tol, double delta) {
    const double T = spec.T;
    const double Ty = T * y;
    if (!(Ty > 0.0 && Ty < B1 * B1 - 0.25)) throw Error("precondition", "0 < Ty < B1^2 - 1/4 violated");
    if (!(std::abs(double(m)) <= std::pow(Ty / B1, -0.5 + delta)))
        throw Error("precondition", "|m| <= (Ty/B1)^(-1/2+delta) violated");
    if (!(T - eta_bound(spec.model.B0, B1) > y))
        throw Error("precondition", "T - min((B1-B0)/2, 1/4) > y violated");

    TestFunctionSpec lhs = spec;
    lhs.B1 = B1;
    lhs.variant = Variant::Averaged;
    TestFunctionSpec rhs = lhs;
    rhs.variant = Variant::Renormalized;
    rhs.eta = eta_tilde;
    const cplx a = T * expansion_fourier_integral(lhs, m, y, tol / T).value;
    const cplx b = B1 * expansion_fourier_integral(rhs, m, (T / B1) * y, tol / B1).value;
    return {a, b};
}

AverageGap profile_vs_average_gap(const TestFunctionSpec& spec, double alpha, double beta, double y, double eta,
                                  double eta_tilde, double tol, double delta) {
    if (!(beta - alpha >= std::pow(spec.T, -0.75 + delta)))
        throw Error("precondition", "beta - alpha >= T^(-3/4+delta) violated");
    TestFunctionSpec full = spec;
    full.variant = Variant::Full;
    full.eta = eta;
    TestFunctionSpec avg = spec;
    avg.variant = Variant::Averaged;
    avg.eta = eta_tilde;
    AverageGap g;
    g.full = interval_decomposition_integral(full, alpha, beta, y, 0, 0.5 * tol).value;
    g.averaged = interval_decomposition_integral(avg, alpha, beta, y, 0, 0.5 * tol).value;
    g.gap = std::abs(g.full - g.averaged);
    return g;
}

}  // namespace sthe
