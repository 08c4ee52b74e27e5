#include "sthe/testfns.hpp"

#include <algorithm>
#include <vector>

#include "sthe/oscillatory.hpp"

namespace sthe {

void TestFunctionSpec::validate() const {
    model.check_cusp(cusp);
    if (!(B1 > model.B0)) throw Error("precondition", "B1 > B0 violated");
    if (variant != Variant::Renormalized && !(T >= B1)) throw Error("precondition", "T >= B1 violated");
    (void)indicator();  // enforces the eta bound
    if (!(lower_height() > model.B0))
        throw Error("precondition", "indicator support must lie above B0 (at most one firing orbit image)");
}

Profile TestFunctionSpec::lifted_profile() const {
    return variant == Variant::Full ? profile : profile.averaged();
}

cplx eval_f(const TestFunctionSpec& spec, const TangentPoint& p) {
    const double w = spec.indicator()(spec.scale() * p.y);
    if (w == 0.0) return 0.0;
    if (spec.variant == Variant::Full) return w * spec.profile.eval(p.x, p.theta);
    return w * spec.profile.x_average(p.theta);
}

cplx eval_phi(const TestFunctionSpec& spec, const TangentPoint& p) {
    // Heights above B0 are reached by at most one orbit image, the reduced one.
    Reduction r = reduce_to_cusp(spec.model, spec.cusp, p);
    if (r.image.y <= spec.lower_height()) return 0.0;
    return eval_f(spec, r.image);
}

cplx e_frac(i64 num, i64 den) { return e(double(mod_pos(num, den)) / double(den)); }

cplx exp_segment(long k, double alpha, double beta) {
    if (k == 0) return beta - alpha;
    return (e(double(k) * beta) - e(double(k) * alpha)) / cplx(0.0, kTwoPi * double(k));
}

CosetWindow coset_window(const TestFunctionSpec& spec, double c_real, double y) {
    CosetWindow w;
    const double c2y = c_real * c_real * y;
    w.A_lo = 1.0 / (spec.lower_height() * c2y) - 1.0;
    w.A_hi = 1.0 / (spec.upper_height() * c2y) - 1.0;
    return w;
}

namespace {

double theta_of(double u) { return -2.0 * std::atan2(1.0, u); }

}  // namespace

QuadResult coset_mode_integral(const TestFunctionSpec& spec, const Profile& prof, int j, double c_real, double y,
                               long m, double p, double q, double tol) {
    QuadResult out;
    if (!prof.has_mode(j)) return out;
    const CosetWindow win = coset_window(spec, c_real, y);
    if (win.A_lo <= 0.0) return out;
    const double s_lo = std::sqrt(win.A_lo);
    p = std::max(p, -s_lo);
    q = std::min(q, s_lo);
    if (!(p < q)) return out;

    const double lambda = kTwoPi * double(j) / (c_real * c_real * y);
    const double mu = kTwoPi * double(m) * y;
    const bool analytic = prof.analytic();
    const cplx I(0.0, 1.0);
    ZFun amp = [&](cplx u) -> cplx {
        const cplx lin = std::exp(I * mu * u);
        if (analytic) return prof.mode_along(j, u) * lin;
        return prof.mode(j, theta_of(u.real())) * lin;
    };

    const double s_hi = win.A_hi > 0.0 ? std::sqrt(win.A_hi) : 0.0;
    const double pl = std::max(p, -s_hi), ql = std::min(q, s_hi);
    const bool bands = s_hi < s_lo;
    if (pl < ql) {
        QuadResult r = osc_integral(amp, analytic, lambda, pl, ql, bands ? 0.5 * tol : tol);
        out.value += r.value;
        out.error += r.error;
        out.converged = out.converged && r.converged;
        out.intervals += r.intervals;
    }
    if (bands) {
        const SmoothedIndicator ind = spec.indicator();
        const double scale = spec.scale();
        const double c2y = c_real * c_real * y;
        auto banded = [&](double u) {
            const double yimg = 1.0 / (c2y * (u * u + 1.0));
            return ind(scale * yimg) * amp(cplx(u, 0.0));
        };
        for (auto [a, b] : {std::pair{p, std::min(q, -s_hi)}, std::pair{std::max(p, s_hi), q}}) {
            if (!(a < b)) continue;
            QuadResult r = osc_panels(banded, lambda, a, b, 0.25 * tol);
            out.value += r.value;
            out.error += r.error;
            out.converged = out.converged && r.converged;
            out.intervals += r.intervals;
        }
    }
    return out;
}

QuadResult interval_decomposition_integral(const TestFunctionSpec& spec, double alpha, double beta, double y,
                                           long m, double tol) {
    spec.validate();
    if (!(alpha < beta)) throw Error("domain", "segment needs alpha < beta");
    if (!(y > 0.0) || !(tol > 0.0)) throw Error("domain", "need y > 0 and tol > 0");
    const Profile prof = spec.lifted_profile();
    const std::vector<int> modes = prof.mode_indices();

    QuadResult out;
    if (spec.cusp == 1) {
        const double w = spec.indicator()(spec.scale() * y);
        if (w != 0.0)
            for (int j : modes) out.value += w * prof.mode(j, 0.0) * exp_segment(m - j, alpha, beta);
    }

    struct Piece {
        DoubleCosetRep rep;
        double p, q;
    };
    std::vector<Piece> work;
    const double c_max = 1.0 / std::sqrt(spec.lower_height() * y);
    for_each_double_coset(spec.model, spec.cusp, c_max, [&](const DoubleCosetRep& rep) {
        const CosetWindow win = coset_window(spec, rep.c_real(), y);
        if (win.A_lo <= 0.0) return;
        const double R = y * std::sqrt(win.A_lo);
        const double shift = rep.d_over_c();
        const i64 k0 = static_cast<i64>(std::ceil(-shift - beta - R));
        const i64 k1 = static_cast<i64>(std::floor(-shift - alpha + R));
        for (i64 k = k0; k <= k1; ++k) {
            const double xc = -shift - double(k);
            const double p = (std::max(alpha, xc - R) - xc) / y;
            const double q = (std::min(beta, xc + R) - xc) / y;
            if (p < q) work.push_back({rep, p, q});
        }
    });

    const double tol_each = tol / (y * double(std::max<size_t>(1, work.size() * modes.size())));
    for (const Piece& pc : work) {
        for (int j : modes) {
            QuadResult r = coset_mode_integral(spec, prof, j, pc.rep.c_real(), y, m, pc.p, pc.q, tol_each);
            if (!r.converged)
                throw Error("tolerance-not-met",
                            "coset integral error estimate " + sci(r.error) + " exceeds its share " + sci(tol_each));
            const i64 num = -(add_checked(mul_checked(m, pc.rep.d), mul_checked(j, pc.rep.a)));
            out.value += y * e_frac(num, pc.rep.c) * r.value;
            out.error += y * r.error;
            out.intervals += r.intervals;
        }
    }
    return out;
}

namespace {

struct Row {
    double c_real;
    double shift;  // d / c
};

// Bottom rows (c, d) of sigma_j^{-1} gamma with c > 0 whose x-window
// |x + d/c| <= radius(c) meets [alpha, beta]. Plain gcd loops.
template <class Radius>
std::vector<Row> bottom_rows(const LatticeModel& model, int cusp, double c_max, double alpha, double beta,
                             Radius radius) {
    std::vector<Row> rows;
    auto window = [&](double cr, double den, auto&& emit) {
        const double R = radius(cr);
        const i64 lo = static_cast<i64>(std::floor(-(beta + R) * den)) - 1;
        const i64 hi = static_cast<i64>(std::ceil(-(alpha - R) * den)) + 1;
        for (i64 d = lo; d <= hi; ++d) emit(d);
    };
    if (model.kind == ModelKind::Modular || cusp == 1) {
        const i64 step = model.kind == ModelKind::Modular ? 1 : model.level;
        for (i64 c = step; double(c) <= c_max; c += step) {
            window(double(c), double(c), [&](i64 d) {
                if (gcd64(c, d) == 1) rows.push_back({double(c), double(d) / double(c)});
            });
        }
    } else {
        const double rn = std::sqrt(double(model.level));
        for (i64 a1 = 1; rn * double(a1) <= c_max; ++a1) {
            if (a1 % model.level == 0) continue;
            window(rn * double(a1), double(a1), [&](i64 b1) {
                if (gcd64(a1, b1) == 1) rows.push_back({rn * double(a1), double(b1) / double(a1)});
            });
        }
    }
    return rows;
}

}  // namespace

QuadResult direct_horocycle_integral(const TestFunctionSpec& spec, double alpha, double beta, double y, long m,
                                     double tol) {
    spec.validate();
    if (!(alpha < beta)) throw Error("domain", "segment needs alpha < beta");
    if (!(y > 0.0) || !(tol > 0.0)) throw Error("domain", "need y > 0 and tol > 0");

    // y / |c z + d|^2 >= L  <=>  |x + d/c| <= sqrt(y / L - c^2 y^2) / c
    auto half_width = [&](double cr, double L) {
        const double rad = y / L - cr * cr * y * y;
        return rad > 0.0 ? std::sqrt(rad) / cr : -1.0;
    };
    const double Llo = spec.lower_height(), Lhi = spec.upper_height();
    const double c_max = 1.0 / std::sqrt(Llo * y);
    std::vector<double> cuts{alpha, beta};
    for (const Row& r : bottom_rows(spec.model, spec.cusp, c_max, alpha, beta,
                                    [&](double cr) { return std::max(0.0, half_width(cr, Llo)); })) {
        for (double L : {Llo, Lhi}) {
            const double w = half_width(r.c_real, L);
            if (w < 0.0) continue;
            for (double x : {-r.shift - w, -r.shift + w})
                if (x > alpha && x < beta) cuts.push_back(x);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto f = [&](double x) { return eval_phi(spec, TangentPoint(x, y, 0.0)) * e(double(m) * x); };
    QuadResult out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double share = tol * (b - a) / (beta - alpha);
        QuadResult r = gk_adaptive(f, a, b, share, 20000);
        if (!r.converged)
            throw Error("tolerance-not-met", "direct quadrature on [" + std::to_string(a) + ", " +
                                                 std::to_string(b) + "] achieved " + sci(r.error));
        out.value += r.value;
        out.error += r.error;
        out.intervals += r.intervals;
    }
    return out;
}

}  // namespace sthe
