#include "sthe/oscillatory.hpp"

#include <algorithm>
#include <vector>

namespace sthe {

namespace {

const cplx I(0.0, 1.0);

// s(u) - s(v) without cancellation
double ds(double u, double v) { return (u - v) * (1.0 - u * v) / ((u * u + 1.0) * (v * v + 1.0)); }

// Real solution of s(u) = w on the branch |u| <= 1 (small) or |u| >= 1 (big).
double invert_s(double w, bool big) {
    const double r = std::sqrt(std::max(0.0, (1.0 - 2.0 * w) * (1.0 + 2.0 * w)));
    if (big) return (1.0 + r) / (2.0 * w);
    return 2.0 * w / (1.0 + r);
}

cplx sprime_c(cplx u) {
    const cplx q = u * u + 1.0;
    return (1.0 - u * u) / (q * q);
}

// monotone pieces of s inside [p, q]
std::vector<std::pair<double, double>> pieces(double p, double q) {
    std::vector<double> cuts{p};
    for (double c : {-1.0, 1.0})
        if (c > p && c < q) cuts.push_back(c);
    cuts.push_back(q);
    std::vector<std::pair<double, double>> out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) out.emplace_back(cuts[i], cuts[i + 1]);
    return out;
}

}  // namespace

double phase_cycles(double lambda, double p, double q) {
    double v = 0.0;
    for (auto [a, b] : pieces(std::min(p, q), std::max(p, q))) v += std::abs(ds(b, a));
    return std::abs(lambda) * v / kTwoPi;
}

QuadResult osc_panels(const CFun& amp, double lambda, double p, double q, double tol) {
    QuadResult out;
    if (p == q) return out;
    double sign = 1.0;
    if (q < p) {
        std::swap(p, q);
        sign = -1.0;
    }
    const auto parts = pieces(p, q);
    std::vector<long> counts;
    double npan_total = 0.0;
    for (auto [a, b] : parts) {
        const double cyc = std::abs(lambda * ds(b, a)) / kTwoPi;
        if (cyc > 5.0e7) throw Error("tolerance-not-met", "panel count exceeds budget");
        counts.push_back(std::max(1L, static_cast<long>(std::ceil(cyc))));
        npan_total += double(counts.back());
    }
    if (npan_total > 5.0e7) throw Error("tolerance-not-met", "panel count exceeds budget");
    const double tol_panel = tol / npan_total;

    cplx sum = 0.0;
    double err = 0.0;
    for (size_t ip = 0; ip < parts.size(); ++ip) {
        const auto [a, b] = parts[ip];
        const double sa = phase_s(a);
        const double dsab = ds(b, a);
        const long n = counts[ip];
        const bool big = (0.5 * (a + b)) * (0.5 * (a + b)) > 1.0;
        double left = a;
        for (long k = 1; k <= n; ++k) {
            double right;
            if (k == n)
                right = b;
            else
                right = invert_s(sa + dsab * double(k) / double(n), big);
            right = std::clamp(right, left, b);
            if (right > left) {
                const cplx base = std::polar(1.0, lambda * phase_s(left));
                auto f = [&](double u) { return amp(u) * std::polar(1.0, lambda * ds(u, left)); };
                QuadResult r = gk15(f, left, right);
                if (r.error > tol_panel) r = gk_adaptive(f, left, right, tol_panel, 200);
                sum += base * r.value;
                err += r.error;
                out.intervals += r.intervals;
                if (!r.converged) out.converged = false;
            }
            left = right;
        }
    }
    out.value = sign * sum;
    out.error = err;
    if (err > tol) out.converged = false;
    return out;
}

namespace {

// Integral from real p along the steepest-descent path to its end at +-i (lambda > 0).
cplx endpoint_path(const ZFun& amp, double lambda, double p, int n) {
    const GaussRule& g = gauss_laguerre(n);
    const bool big = p * p > 1.0;
    const double sp = phase_s(p);
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const cplx w(sp, g.x[k] / lambda);
        const cplx r = std::sqrt((1.0 - 2.0 * w) * (1.0 + 2.0 * w));
        const cplx u = big ? (1.0 + r) / (2.0 * w) : (2.0 * w) / (1.0 + r);
        acc += g.w[k] * amp(u) * (I / lambda) / sprime_c(u);
    }
    return std::polar(1.0, lambda * sp) * acc;
}

// Integral over the full steepest-descent path through the saddle sigma = +-1,
// oriented from the end of the left branch to the end of the right branch.
cplx saddle_path(const ZFun& amp, double lambda, double sigma, int n) {
    const GaussRule& g = gauss_hermite(n);
    const double sl = std::sqrt(lambda);
    const cplx dir = sigma > 0 ? std::polar(1.0, -kPi / 4) : std::polar(1.0, kPi / 4);
    const double pm = sigma > 0 ? 1.0 : -1.0;
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double v = g.x[k];
        const cplx kap = I * (v * v / lambda);
        const cplx kap1 = I * (2.0 * v / lambda);
        const cplx R = std::sqrt(1.0 + pm * kap);
        const cplx R1 = pm * kap1 / (2.0 * R);
        const cplx N = -kap + dir * v * R / sl;
        const cplx N1 = -kap1 + dir * (R + v * R1) / sl;
        const cplx D = 1.0 + 2.0 * pm * kap;
        const cplx D1 = 2.0 * pm * kap1;
        const cplx delta = 2.0 * N / D;
        const cplx ddelta = 2.0 * (N1 * D - N * D1) / (D * D);
        acc += g.w[k] * amp(sigma + delta) * ddelta;
    }
    return std::polar(1.0, lambda * phase_s(sigma)) * acc;
}

cplx nsd_core(const ZFun& amp, double lambda, double p, double q, int n) {
    cplx v = endpoint_path(amp, lambda, p, n) - endpoint_path(amp, lambda, q, n);
    for (double sg : {-1.0, 1.0})
        if (sg > p && sg < q) v += saddle_path(amp, lambda, sg, n);
    return v;
}

}  // namespace

QuadResult osc_nsd(const ZFun& amp_in, double lambda_in, double p_in, double q_in, double tol) {
    QuadResult out;
    if (p_in == q_in) return out;
    double sign = 1.0;
    double p = p_in, q = q_in;
    if (q < p) {
        std::swap(p, q);
        sign = -1.0;
    }
    ZFun amp = amp_in;
    double lambda = lambda_in;
    if (lambda < 0) {
        // u -> -u turns e^{i lambda s(u)} into e^{i |lambda| s(u)}
        amp = [amp_in](cplx u) { return amp_in(-u); };
        lambda = -lambda;
        std::tie(p, q) = std::make_pair(-q, -p);
    }
    auto real_amp = [&](double u) { return amp(cplx(u, 0.0)); };

    if (phase_cycles(lambda, p, q) < 10.0) {
        QuadResult r = osc_panels(real_amp, lambda, p, q, tol);
        r.value *= sign;
        return r;
    }

    const double r0 = std::min(0.4, 4.0 / std::sqrt(lambda));
    double p2 = p, q2 = q;
    cplx corr = 0.0;
    double corr_err = 0.0;
    for (double sg : {-1.0, 1.0}) {
        if (std::abs(p - sg) < r0) p2 = sg - r0;
        if (std::abs(q - sg) < r0) q2 = sg + r0;
    }
    if (p2 >= q2) {
        QuadResult r = osc_panels(real_amp, lambda, p, q, tol);
        r.value *= sign;
        return r;
    }
    if (p2 != p) {
        QuadResult r = osc_panels(real_amp, lambda, p2, p, 0.25 * tol);
        corr -= r.value;
        corr_err += r.error;
    }
    if (q2 != q) {
        QuadResult r = osc_panels(real_amp, lambda, q, q2, 0.25 * tol);
        corr -= r.value;
        corr_err += r.error;
    }
    const cplx lo = nsd_core(amp, lambda, p2, q2, 32);
    const cplx hi = nsd_core(amp, lambda, p2, q2, 48);
    out.value = sign * (hi + corr);
    out.error = std::abs(hi - lo) + corr_err;
    out.converged = out.error <= tol;
    out.intervals = 1;
    return out;
}

QuadResult osc_integral(const ZFun& amp, bool analytic, double lambda, double p, double q, double tol) {
    auto real_amp = [&](double u) { return amp(cplx(u, 0.0)); };
    if (analytic && std::abs(lambda) >= 50.0 && phase_cycles(lambda, p, q) >= 10.0) {
        QuadResult r = osc_nsd(amp, lambda, p, q, tol);
        if (r.converged) return r;
    }
    return osc_panels(real_amp, lambda, p, q, tol);
}

}  // namespace sthe
