#include "sthe/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <queue>

namespace sthe {

namespace {

constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    cplx val;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

}  // namespace

QuadResult gk15(const CFun& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx rk = fc * wgk[7];
    cplx rg = fc * wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        cplx s = f(c - dx) + f(c + dx);
        rk += wgk[j] * s;
        if (j % 2 == 1) rg += wg[j / 2] * s;
    }
    QuadResult r;
    r.value = rk * h;
    r.error = std::abs((rk - rg) * h);
    r.intervals = 1;
    return r;
}

QuadResult gk_adaptive(const CFun& f, double a, double b, double tol, int max_intervals) {
    QuadResult out;
    if (a == b) return out;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::priority_queue<Panel> heap;
    QuadResult first = gk15(f, a, b);
    heap.push({a, b, first.value, first.error});
    cplx total = first.value;
    double err = first.error;
    int n = 1;
    while (err > tol && n < max_intervals) {
        Panel p = heap.top();
        double m = 0.5 * (p.a + p.b);
        if (m <= p.a || m >= p.b) break;
        heap.pop();
        QuadResult l = gk15(f, p.a, m);
        QuadResult r = gk15(f, m, p.b);
        total += l.value + r.value - p.val;
        err += l.error + r.error - p.err;
        heap.push({p.a, m, l.value, l.error});
        heap.push({m, p.b, r.value, r.error});
        ++n;
    }
    // Re-sum from the panels so rounding in the running totals does not leak.
    cplx sum = 0.0;
    double esum = 0.0;
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    for (const auto& p : all) {
        sum += p.val;
        esum += p.err;
    }
    out.value = sign * sum;
    out.error = esum;
    out.intervals = n;
    out.converged = esum <= tol;
    return out;
}

double gk_adaptive_real(const RFun& f, double a, double b, double tol, int max_intervals) {
    return gk_adaptive([&](double x) { return cplx(f(x), 0.0); }, a, b, tol, max_intervals).value.real();
}

QuadResult gk_checked(const CFun& f, double a, double b, double tol, int max_intervals) {
    QuadResult r = gk_adaptive(f, a, b, tol, max_intervals);
    if (!r.converged) {
        throw Error("tolerance-not-met", "adaptive quadrature on [" + std::to_string(a) + ", " +
                                             std::to_string(b) + "] reached error estimate " +
                                             sci(r.error) + " > " + sci(tol));
    }
    return r;
}

namespace {

GaussRule make_laguerre(int n) {
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0)
            z = 3.0 / (1.0 + 2.4 * n);
        else if (i == 1)
            z += 15.0 / (1.0 + 2.5 * n);
        else {
            double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - g.x[i - 2]);
        }
        double p1 = 0, p2 = 0, pp = 0;
        for (int it = 0; it < 100; ++it) {
            p1 = 1.0;
            p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1 - z) * p2 - j * p3) / (j + 1);
            }
            pp = (n * p1 - n * p2) / z;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15 * std::abs(z)) break;
        }
        g.x[i] = z;
        // w = x / ((n+1) L_{n+1}(x))^2 expressed through L_n' to stay stable.
        g.w[i] = 1.0 / (z * pp * pp);
    }
    return g;
}

GaussRule make_hermite(int n) {
    GaussRule g;
    g.x.resize(n);
    g.w.resize(n);
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1) - 1.85575 * std::pow(2.0 * n + 1, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(n, 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * g.x[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * g.x[1];
        else
            z = 2.0 * z - g.x[i - 2];
        double p1 = 0, p2 = 0, pp = 0;
        for (int it = 0; it < 100; ++it) {
            p1 = pim4;
            p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(double(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-15) break;
        }
        g.x[i] = z;
        g.x[n - 1 - i] = -z;
        g.w[i] = 2.0 / (pp * pp);
        g.w[n - 1 - i] = g.w[i];
    }
    return g;
}

template <class Maker>
const GaussRule& cached(std::map<int, GaussRule>& cache, std::mutex& mu, int n, Maker make) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make(n)).first;
    return it->second;
}

}  // namespace

const GaussRule& gauss_laguerre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    return cached(cache, mu, n, make_laguerre);
}

const GaussRule& gauss_hermite(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    return cached(cache, mu, n, make_hermite);
}

}  // namespace sthe
