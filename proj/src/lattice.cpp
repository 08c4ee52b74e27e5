#include "sthe/lattice.hpp"

#include <limits>

namespace sthe {

i64 mul_checked(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("overflow", "64-bit product overflow");
    return r;
}

i64 add_checked(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("overflow", "64-bit sum overflow");
    return r;
}

i64 gcd64(i64 a, i64 b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

i64 mod_pos(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

namespace {

// returns g = gcd(a, b) >= 0 and x, y with a x + b y = g
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        i64 q = floor_div(a, b);
        i64 t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1;
        x0 = x1;
        x1 = t;
        t = y0 - q * y1;
        y0 = y1;
        y1 = t;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

}  // namespace

i64 inv_mod(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 x, y;
    i64 g = ext_gcd(mod_pos(a, m), m, x, y);
    if (g != 1) throw Error("domain", "no inverse modulo " + std::to_string(m));
    return mod_pos(x, m);
}

GroupElement::GroupElement(i64 a_, i64 b_, i64 c_, i64 d_) : a(a_), b(b_), c(c_), d(d_) {
    i64 det = add_checked(mul_checked(a, d), -mul_checked(b, c));
    if (det != 1) throw Error("domain", "group element must have determinant 1");
    if (c < 0 || (c == 0 && d < 0)) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
    return {add_checked(mul_checked(a, o.a), mul_checked(b, o.c)),
            add_checked(mul_checked(a, o.b), mul_checked(b, o.d)),
            add_checked(mul_checked(c, o.a), mul_checked(d, o.c)),
            add_checked(mul_checked(c, o.b), mul_checked(d, o.d))};
}

GroupElement GroupElement::inverse() const { return {d, -b, -c, a}; }

GroupElement GroupElement::negated() const {
    GroupElement g;
    g.a = -a;
    g.b = -b;
    g.c = -c;
    g.d = -d;
    return g;
}

RealElement RealElement::operator*(const RealElement& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

TangentPoint::TangentPoint(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {
    if (!(y_ > 0.0)) throw Error("domain", "tangent point needs y > 0");
}

namespace {

TangentPoint act(double a, double b, double c, double d, double det, const TangentPoint& p) {
    const double cxd = std::fma(c, p.x, d);
    const double cy = c * p.y;
    const double den = cxd * cxd + cy * cy;
    const double axb = std::fma(a, p.x, b);
    TangentPoint q;
    q.x = (axb * cxd + a * cy * p.y) / den;
    q.y = det * p.y / den;
    q.theta = wrap_angle(p.theta - 2.0 * std::atan2(cy, cxd));
    return q;
}

}  // namespace

TangentPoint moebius_apply(const GroupElement& g, const TangentPoint& p) {
    return act(double(g.a), double(g.b), double(g.c), double(g.d), 1.0, p);
}

TangentPoint moebius_apply(const RealElement& g, const TangentPoint& p) {
    return act(g.a, g.b, g.c, g.d, g.a * g.d - g.b * g.c, p);
}

TangentPoint moebius_apply_proj(i64 a, i64 b, i64 c, i64 d, const TangentPoint& p) {
    const double det = double(a) * double(d) - double(b) * double(c);
    return act(double(a), double(b), double(c), double(d), det, p);
}

LatticeModel LatticeModel::modular() { return {}; }

LatticeModel LatticeModel::gamma0(i64 N, double s1, double s1p) {
    if (N < 2) throw Error("domain", "Gamma0 level must be a prime >= 2");
    for (i64 q = 2; q * q <= N; ++q)
        if (N % q == 0) throw Error("domain", "Gamma0 level must be prime");
    if (!(0.5 <= s1p && s1p <= s1 && s1 < 1.0))
        throw Error("domain", "spectral parameters need 1/2 <= s1' <= s1 < 1");
    LatticeModel m;
    m.kind = ModelKind::Gamma0;
    m.level = N;
    m.covolume = double(N + 1) * 2.0 * kPi * kPi / 3.0;
    m.cusps = 2;
    m.s1 = s1;
    m.s1p = s1p;
    return m;
}

void LatticeModel::check_cusp(int cusp) const {
    if (cusp < 1 || cusp > cusps) throw Error("domain", "cusp index out of range");
}

RealElement LatticeModel::sigma(int cusp) const {
    check_cusp(cusp);
    if (cusp == 1) return {};
    const double r = std::sqrt(double(level));
    return {0.0, -1.0 / r, r, 0.0};
}

double LatticeModel::min_c(int ci, int cj) const {
    check_cusp(ci);
    check_cusp(cj);
    if (kind == ModelKind::Modular) return 1.0;
    if (ci == cj) return double(level);
    return std::sqrt(double(level));
}

DoubleCosetRep DoubleCosetRep::translated(i64 k) const {
    DoubleCosetRep r = *this;
    r.b = add_checked(b, mul_checked(k, a));
    r.d = add_checked(d, mul_checked(k, c));
    return r;
}

namespace {

constexpr long kIterationCap = 1000000;

struct Modred {
    GroupElement g;
    TangentPoint w;
};

Modred reduce_psl2z(const TangentPoint& p) {
    GroupElement g;
    TangentPoint w = p;
    for (long it = 0; it < kIterationCap; ++it) {
        const double n = std::floor(w.x + 0.5);
        if (std::abs(n) > 9.0e15) throw Error("overflow", "translation too large in reduction");
        if (n != 0.0) {
            g = GroupElement::translation(-static_cast<i64>(n)) * g;
            w = moebius_apply(g, p);
        }
        if (w.x * w.x + w.y * w.y < 1.0) {
            g = GroupElement::inversion() * g;
            w = moebius_apply(g, p);
            continue;
        }
        return {g, w};
    }
    throw Error("iteration-limit-exceeded", "reduction did not stabilize within 1e6 steps");
}

// Smallest |u w + v|^2 over coprime (u, v) with u >= 0 (v = 1 when u = 0) that
// satisfy allowed(u, v).
template <class Pred>
std::pair<i64, i64> best_row(const TangentPoint& w, i64 step, Pred allowed) {
    double best = std::numeric_limits<double>::infinity();
    std::pair<i64, i64> arg{0, 1};
    if (allowed(0, 1)) {
        best = 1.0;
        arg = {0, 1};
    }
    for (i64 u = 1;; ++u) {
        const double uy = double(u) * w.y;
        if (uy * uy > best) break;
        const double centre = -double(u) * w.x;
        double rad = std::isinf(best) ? double(step) : std::sqrt(best - uy * uy);
        i64 lo = static_cast<i64>(std::floor(centre - rad)) - 1;
        i64 hi = static_cast<i64>(std::ceil(centre + rad)) + 1;
        for (i64 v = lo; v <= hi; ++v) {
            if (!allowed(u, v) || gcd64(u, v) != 1) continue;
            const double re = double(u) * w.x + double(v);
            const double val = re * re + uy * uy;
            if (val < best) {
                best = val;
                arg = {u, v};
            }
        }
        if (u > 10000000) throw Error("iteration-limit-exceeded", "coset search did not terminate");
    }
    return arg;
}

Reduction finish_infinity(GroupElement gamma, const TangentPoint& p) {
    TangentPoint img = moebius_apply(gamma, p);
    const double k = std::floor(img.x);
    if (k != 0.0) {
        gamma = GroupElement::translation(-static_cast<i64>(k)) * gamma;
        img = moebius_apply(gamma, p);
        if (img.x >= 1.0) img.x -= 1.0;
        if (img.x < 0.0) img.x += 1.0;
    }
    return {gamma, img};
}

}  // namespace

Reduction reduce_to_cusp(const LatticeModel& model, int cusp, const TangentPoint& p) {
    model.check_cusp(cusp);
    Modred r = reduce_psl2z(p);
    if (model.kind == ModelKind::Modular) return finish_infinity(r.g, p);

    const i64 N = model.level;
    const GroupElement& g = r.g;
    if (cusp == 1) {
        if (mod_pos(g.c, N) == 0) return finish_infinity(g, p);
        auto [u, v] = best_row(r.w, N, [&](i64 uu, i64 vv) {
            return mod_pos(mod_pos(uu, N) * mod_pos(g.a, N) + mod_pos(vv, N) * mod_pos(g.c, N), N) == 0;
        });
        i64 x, y;
        ext_gcd(v, -u, x, y);  // v x - u y = 1
        GroupElement h(x, y, u, v);
        return finish_infinity(h * g, p);
    }

    // cusp 2 (zero): height of sigma2^{-1} h w is Im(w) / (N |a w + b|^2) for
    // the top row (a, b) of h; the class (a : b) = (c_g : -a_g) is excluded.
    auto [ta, tb] = best_row(r.w, N, [&](i64 aa, i64 bb) {
        return mod_pos(mod_pos(aa, N) * mod_pos(g.a, N) + mod_pos(bb, N) * mod_pos(g.c, N), N) != 0;
    });
    i64 x, y;
    ext_gcd(ta, tb, x, y);  // ta x + tb y = 1, so rows (ta, tb), (-y, x)
    i64 c0 = -y, d0 = x;
    const i64 lin = mod_pos(mod_pos(ta, N) * mod_pos(g.a, N) + mod_pos(tb, N) * mod_pos(g.c, N), N);
    const i64 off = mod_pos(mod_pos(c0, N) * mod_pos(g.a, N) + mod_pos(d0, N) * mod_pos(g.c, N), N);
    const i64 k = mod_pos(-off * inv_mod(lin, N), N);
    GroupElement h(ta, tb, add_checked(c0, k * ta), add_checked(d0, k * tb));
    GroupElement gamma = h * g;

    auto image_of = [&](const GroupElement& gm) {
        // W = (0, 1; -N, 0) gamma, acting projectively
        return moebius_apply_proj(gm.c, gm.d, -mul_checked(N, gm.a), -mul_checked(N, gm.b), p);
    };
    TangentPoint img = image_of(gamma);
    const double kk = std::floor(img.x);
    if (kk != 0.0) {
        GroupElement shift(1, 0, mul_checked(N, static_cast<i64>(kk)), 1);
        gamma = shift * gamma;
        img = image_of(gamma);
        if (img.x >= 1.0) img.x -= 1.0;
        if (img.x < 0.0) img.x += 1.0;
    }
    return {gamma, img};
}

void for_each_double_coset(const LatticeModel& model, int cusp, double c_max,
                           const std::function<void(const DoubleCosetRep&)>& fn) {
    model.check_cusp(cusp);
    if (!(c_max >= 0.0)) throw Error("domain", "c_max must be nonnegative");
    if (c_max > 3.0e9) throw Error("overflow", "c_max exceeds the exact-integer enumeration range");

    if (model.kind == ModelKind::Modular || cusp == 1) {
        const i64 step = model.kind == ModelKind::Modular ? 1 : model.level;
        const i64 cm = static_cast<i64>(std::floor(c_max));
        for (i64 c = step; c <= cm; c += step) {
            for (i64 d = 0; d < c; ++d) {
                if (gcd64(c, d) != 1) continue;
                DoubleCosetRep r;
                r.c = c;
                r.d = d;
                r.a = inv_mod(d, c);
                r.b = (mul_checked(r.a, d) - 1) / c;
                fn(r);
            }
        }
        return;
    }

    // Gamma_0(N), cusp zero: W = (N t, (N t b' - 1)/a'; N a', N b') with
    // p not dividing a', gcd(a', b') = 1 and t = (N b')^{-1} mod a'.
    const i64 N = model.level;
    const double rn = std::sqrt(double(N));
    const i64 am = static_cast<i64>(std::floor(c_max / rn + 1e-12));
    for (i64 a1 = 1; a1 <= am; ++a1) {
        if (a1 % N == 0) continue;
        if (rn * double(a1) > c_max * (1.0 + 1e-15)) break;
        for (i64 b1 = 0; b1 < a1; ++b1) {
            if (gcd64(a1, b1) != 1) continue;
            const i64 t = inv_mod(mul_checked(N % a1, b1) % a1, a1);
            DoubleCosetRep r;
            r.n = N;
            r.c = mul_checked(N, a1);
            r.d = mul_checked(N, b1);
            r.a = mul_checked(N, t);
            r.b = (mul_checked(mul_checked(N, t), b1) - 1) / a1;
            fn(r);
        }
    }
}

std::vector<DoubleCosetRep> double_cosets(const LatticeModel& model, int cusp, double c_max) {
    std::vector<DoubleCosetRep> out;
    for_each_double_coset(model, cusp, c_max, [&](const DoubleCosetRep& r) { out.push_back(r); });
    return out;
}

std::vector<i64> totient_sieve(i64 n_max) {
    if (n_max < 1) throw Error("domain", "totient_sieve needs n_max >= 1");
    if (n_max > 2000000000) throw Error("allocation", "n_max too large for the sieve");
    std::vector<i64> phi(static_cast<size_t>(n_max) + 1);
    for (i64 i = 0; i <= n_max; ++i) phi[i] = i;
    for (i64 p = 2; p <= n_max; ++p) {
        if (phi[p] != p) continue;
        for (i64 k = p; k <= n_max; k += p) phi[k] -= phi[k] / p;
    }
    return std::vector<i64>(phi.begin() + 1, phi.end());
}

}  // namespace sthe
