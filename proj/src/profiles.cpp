#include "sthe/profiles.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include "sthe/quadrature.hpp"

namespace sthe {

namespace {

double bump_unnormalized(double x) {
    const double q = 1.0 - x * x;
    if (q <= 0.0) return 0.0;
    const double g = -1.0 / q;
    return g < -745.0 ? 0.0 : std::exp(g);
}

using Poly = std::vector<double>;

double poly_eval(const Poly& p, double x) {
    double r = 0.0;
    for (size_t i = p.size(); i-- > 0;) r = r * x + p[i];
    return r;
}

// P_{n+1} = P_n' (1-x^2)^2 + 4 n x (1-x^2) P_n - 2 x P_n, with
// rho^{(n)} = l^{-1} e^{-1/(1-x^2)} P_n(x) / (1-x^2)^{2n}.
const std::vector<Poly>& deriv_polys() {
    static const std::vector<Poly> polys = [] {
        std::vector<Poly> out{{1.0}};
        for (int n = 0; n <= kMaxMollifierOrder; ++n) {
            const Poly& p = out.back();
            Poly next(p.size() + 3, 0.0);
            // P' (1 - 2x^2 + x^4)
            for (size_t i = 1; i < p.size(); ++i) {
                double c = i * p[i];
                next[i - 1] += c;
                next[i + 1] -= 2.0 * c;
                next[i + 3] += c;
            }
            for (size_t i = 0; i < p.size(); ++i) {
                next[i + 1] += (4.0 * n - 2.0) * p[i];
                next[i + 3] -= 4.0 * n * p[i];
            }
            out.push_back(next);
        }
        return out;
    }();
    return polys;
}

struct CdfTable {
    static constexpr int kIntervals = 2000;
    std::array<double, kIntervals + 1> t{}, f{}, d1{}, d2{};
    double h = 2.0 / kIntervals;
};

const CdfTable& cdf_table() {
    static const CdfTable tab = [] {
        CdfTable c;
        double acc = 0.0;
        for (int i = 0; i <= CdfTable::kIntervals; ++i) {
            c.t[i] = -1.0 + i * c.h;
            if (i > 0) {
                acc += gk15([](double x) { return cplx(bump_unnormalized(x), 0.0); }, c.t[i - 1], c.t[i])
                           .value.real();
            }
            c.f[i] = acc;
        }
        const double total = acc;
        for (int i = 0; i <= CdfTable::kIntervals; ++i) {
            c.f[i] /= total;
            c.d1[i] = mollifier(c.t[i]);
            c.d2[i] = mollifier_deriv(1, c.t[i]);
        }
        c.f[CdfTable::kIntervals] = 1.0;
        return c;
    }();
    return tab;
}

}  // namespace

double mollifier_mass() {
    static const double l = gk_adaptive_real(bump_unnormalized, -1.0, 1.0, 1e-16, 4000);
    return l;
}

double mollifier(double x) { return bump_unnormalized(x) / mollifier_mass(); }

double mollifier_eval(double x, double eps) {
    if (!(eps > 0.0)) throw Error("domain", "mollifier scale must be positive");
    return mollifier(x / eps) / eps;
}

double mollifier_deriv(int n, double x) {
    if (n < 0 || n > kMaxMollifierOrder + 1) throw Error("order-too-high", "derivative order out of range");
    const double q = 1.0 - x * x;
    if (q < 1e-4) return 0.0;
    const double g = -1.0 / q;
    return std::exp(g) * poly_eval(deriv_polys()[n], x) / std::pow(q, 2 * n) / mollifier_mass();
}

double mollifier_cdf(double t) {
    if (t <= -1.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const CdfTable& c = cdf_table();
    int i = std::min(CdfTable::kIntervals - 1, static_cast<int>((t + 1.0) / c.h));
    const double h = c.h;
    const double s = (t - c.t[i]) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
    const double h0 = 1.0 - h5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double h3 = 0.5 * (s3 - 2 * s4 + s5);
    const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
    double v = c.f[i] * h0 + h * c.d1[i] * h1 + h * h * c.d2[i] * h2 + h * h * c.d2[i + 1] * h3 +
               h * c.d1[i + 1] * h4 + c.f[i + 1] * h5;
    return std::clamp(v, 0.0, 1.0);
}

double mollifier_transform(double xi) {
    if (xi == 0.0) return 1.0;
    auto f = [xi](double t) { return cplx(mollifier(t) * std::cos(xi * t), 0.0); };
    // even integrand
    return 2.0 * gk_adaptive(f, 0.0, 1.0, 1e-15, 20000).value.real();
}

double mollifier_deriv_sup(int n) {
    if (n < 0) throw Error("domain", "derivative order must be nonnegative");
    if (n > kMaxMollifierOrder) throw Error("order-too-high", "M_rho(n) is available for n <= 8");
    static std::array<double, kMaxMollifierOrder + 1> bound{};
    static std::once_flag once;
    std::call_once(once, [] {
        constexpr int kGrid = 200000;
        const double h = 2.0 / kGrid;
        std::array<double, kMaxMollifierOrder + 2> gmax{};
        for (int i = 0; i <= kGrid; ++i) {
            const double x = -1.0 + i * h;
            for (int k = 0; k <= kMaxMollifierOrder + 1; ++k)
                gmax[k] = std::max(gmax[k], std::abs(mollifier_deriv(k, x)));
        }
        for (int k = 0; k <= kMaxMollifierOrder; ++k) bound[k] = 1.01 * gmax[k] + 0.5 * h * gmax[k + 1];
    });
    return bound[n];
}

// ---- smoothed indicator ----

double eta_bound(double B0, double B1) { return std::min(0.5 * (B1 - B0), 0.25); }

SmoothedIndicator::SmoothedIndicator(double T_, double eta_, double B0, double B1) : T(T_), eta(eta_) {
    if (std::abs(eta) > eta_bound(B0, B1) * (1.0 + 1e-12))
        throw Error("domain", "|eta| <= min((B1-B0)/2, 1/4) violated");
    if (!(T > 0.0)) throw Error("domain", "indicator level must be positive");
}

double SmoothedIndicator::operator()(double y) const {
    if (eta == 0.0) return y >= T ? 1.0 : 0.0;
    const double half = 0.5 * std::abs(eta);
    return mollifier_cdf((y - T - 0.5 * eta) / half);
}

double smoothed_indicator_eval(const SmoothedIndicator& ind, double y) {
    if (!(y > 0.0)) throw Error("domain", "indicator argument must be positive");
    return ind(y);
}

// ---- profiles ----

Profile Profile::constant(cplx value) {
    Profile p;
    p.add_mode(0, TrigSeries{{0, value}});
    p.name_ = "constant";
    return p;
}

Profile Profile::test() {
    Profile p;
    const cplx i(0.0, 1.0);
    p.add_mode(0, TrigSeries{{-1, 0.5 * i}, {0, 2.0}, {1, -0.5 * i}});
    p.add_mode(1, TrigSeries{{-1, 0.25 * i}, {0, 1.0}, {1, -0.25 * i}});
    p.add_mode(-1, TrigSeries{{-1, 0.25 * i}, {0, 1.0}, {1, -0.25 * i}});
    p.name_ = "test";
    return p;
}

Profile Profile::bump() {
    Profile p;
    p.add_mode(0, TrigSeries{{0, 1.0}});
    auto b = [](double theta) {
        const double d = std::remainder(theta - 5.6, kTwoPi) / 0.55;
        return cplx(std::exp(1.0) * bump_unnormalized(d), 0.0);
    };
    p.add_mode(1, b, 1.0);
    p.add_mode(-1, b, 1.0);
    p.name_ = "bump";
    return p;
}

Profile Profile::from_table(const std::map<int, TrigSeries>& modes, std::string name) {
    Profile p;
    for (const auto& [j, s] : modes) p.add_mode(j, s);
    p.name_ = std::move(name);
    return p;
}

Profile Profile::parse(const std::string& text, std::string name) {
    std::map<int, TrigSeries> modes;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int j, k;
        double re, im;
        if (!(ls >> j)) continue;
        if (!(ls >> k >> re >> im))
            throw Error("parse", "profile line " + std::to_string(lineno) + ": expected `j k re im`");
        std::string extra;
        if (ls >> extra) throw Error("parse", "profile line " + std::to_string(lineno) + ": trailing text");
        modes[j][k] += cplx(re, im);
    }
    if (modes.empty()) throw Error("parse", "profile has no modes");
    return from_table(modes, std::move(name));
}

Profile Profile::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("io", "cannot open profile file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

Profile Profile::by_name(const std::string& id) {
    if (id == "constant" || id == "one") return constant();
    if (id == "test") return test();
    if (id == "bump") return bump();
    if (id.rfind("file:", 0) == 0) return load(id.substr(5));
    throw Error("domain", "unknown profile id '" + id + "'");
}

void Profile::add_mode(int j, TrigSeries coeffs) {
    Mode m;
    m.trig = true;
    for (const auto& [k, c] : coeffs) {
        m.coeffs[k] += c;
        m.sup += std::abs(c);
    }
    modes_[j] = std::move(m);
}

void Profile::add_mode(int j, ThetaFn fn, double sup) {
    Mode m;
    m.trig = false;
    m.fn = std::move(fn);
    m.sup = sup;
    modes_[j] = std::move(m);
}

cplx Profile::mode(int j, double theta) const {
    auto it = modes_.find(j);
    if (it == modes_.end()) return 0.0;
    const Mode& m = it->second;
    if (!m.trig) return m.fn(theta);
    cplx s = 0.0;
    for (const auto& [k, c] : m.coeffs) s += c * std::polar(1.0, k * theta);
    return s;
}

cplx profile_mode(const Profile& p, int j, double theta) { return p.mode(j, theta); }

cplx Profile::mode2(int j, double theta) const { return -4.0 * kPi * kPi * double(j) * double(j) * mode(j, theta); }

cplx Profile::eval(double x, double theta) const {
    cplx s = 0.0;
    for (const auto& [j, m] : modes_) s += mode(j, theta) * e(-double(j) * x);
    return s;
}

cplx Profile::mode_along(int j, cplx u) const {
    auto it = modes_.find(j);
    if (it == modes_.end()) return 0.0;
    const Mode& m = it->second;
    if (!m.trig) throw Error("domain", "complex continuation needs a trigonometric theta-series");
    const cplx i(0.0, 1.0);
    const cplx z = (u - i) / (u + i);
    const cplx zi = 1.0 / z;
    cplx s = 0.0;
    for (const auto& [k, c] : m.coeffs) {
        cplx pw = 1.0;
        const cplx base = k >= 0 ? z : zi;
        for (int t = 0; t < std::abs(k); ++t) pw *= base;
        s += c * pw;
    }
    return s;
}

std::vector<int> Profile::mode_indices() const {
    std::vector<int> out;
    for (const auto& kv : modes_) out.push_back(kv.first);
    return out;
}

bool Profile::analytic() const {
    return std::all_of(modes_.begin(), modes_.end(), [](const auto& kv) { return kv.second.trig; });
}

bool Profile::is_real() const {
    for (const auto& [j, m] : modes_) {
        for (int s = 0; s < 64; ++s) {
            const double th = kTwoPi * (s + 0.37) / 64.0;
            if (std::abs(mode(-j, th) - std::conj(mode(j, th))) > 1e-13 * (1.0 + m.sup)) return false;
        }
    }
    return true;
}

double Profile::sup_bound() const {
    double s = 0.0;
    for (const auto& kv : modes_) s += kv.second.sup;
    return s;
}

cplx Profile::theta_integral_mean() const {
    auto it = modes_.find(0);
    if (it == modes_.end()) return 0.0;
    const Mode& m = it->second;
    if (m.trig) {
        auto k0 = m.coeffs.find(0);
        return k0 == m.coeffs.end() ? cplx(0.0) : kTwoPi * k0->second;
    }
    return gk_adaptive(m.fn, 0.0, kTwoPi, 1e-13, 4000).value;
}

Profile Profile::averaged() const {
    Profile p;
    auto it = modes_.find(0);
    if (it != modes_.end()) p.modes_[0] = it->second;
    p.name_ = name_ + "-avg";
    return p;
}

Profile Profile::operator+(const Profile& o) const {
    Profile r = *this;
    for (const auto& [j, m] : o.modes_) {
        auto it = r.modes_.find(j);
        if (it == r.modes_.end()) {
            r.modes_[j] = m;
            continue;
        }
        Mode& a = it->second;
        if (a.trig && m.trig) {
            for (const auto& [k, c] : m.coeffs) a.coeffs[k] += c;
            a.sup += m.sup;
        } else {
            ThetaFn fa = a.trig ? ThetaFn([s = a.coeffs](double th) {
                cplx v = 0.0;
                for (const auto& [k, c] : s) v += c * std::polar(1.0, k * th);
                return v;
            })
                                : a.fn;
            ThetaFn fb = m.trig ? ThetaFn([s = m.coeffs](double th) {
                cplx v = 0.0;
                for (const auto& [k, c] : s) v += c * std::polar(1.0, k * th);
                return v;
            })
                                : m.fn;
            Mode merged;
            merged.trig = false;
            merged.fn = [fa, fb](double th) { return fa(th) + fb(th); };
            merged.sup = a.sup + m.sup;
            a = std::move(merged);
        }
    }
    r.name_ = name_ + "+" + o.name_;
    return r;
}

// ---- cutoffs ----

CutoffSpec::CutoffSpec(double a, double b, double e_, CutoffSide s) : alpha(a), beta(b), eps(e_), side(s) {
    if (!(alpha < beta)) throw Error("domain", "cutoff needs alpha < beta");
    if (side != CutoffSide::Sharp && !(eps > 0.0 && eps < 0.5 * (beta - alpha)))
        throw Error("domain", "cutoff needs 0 < eps < (beta-alpha)/2");
}

double CutoffSpec::radius() const {
    switch (side) {
        case CutoffSide::Plus: return 0.5 * (beta - alpha + eps);
        case CutoffSide::Minus: return 0.5 * (beta - alpha - eps);
        default: return 0.5 * (beta - alpha);
    }
}

namespace {

double cutoff_centered(const CutoffSpec& s, double u) {
    const double r = s.radius();
    if (s.side == CutoffSide::Sharp) return std::abs(u) <= r ? 1.0 : 0.0;
    const double half = 0.5 * s.eps;
    return std::clamp(mollifier_cdf((u + r) / half) - mollifier_cdf((u - r) / half), 0.0, 1.0);
}

double width_pm(const CutoffSpec& s) {
    switch (s.side) {
        case CutoffSide::Plus: return s.beta - s.alpha + s.eps;
        case CutoffSide::Minus: return s.beta - s.alpha - s.eps;
        default: return s.beta - s.alpha;
    }
}

}  // namespace

double cutoff_eval(const CutoffSpec& spec, double x) {
    if (spec.side == CutoffSide::Sharp) return (x >= spec.alpha && x <= spec.beta) ? 1.0 : 0.0;
    return cutoff_centered(spec, x - spec.mid());
}

double cutoff_eval_periodic(const CutoffSpec& spec, double x) {
    double u = x - spec.mid();
    u -= std::round(u);
    return cutoff_centered(spec, u);
}

cplx cutoff_fourier_coeff(const CutoffSpec& spec, long m) {
    const double support =
        spec.side == CutoffSide::Plus ? spec.beta - spec.alpha + 2.0 * spec.eps : spec.beta - spec.alpha;
    if (support > 1.0 + 1e-14) throw Error("period-overflow", "cutoff support does not fit in one period");
    if (spec.side == CutoffSide::Sharp) {
        if (m == 0) return spec.beta - spec.alpha;
        return (e(-double(m) * spec.alpha) - e(-double(m) * spec.beta)) / cplx(0.0, kTwoPi * double(m));
    }
    const double r = spec.radius();
    if (m == 0) return 2.0 * r;
    const double md = double(m);
    return e(-md * spec.mid()) * (std::sin(kTwoPi * md * r) / (kPi * md)) * mollifier_transform(kPi * md * spec.eps);
}

double cutoff_lipschitz_bound(const CutoffSpec& spec, int n) {
    if (n < 0) throw Error("domain", "n must be nonnegative");
    if (spec.side == CutoffSide::Sharp) return std::numeric_limits<double>::infinity();
    return std::pow(2.0 / spec.eps, n + 2) * width_pm(spec) * mollifier_deriv_sup(n + 1);
}

double jackson_truncation_bound(const CutoffSpec& spec, int n, long N, double K0) {
    if (N < 2) throw Error("domain", "Jackson bound needs N >= 2");
    if (!(K0 > 0.0)) throw Error("domain", "K0 must be positive");
    if (spec.side == CutoffSide::Sharp) return std::numeric_limits<double>::infinity();
    const double K1 = kPi * std::pow(2.0, n + 3) * K0 * mollifier_deriv_sup(n + 1);
    return K1 * width_pm(spec) * std::log(double(N)) / (std::pow(spec.eps, n + 2) * std::pow(double(N), n + 1));
}

double cutoff_coeff_bound(const CutoffSpec& spec, int n, long m) {
    if (spec.side == CutoffSide::Sharp) return std::numeric_limits<double>::infinity();
    const double base = 2.0 * width_pm(spec) * std::pow(2.0 / spec.eps, n) * mollifier_deriv_sup(n);
    if (n == 0) return base;
    return base / std::pow(kTwoPi * std::abs(double(m)), n);
}

}  // namespace sthe
