#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sthe/common.hpp"

namespace sthe {

// ---- mollifier rho(x) = l^{-1} exp(-1/(1-x^2)) on (-1, 1) ----

double mollifier_mass();                 // l
double mollifier(double x);              // rho
double mollifier_eval(double x, double eps);  // rho_eps(x) = rho(x/eps)/eps
double mollifier_deriv(int n, double x);      // rho^{(n)}(x)
double mollifier_cdf(double t);          // Phi(t) = int_{-1}^t rho
// Even transform int rho(t) cos(xi t) dt.
double mollifier_transform(double xi);

inline constexpr int kMaxMollifierOrder = 8;
double mollifier_deriv_sup(int n);

// ---- smoothed indicator of [T, inf) ----

struct SmoothedIndicator {
    double T = 1.0;
    double eta = 0.0;

    SmoothedIndicator() = default;
    SmoothedIndicator(double T, double eta, double B0 = 1.0, double B1 = 2.0);

    double operator()(double y) const;
    // Value is 0 below lower() and 1 from upper() on.
    double lower() const { return eta < 0 ? T + eta : T; }
    double upper() const { return eta > 0 ? T + eta : T; }
};

double smoothed_indicator_eval(const SmoothedIndicator& ind, double y);

double eta_bound(double B0, double B1);

// ---- boundary profile h(x, theta) = sum_j hhat_j(theta) e(-j x) ----

class Profile {
public:
    using ThetaFn = std::function<cplx(double)>;
    // hhat_j(theta) = sum_k C_{jk} e^{i k theta}
    using TrigSeries = std::map<int, cplx>;

    Profile() = default;

    static Profile constant(cplx value = 1.0);
    // (1 + cos 2 pi x)(2 + sin theta)
    static Profile test();
    // 1 + 2 cos(2 pi x) b(theta), b a smooth bump supported in theta in (5.05, 6.15)
    static Profile bump();
    static Profile from_table(const std::map<int, TrigSeries>& modes, std::string name = "table");
    static Profile parse(const std::string& text, std::string name = "file");
    static Profile load(const std::string& path);
    static Profile by_name(const std::string& id);

    void add_mode(int j, TrigSeries coeffs);
    // Non-analytic theta dependence; the bump profile uses this.
    void add_mode(int j, ThetaFn fn, double sup);

    cplx eval(double x, double theta) const;
    cplx mode(int j, double theta) const;
    cplx mode2(int j, double theta) const;  // second x-derivative mode, -4 pi^2 j^2 hhat_j
    cplx x_average(double theta) const { return mode(0, theta); }
    // Analytic continuation of hhat_j(theta(u)) for theta(u) = -2 arg(u + i),
    // i.e. e^{i theta} = (u - i)/(u + i). Only for analytic profiles.
    cplx mode_along(int j, cplx u) const;

    std::vector<int> mode_indices() const;
    bool has_mode(int j) const { return modes_.count(j) != 0; }
    bool analytic() const;
    bool is_real() const;
    double sup_bound() const;
    // int_0^{2 pi} hhat_0(theta) d theta
    cplx theta_integral_mean() const;
    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }
    // x-averaged profile hbar(theta), as a profile with only the j = 0 mode.
    Profile averaged() const;

    Profile operator+(const Profile& o) const;

private:
    struct Mode {
        bool trig = true;
        TrigSeries coeffs;
        ThetaFn fn;
        double sup = 0.0;
    };
    std::map<int, Mode> modes_;
    std::string name_ = "custom";
    bool real_ = true;
};

cplx profile_mode(const Profile& p, int j, double theta);

// ---- smooth segment cutoffs chi^{+/-} ----

enum class CutoffSide { Plus, Minus, Sharp };

struct CutoffSpec {
    double alpha = 0.0;
    double beta = 1.0;
    double eps = 0.1;
    CutoffSide side = CutoffSide::Plus;

    CutoffSpec() = default;
    CutoffSpec(double alpha, double beta, double eps, CutoffSide side);
    double radius() const;  // half-width r of the interval being mollified
    double mid() const { return 0.5 * (alpha + beta); }
};

double cutoff_eval(const CutoffSpec& spec, double x);
// Periodic version on R/Z (support must fit in one period).
double cutoff_eval_periodic(const CutoffSpec& spec, double x);
// c_m = int_0^1 chi(x) e(-m x) dx
cplx cutoff_fourier_coeff(const CutoffSpec& spec, long m);
double cutoff_lipschitz_bound(const CutoffSpec& spec, int n);
double jackson_truncation_bound(const CutoffSpec& spec, int n, long N, double K0);
// Bound on |c_m| through the n-th derivative.
double cutoff_coeff_bound(const CutoffSpec& spec, int n, long m);

}  // namespace sthe
