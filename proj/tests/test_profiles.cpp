#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "sthe/profiles.hpp"

using namespace sthe;
using boost::math::quadrature::gauss_kronrod;

namespace {

// mpmath, 30 digits (tests/oracles/pin_values.py style)
constexpr double kMass = 0.443993816168079437823;
constexpr double kRho0 = 0.828568839869105151664;
constexpr double kSupRho1 = 1.79829025260870734620;
constexpr double kSupRho2 = 17.4545335080982237265;
constexpr double kRhoHat3 = 0.445733759431964455577;
constexpr double kCdf03 = 0.740907974643807978663;

double raw_bump(double x) { return std::abs(x) < 1 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0; }

}  // namespace

TEST_CASE("mollifier mass and peak") {
    boost::math::quadrature::tanh_sinh<double> ts;
    const double l_boost = ts.integrate(raw_bump, -1.0, 1.0);
    CHECK(mollifier_mass() == doctest::Approx(l_boost).epsilon(1e-14));
    CHECK(mollifier_mass() == doctest::Approx(kMass).epsilon(1e-14));
    CHECK(mollifier(0.0) == doctest::Approx(kRho0).epsilon(1e-14));
    CHECK(mollifier(0.0) == doctest::Approx(std::exp(-1.0) / mollifier_mass()).epsilon(1e-15));
    CHECK(mollifier(1.0) == 0.0);
    CHECK(mollifier(-1.3) == 0.0);
}

TEST_CASE("rho_eps has unit mass and support in [-eps, eps]") {
    for (double eps : {1.0, 0.3, 0.01}) {
        auto f = [eps](double x) { return mollifier_eval(x, eps); };
        const double m = gauss_kronrod<double, 61>::integrate(f, -eps, eps, 12, 1e-14);
        CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(mollifier_eval(1.0001 * eps, eps) == 0.0);
    }
    CHECK_THROWS_AS(mollifier_eval(0.1, 0.0), Error);
}

TEST_CASE("mollifier derivatives match finite differences") {
    using boost::math::differentiation::finite_difference_derivative;
    for (double x : {-0.8, -0.3, 0.0, 0.45, 0.9}) {
        for (int n = 1; n <= 3; ++n) {
            auto lower = [n](double t) { return mollifier_deriv(n - 1, t); };
            const double fd = finite_difference_derivative(lower, x);
            const double scale = std::max(1.0, std::abs(fd));
            CAPTURE(x);
            CAPTURE(n);
            CHECK(std::abs(mollifier_deriv(n, x) - fd) < 5e-7 * scale);
        }
    }
    CHECK(mollifier_deriv(0, 0.2) == doctest::Approx(mollifier(0.2)).epsilon(1e-15));
    CHECK_THROWS_AS(mollifier_deriv(12, 0.0), Error);
}

TEST_CASE("derivative sup bounds M_rho(n)") {
    CHECK(mollifier_deriv_sup(0) >= kRho0);
    CHECK(mollifier_deriv_sup(0) <= 1.02 * kRho0);
    CHECK(mollifier_deriv_sup(1) >= kSupRho1);
    CHECK(mollifier_deriv_sup(1) <= 1.02 * kSupRho1);
    CHECK(mollifier_deriv_sup(2) >= kSupRho2);
    CHECK(mollifier_deriv_sup(2) <= 1.02 * kSupRho2);
    for (int n = 0; n <= kMaxMollifierOrder; ++n) CHECK(std::isfinite(mollifier_deriv_sup(n)));
    CHECK_THROWS_WITH_AS(mollifier_deriv_sup(kMaxMollifierOrder + 1), doctest::Contains("order-too-high"), Error);
}

TEST_CASE("mollifier CDF and transform") {
    CHECK(mollifier_cdf(-1.0) == 0.0);
    CHECK(mollifier_cdf(1.0) == 1.0);
    CHECK(mollifier_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(mollifier_cdf(0.3) == doctest::Approx(kCdf03).epsilon(1e-12));
    double prev = 0.0;
    for (int i = -100; i <= 100; ++i) {
        const double v = mollifier_cdf(i / 100.0);
        CHECK(v >= prev);
        prev = v;
    }
    CHECK(mollifier_transform(0.0) == 1.0);
    CHECK(mollifier_transform(3.0) == doctest::Approx(kRhoHat3).epsilon(1e-13));
}

TEST_CASE("smoothed indicator: support, monotonicity and eta bound") {
    const SmoothedIndicator up(5.0, 0.25), down(5.0, -0.25), sharp(5.0, 0.0);
    CHECK(up.lower() == 5.0);
    CHECK(up.upper() == 5.25);
    CHECK(down.lower() == 4.75);
    CHECK(down.upper() == 5.0);
    for (const auto& ind : {up, down, sharp}) {
        if (ind.eta != 0.0) CHECK(ind(ind.lower()) == 0.0);
        CHECK(ind(ind.lower() - 1e-9) == 0.0);
        CHECK(ind(ind.upper()) == 1.0);
        CHECK(ind(ind.upper() + 3.0) == 1.0);
        double prev = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double v = ind(4.6 + 0.004 * i);
            CHECK(v >= prev);
            CHECK(v <= 1.0);
            prev = v;
        }
    }
    // sandwich around the sharp indicator
    for (int i = 0; i <= 200; ++i) {
        const double y = 4.6 + 0.004 * i;
        CHECK(up(y) <= sharp(y));
        CHECK(sharp(y) <= down(y));
    }
    CHECK(eta_bound(1.0, 2.0) == 0.25);
    CHECK(eta_bound(1.0, 1.2) == doctest::Approx(0.1));
    CHECK_THROWS_AS(SmoothedIndicator(5.0, 0.3, 1.0, 2.0), Error);
    CHECK_THROWS_AS(smoothed_indicator_eval(up, -1.0), Error);
}

TEST_CASE("built-in profiles") {
    const Profile t = Profile::test();
    for (double x : {0.0, 0.17, 0.5, 0.83})
        for (double th : {0.0, 1.0, 2.5, 4.4}) {
            const double ref = (1.0 + std::cos(kTwoPi * x)) * (2.0 + std::sin(th));
            CHECK(std::abs(t.eval(x, th) - ref) < 1e-14);
        }
    CHECK(t.is_real());
    CHECK(t.analytic());
    CHECK(std::abs(t.theta_integral_mean() - cplx(4.0 * kPi)) < 1e-13);
    CHECK(std::abs(Profile::constant().theta_integral_mean() - cplx(kTwoPi)) < 1e-15);
    CHECK(t.averaged().mode_indices() == std::vector<int>{0});

    const Profile b = Profile::bump();
    CHECK_FALSE(b.analytic());
    CHECK(b.is_real());
    // x-modes vanish away from theta ~ 5.6 and peak at 1
    CHECK(b.mode(1, kPi / 2) == cplx(0.0));
    CHECK(b.mode(1, 3 * kPi / 2) == cplx(0.0));
    CHECK(std::abs(b.mode(1, 5.6) - 1.0) < 1e-15);
    CHECK(std::abs(b.mode(-1, 5.6 - kTwoPi) - 1.0) < 1e-12);
    CHECK(b.sup_bound() == 3.0);
    CHECK_THROWS_AS(b.mode_along(1, cplx(0.3, 0.1)), Error);
}

TEST_CASE("second x-derivative modes: hhat_j = hhat2_j / (-4 pi^2 j^2)") {
    const Profile t = Profile::test();
    for (int j : {-1, 1})
        for (double th : {0.3, 2.0, 5.0}) CHECK(std::abs(t.mode(j, th) - t.mode2(j, th) / (-4.0 * kPi * kPi * j * j)) < 1e-14);
    // cross-check the second derivative of h in x by finite differences
    const double x = 0.21, th = 1.3, h = 1e-4;
    const cplx d2 = (t.eval(x + h, th) - 2.0 * t.eval(x, th) + t.eval(x - h, th)) / (h * h);
    cplx via_modes = 0.0;
    for (int j : t.mode_indices()) via_modes += t.mode2(j, th) * e(-double(j) * x);
    CHECK(std::abs(d2 - via_modes) < 1e-5);
}

TEST_CASE("analytic continuation agrees with the real theta parametrization") {
    const Profile t = Profile::test();
    for (double u : {-3.0, -0.4, 0.0, 0.7, 5.0}) {
        const double th = -2.0 * std::atan2(1.0, u);
        for (int j : {-1, 0, 1}) CHECK(std::abs(t.mode_along(j, cplx(u, 0.0)) - t.mode(j, th)) < 1e-13);
    }
}

TEST_CASE("profile files") {
    const std::string text =
        "# j k re im\n"
        "0 0 2 0\n"
        "0 1 0 -0.5\n"
        "0 -1 0 0.5   # conjugate pair\n"
        "\n"
        "1 0 1 0\n"
        "-1 0 1 0\n";
    const Profile p = Profile::parse(text, "mine");
    CHECK(p.name() == "mine");
    CHECK(p.mode_indices() == std::vector<int>{-1, 0, 1});
    for (double x : {0.1, 0.6})
        for (double th : {0.2, 3.3}) {
            const double ref = 2.0 + std::sin(th) + 2.0 * std::cos(kTwoPi * x);
            CHECK(std::abs(p.eval(x, th) - ref) < 1e-14);
        }
    CHECK_THROWS_AS(Profile::parse("0 0 1\n"), Error);
    CHECK_THROWS_AS(Profile::parse("0 0 1 0 7\n"), Error);
    CHECK_THROWS_AS(Profile::parse("# nothing\n"), Error);

    const std::string path = "profile_roundtrip.txt";
    {
        std::ofstream f(path);
        f << text;
    }
    const Profile q = Profile::by_name("file:" + path);
    CHECK(std::abs(q.eval(0.4, 1.1) - p.eval(0.4, 1.1)) < 1e-15);
    std::remove(path.c_str());
    CHECK_THROWS_AS(Profile::by_name("file:/nonexistent/profile"), Error);
    CHECK_THROWS_AS(Profile::by_name("nope"), Error);
}

TEST_CASE("cutoff sandwich chi- <= 1_[alpha,beta] <= chi+") {
    const double a = 0.2, b = 0.55, eps = 0.05;
    const CutoffSpec plus(a, b, eps, CutoffSide::Plus), minus(a, b, eps, CutoffSide::Minus);
    for (int i = 0; i <= 2000; ++i) {
        const double x = -0.1 + 0.9 * i / 2000.0;
        const double ind = (x >= a && x <= b) ? 1.0 : 0.0;
        CHECK(cutoff_eval(minus, x) <= ind);
        CHECK(ind <= cutoff_eval(plus, x));
        CHECK(cutoff_eval(plus, x) <= 1.0);
        CHECK(cutoff_eval(minus, x) >= 0.0);
    }
    // supports and plateaus
    CHECK(cutoff_eval(plus, a - eps - 1e-12) == 0.0);
    CHECK(cutoff_eval(plus, b + eps + 1e-12) == 0.0);
    CHECK(cutoff_eval(minus, a + eps) == doctest::Approx(1.0));
    CHECK(cutoff_eval(minus, a - 1e-12) == 0.0);
    CHECK_THROWS_AS(CutoffSpec(0.5, 0.2, 0.01, CutoffSide::Plus), Error);
    CHECK_THROWS_AS(CutoffSpec(0.2, 0.3, 0.06, CutoffSide::Minus), Error);
}

TEST_CASE("cutoff Fourier coefficients match quadrature of the periodic cutoff") {
    for (auto side : {CutoffSide::Plus, CutoffSide::Minus}) {
        const CutoffSpec s(0.1, 0.7, 0.08, side);
        for (long m : {0L, 1L, -2L, 5L, 17L}) {
            auto re = [&](double x) { return cutoff_eval_periodic(s, x) * std::cos(kTwoPi * m * x); };
            auto im = [&](double x) { return -cutoff_eval_periodic(s, x) * std::sin(kTwoPi * m * x); };
            const cplx ref(gauss_kronrod<double, 61>::integrate(re, 0.0, 1.0, 15, 1e-14),
                           gauss_kronrod<double, 61>::integrate(im, 0.0, 1.0, 15, 1e-14));
            const cplx c = cutoff_fourier_coeff(s, m);
            CAPTURE(m);
            CHECK(std::abs(c - ref) < 1e-9);
            CHECK(std::abs(c) <= cutoff_coeff_bound(s, 0, m));
            if (m != 0) CHECK(std::abs(c) <= cutoff_coeff_bound(s, 2, m));
        }
    }
    const CutoffSpec sharp(0.1, 0.4, 0.0, CutoffSide::Sharp);
    CHECK(std::abs(cutoff_fourier_coeff(sharp, 0) - cplx(0.3)) < 1e-15);
    CHECK(std::abs(cutoff_fourier_coeff(sharp, 3) -
                   (e(-0.3) - e(-1.2)) / cplx(0.0, 6.0 * kPi)) < 1e-15);
    CHECK_THROWS_WITH_AS(cutoff_fourier_coeff(CutoffSpec(0.0, 0.95, 0.04, CutoffSide::Plus), 1),
                         doctest::Contains("period-overflow"), Error);
}

TEST_CASE("Lipschitz and Jackson bounds") {
    const CutoffSpec s(0.2, 0.6, 0.04, CutoffSide::Plus), half(0.2, 0.6, 0.02, CutoffSide::Plus);
    // n = 0: (2/eps)^2 scaling times the width factor (beta - alpha + eps)
    const double ratio = cutoff_lipschitz_bound(half, 0) / cutoff_lipschitz_bound(s, 0);
    CHECK(ratio == doctest::Approx(4.0 * (0.4 + 0.02) / (0.4 + 0.04)).epsilon(1e-14));
    // genuine Lipschitz constants for chi and chi'
    double slope = 0.0, curve = 0.0;
    for (int i = 0; i < 4000; ++i) {
        const double x = 0.1 + 0.6 * i / 4000.0, h = 1e-5;
        const double d1 = (cutoff_eval(s, x + h) - cutoff_eval(s, x - h)) / (2 * h);
        const double d2 = (cutoff_eval(s, x + 2 * h) - cutoff_eval(s, x)) / (2 * h);
        slope = std::max(slope, std::abs(d1));
        curve = std::max(curve, std::abs(d2 - d1) / h);
    }
    CHECK(slope <= cutoff_lipschitz_bound(s, 0));
    CHECK(curve <= cutoff_lipschitz_bound(s, 1));
    CHECK(std::isinf(cutoff_lipschitz_bound(CutoffSpec(0.2, 0.6, 0.0, CutoffSide::Sharp), 0)));
    const double j10 = jackson_truncation_bound(s, 1, 10, 1.0), j100 = jackson_truncation_bound(s, 1, 100, 1.0);
    CHECK(j100 < j10);
    CHECK(j100 / j10 == doctest::Approx(std::log(100.0) / std::log(10.0) / 100.0).epsilon(1e-12));
    CHECK_THROWS_AS(jackson_truncation_bound(s, 1, 1, 1.0), Error);
    CHECK_THROWS_AS(jackson_truncation_bound(s, 1, 10, 0.0), Error);
}
