#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sthe/expansion.hpp"
#include "sthe/testfns.hpp"

using namespace sthe;

namespace {

// Frozen with tests/oracles/pin_values.py (mpmath, 30 digits).
constexpr double kS_0123 = 0.95028038138032402385;  // S(1/sqrt(0.0123))
constexpr double kS_25 = 0.86602540378443864676;    // S(2) = sqrt(3)/2
constexpr double kS_003 = 0.95576117154242509006;   // S(1/sqrt(0.003))
constexpr double kG3Inf = 0.23817575466009567103;   // Gamma_0(3), cusp infinity, T = 5, y = 4e-4
constexpr double kG3Zero = 0.23472321438305645363;  // Gamma_0(3), cusp 0
constexpr double kG5Inf = 0.15726432617139833099;   // Gamma_0(5), cusp infinity, T = 4, y = 1e-4
constexpr double kG5Zero = 0.16020018170072372017;  // Gamma_0(5), cusp 0
// test profile, modular, T = 3, y = 1/30: T int_0^1 phi e(mx) dx
const cplx kTest0(2.1007997604622589662, 0.0);
const cplx kTestP1(0.50184698455943483438, -0.12536703048357133775);
const cplx kTestM1(0.50184698455943483438, 0.12536703048357133775);

// phi by maximizing over every bottom row (c, d) with |c|, |d| <= K; only the
// highest image can fire, and h is 1-periodic in x so the top row is free.
cplx brute_phi_modular(const TestFunctionSpec& spec, double x, double y, double theta, i64 K) {
    double best = -1.0;
    TangentPoint top;
    for (i64 c = 0; c <= K; ++c)
        for (i64 d = -K; d <= K; ++d) {
            if (std::gcd(c, d) != 1 || (c == 0 && d != 1)) continue;
            i64 a = 1, b = 0;
            if (c != 0) {
                a = inv_mod(mod_pos(d, c), c);
                b = (a * d - 1) / c;
            }
            const TangentPoint q = moebius_apply(GroupElement(a, b, c, d), TangentPoint(x, y, theta));
            if (q.y > best) {
                best = q.y;
                top = q;
            }
        }
    return spec.indicator()(top.y) * spec.profile.eval(top.x, top.theta);
}

TestFunctionSpec spec_with(double T, Profile prof) {
    TestFunctionSpec s;
    s.T = T;
    s.profile = std::move(prof);
    return s;
}

}  // namespace

TEST_CASE("phi agrees with the brute-force maximal orbit image") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(0, 1), uly(std::log(0.01), std::log(1.0)), ut(0, kTwoPi);
    for (double eta : {0.0, 0.25, -0.25}) {
        TestFunctionSpec s = spec_with(2.0, Profile::test());
        s.eta = eta;
        for (int t = 0; t < 150; ++t) {
            const double x = ux(rng), y = std::exp(uly(rng)), th = ut(rng);
            const cplx got = eval_phi(s, TangentPoint(x, y, th));
            const cplx ref = brute_phi_modular(s, x, y, th, 40);
            CAPTURE(x);
            CAPTURE(y);
            CHECK(std::abs(got - ref) < 1e-9);
        }
    }
}

TEST_CASE("phi vanishes below the indicator support and f respects the variants") {
    TestFunctionSpec s = spec_with(3.0, Profile::test());
    CHECK(eval_f(s, TangentPoint(0.2, 2.9, 0.0)) == cplx(0.0));
    CHECK(std::abs(eval_f(s, TangentPoint(0.2, 3.5, 0.7)) - s.profile.eval(0.2, 0.7)) < 1e-15);
    s.variant = Variant::Averaged;
    CHECK(std::abs(eval_f(s, TangentPoint(0.2, 3.5, 0.7)) - s.profile.x_average(0.7)) < 1e-15);
    s.variant = Variant::Renormalized;
    s.B1 = 2.0;
    // scale T/B1 = 1.5: height 2.1 maps to 3.15 >= T
    CHECK(eval_f(s, TangentPoint(0.2, 2.1, 0.7)) != cplx(0.0));
    CHECK(eval_f(s, TangentPoint(0.2, 1.9, 0.7)) == cplx(0.0));
}

TEST_CASE("spec preconditions name the violated inequality") {
    TestFunctionSpec s;
    s.T = 1.5;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("T >= B1"), Error);
    s.T = 3.0;
    s.B1 = 1.0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("B1 > B0"), Error);
    s.B1 = 2.0;
    s.eta = 0.3;
    CHECK_THROWS_AS(s.validate(), Error);
    s.eta = 0.0;
    s.cusp = 2;
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("constant profile on the modular group reproduces the totient sum") {
    struct Case {
        double T, Ty, ref;
    };
    for (Case c : {Case{2.0, 0.0123, kS_0123}, Case{2.0, 0.25, kS_25}, Case{7.0, 0.003, kS_003}}) {
        TestFunctionSpec s = spec_with(c.T, Profile::constant());
        const double y = c.Ty / c.T;
        const cplx ex = c.T * expansion_fourier_integral(s, 0, y, 1e-12).value;
        const cplx iv = c.T * interval_decomposition_integral(s, 0.0, 1.0, y, 0, 1e-12).value;
        const cplx dr = c.T * direct_horocycle_integral(s, 0.0, 1.0, y, 0, 1e-12).value;
        CAPTURE(c.Ty);
        CHECK(std::abs(ex - c.ref) < 1e-12);
        CHECK(std::abs(iv - c.ref) < 1e-12);
        CHECK(std::abs(dr - c.ref) < 1e-10);
    }
    CHECK(kS_25 == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("Gamma_0(p) at both cusps matches the pinned coset sums") {
    struct Case {
        i64 p;
        int cusp;
        double T, y, ref;
    };
    for (Case c : {Case{3, 1, 5.0, 4e-4, kG3Inf}, Case{3, 2, 5.0, 4e-4, kG3Zero}, Case{5, 1, 4.0, 1e-4, kG5Inf},
                   Case{5, 2, 4.0, 1e-4, kG5Zero}}) {
        TestFunctionSpec s = spec_with(c.T, Profile::constant());
        s.model = LatticeModel::gamma0(c.p, 0.5, 0.5);
        s.cusp = c.cusp;
        CAPTURE(c.p);
        CAPTURE(c.cusp);
        const cplx ex = c.T * expansion_fourier_integral(s, 0, c.y, 1e-12).value;
        const cplx iv = c.T * interval_decomposition_integral(s, 0.0, 1.0, c.y, 0, 1e-12).value;
        CHECK(std::abs(ex - c.ref) < 1e-11);
        CHECK(std::abs(iv - c.ref) < 1e-11);
    }
}

TEST_CASE("test profile Fourier coefficients match the pinned brute-force values") {
    TestFunctionSpec s = spec_with(3.0, Profile::test());
    const double y = 1.0 / 30.0;
    struct Case {
        long m;
        cplx ref;
    };
    for (Case c : {Case{0, kTest0}, Case{1, kTestP1}, Case{-1, kTestM1}}) {
        CAPTURE(c.m);
        const cplx ex = 3.0 * expansion_fourier_integral(s, c.m, y, 1e-12).value;
        const cplx iv = 3.0 * interval_decomposition_integral(s, 0.0, 1.0, y, c.m, 1e-12).value;
        const cplx dr = 3.0 * direct_horocycle_integral(s, 0.0, 1.0, y, c.m, 1e-12).value;
        CHECK(std::abs(ex - c.ref) < 1e-11);
        CHECK(std::abs(iv - c.ref) < 1e-11);
        CHECK(std::abs(dr - c.ref) < 1e-10);
    }
}

TEST_CASE("oracle, interval and expansion agree on smoothed random instances") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uT(2.0, 6.0), uTy(0.03, 0.3);
    for (int t = 0; t < 8; ++t) {
        TestFunctionSpec s = spec_with(uT(rng), t % 2 ? Profile::bump() : Profile::test());
        s.eta = t % 3 == 0 ? 0.2 : -0.15;
        const double y = uTy(rng) / s.T;
        const long m = t % 3 - 1;
        const cplx ex = expansion_fourier_integral(s, m, y, 1e-11).value;
        const cplx iv = interval_decomposition_integral(s, 0.0, 1.0, y, m, 1e-11).value;
        const cplx dr = direct_horocycle_integral(s, 0.0, 1.0, y, m, 1e-11).value;
        CAPTURE(t);
        CHECK(std::abs(ex - dr) < 1e-9);
        CHECK(std::abs(iv - dr) < 1e-9);
    }
}

TEST_CASE("interval decomposition on a partial segment matches the oracle") {
    TestFunctionSpec s = spec_with(2.5, Profile::test());
    s.eta = 0.2;
    for (auto [a, b] : {std::pair{0.1, 0.45}, std::pair{-0.3, 1.7}}) {
        const cplx iv = interval_decomposition_integral(s, a, b, 0.004, 1, 1e-11).value;
        const cplx dr = direct_horocycle_integral(s, a, b, 0.004, 1, 1e-11).value;
        CHECK(std::abs(iv - dr) < 1e-9);
    }
    CHECK_THROWS_AS(interval_decomposition_integral(s, 0.5, 0.5, 0.01, 0, 1e-9), Error);
    CHECK_THROWS_AS(direct_horocycle_integral(s, 0.0, 1.0, -0.01, 0, 1e-9), Error);
}

TEST_CASE("exact coset integrals add up to the expansion") {
    TestFunctionSpec s = spec_with(3.0, Profile::test());
    const double y = 1.0 / 30.0;
    const long m = 1;
    cplx sum = 0.0;
    for (const auto& rep : double_cosets(s.model, 1, 1.0 / std::sqrt(s.lower_height() * y)))
        sum += y * exact_coset_integral(s, rep, m, y, 1e-13).value;
    CHECK(std::abs(3.0 * sum - kTestP1) < 1e-11);
}

TEST_CASE("main term is the j = 0 part of the sharp expansion") {
    // constant profile has only the j = 0 mode, so the two coincide
    TestFunctionSpec s = spec_with(2.0, Profile::constant());
    const double y = 0.0123 / 2.0;
    CHECK(std::abs(2.0 * main_term(s, 0, y, 1e-12).value - kS_0123) < 1e-11);
    CHECK(coset_A(1.0, 2.0, 0.125) == doctest::Approx(3.0));
    CHECK_THROWS_AS(coset_A(0.0, 2.0, 0.1), Error);
}

TEST_CASE("stationary phase integral decays like T^{-1/2} for a smooth profile") {
    const DoubleCosetRep rep{0, -1, 1, 0, 1};
    double prev = 0.0;
    for (double T : {1e2, 1e3, 1e4}) {
        TestFunctionSpec s = spec_with(T, Profile::test());
        const double I = std::abs(stationary_phase_I(s, rep, 1, 0, 0.1 / T, 1e-12).value);
        if (prev > 0.0) CHECK(prev / I == doctest::Approx(std::sqrt(10.0)).epsilon(0.05));
        prev = I;
    }
    TestFunctionSpec s = spec_with(10.0, Profile::test());
    CHECK_THROWS_AS(stationary_phase_I(s, rep, 0, 0, 0.01), Error);
    // no stationary window once Tyc^2 >= 1
    CHECK(stationary_phase_I(s, rep, 1, 0, 0.2).value == cplx(0.0));
}

TEST_CASE("renormalized pair has equal sides for the sharp indicator") {
    TestFunctionSpec s = spec_with(8.0, Profile::test());
    const auto [a, b] = renormalized_pair(s, 0, 0.01, 2.0, 0.0, 1e-12);
    CHECK(std::abs(a - b) < 1e-10);
    CHECK_THROWS_WITH_AS(renormalized_pair(s, 0, 0.6, 2.0, 0.0), doctest::Contains("Ty < B1^2 - 1/4"), Error);
    CHECK_THROWS_WITH_AS(renormalized_pair(s, 50, 0.01, 2.0, 0.0), doctest::Contains("|m|"), Error);
}

TEST_CASE("full against x-averaged profile") {
    TestFunctionSpec s = spec_with(4.0, Profile::test());
    const auto g = profile_vs_average_gap(s, 0.0, 1.0, 0.002, 0.2, 0.2, 1e-11);
    CHECK(g.gap == doctest::Approx(std::abs(g.full - g.averaged)));
    CHECK(g.gap < 0.02 * std::abs(g.full));
    CHECK_THROWS_WITH_AS(profile_vs_average_gap(s, 0.0, 0.01, 0.002, 0.2, 0.2), doctest::Contains("T^(-3/4+delta)"),
                         Error);
}

TEST_CASE("exp_segment and e_frac") {
    CHECK(std::abs(exp_segment(0, 0.25, 0.75) - 0.5) < 1e-16);
    CHECK(std::abs(exp_segment(3, 0.0, 1.0)) < 1e-15);
    CHECK(std::abs(exp_segment(1, 0.0, 0.5) - cplx(0.0, 1.0 / kPi)) < 1e-15);
    CHECK(std::abs(e_frac(-7, 4) - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(e_frac(i64(1) << 50, 3) - e(1.0 / 3.0)) < 1e-15);
}
