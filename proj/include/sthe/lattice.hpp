#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "sthe/common.hpp"

namespace sthe {

using i64 = std::int64_t;

// Checked integer helpers; overflow raises Error("overflow").
i64 mul_checked(i64 a, i64 b);
i64 add_checked(i64 a, i64 b);
i64 gcd64(i64 a, i64 b);
// Inverse of a modulo m (m >= 1), result in [0, m). Requires gcd(a, m) = 1.
i64 inv_mod(i64 a, i64 m);
i64 floor_div(i64 a, i64 b);
i64 mod_pos(i64 a, i64 m);

// Integer 2x2 matrix of determinant 1, stored with c > 0 or (c == 0 and d > 0).
struct GroupElement {
    i64 a = 1, b = 0, c = 0, d = 1;

    GroupElement() = default;
    GroupElement(i64 a_, i64 b_, i64 c_, i64 d_);

    static GroupElement identity() { return {}; }
    static GroupElement inversion() { return {0, -1, 1, 0}; }
    static GroupElement translation(i64 k) { return {1, k, 0, 1}; }

    GroupElement operator*(const GroupElement& o) const;
    GroupElement inverse() const;
    GroupElement negated() const;  // -g, same element of PSL2
    bool operator==(const GroupElement& o) const = default;
};

// Real matrix of determinant 1 (scaling matrices).
struct RealElement {
    double a = 1, b = 0, c = 0, d = 1;
    RealElement operator*(const RealElement& o) const;
    RealElement inverse() const { return {d, -b, -c, a}; }
};

struct TangentPoint {
    double x = 0.0;
    double y = 1.0;
    double theta = 0.0;

    TangentPoint() = default;
    TangentPoint(double x_, double y_, double theta_);
};

TangentPoint moebius_apply(const GroupElement& g, const TangentPoint& p);
TangentPoint moebius_apply(const RealElement& g, const TangentPoint& p);
// Integer matrix with positive determinant acting projectively (the action of
// W/sqrt(det W)). Used for sigma_j^{-1} gamma when sigma_j is irrational.
TangentPoint moebius_apply_proj(i64 a, i64 b, i64 c, i64 d, const TangentPoint& p);

enum class ModelKind { Modular, Gamma0 };

struct LatticeModel {
    ModelKind kind = ModelKind::Modular;
    i64 level = 1;  // prime N for Gamma0
    double covolume = 2.0 * kPi * kPi / 3.0;
    int cusps = 1;
    double s1 = 0.5;
    double s1p = 0.5;
    double B0 = 1.0;

    static LatticeModel modular();
    // Gamma_0(N) for prime N, cusps 1 = infinity and 2 = zero.
    static LatticeModel gamma0(i64 N, double s1, double s1p);

    RealElement sigma(int cusp) const;
    // Smallest positive lower-left entry of sigma_i^{-1} Gamma sigma_j.
    double min_c(int cusp_i, int cusp_j) const;
    void check_cusp(int cusp) const;
};

// Representative of Gamma_inf \ sigma_j^{-1} Gamma / Gamma_inf, stored as an
// integer matrix W with det W = n; the group element is W / sqrt(n). For the
// modular model and the infinity cusp of Gamma_0(N), n = 1.
struct DoubleCosetRep {
    i64 a = 0, b = 0, c = 0, d = 0;
    i64 n = 1;

    double c_real() const { return static_cast<double>(c) / std::sqrt(static_cast<double>(n)); }
    double a_over_c() const { return static_cast<double>(a) / static_cast<double>(c); }
    double d_over_c() const { return static_cast<double>(d) / static_cast<double>(c); }
    // W * translation(k): same double coset, d shifted by k c.
    DoubleCosetRep translated(i64 k) const;
    TangentPoint apply(const TangentPoint& p) const { return moebius_apply_proj(a, b, c, d, p); }
};

struct Reduction {
    GroupElement gamma;   // element of Gamma
    TangentPoint image;   // sigma_j^{-1} gamma (p), x reduced into [0, 1)
};

Reduction reduce_to_cusp(const LatticeModel& model, int cusp, const TangentPoint& p);

void for_each_double_coset(const LatticeModel& model, int cusp, double c_max,
                           const std::function<void(const DoubleCosetRep&)>& fn);
std::vector<DoubleCosetRep> double_cosets(const LatticeModel& model, int cusp, double c_max);

std::vector<i64> totient_sieve(i64 n_max);

}  // namespace sthe
