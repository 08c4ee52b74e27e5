#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sthe/effective.hpp"

namespace sthe {

struct SweepRecord {
    std::string model;
    std::string profile;
    double T = 0, y = 0, Ty = 0;
    double alpha = 0, beta = 1;
    long m = 0;
    std::string method;
    double value_re = 0, value_im = 0;
    double reference = 0;
    double abs_err = 0;
    double runtime_ms = 0;

    bool operator==(const SweepRecord& o) const;
};

// Total order used before emission: (T, y, alpha, beta, m, method).
bool record_less(const SweepRecord& a, const SweepRecord& b);

enum class SegmentKind { Full, Fixed, Rate };

struct SweepConfig {
    std::string model_id = "modular";
    long N = 2;
    double s1 = 0.5, s1p = 0.5;
    std::string profile_id = "constant";
    int cusp = 1;

    std::vector<std::pair<double, double>> pairs;  // explicit (T, y)
    bool rule = false;                             // y = y_base^{-k}, T = T_base^k
    int k_min = 0, k_max = -1;
    double T_base = 2.0, y_base = 4.0;

    SegmentKind segment = SegmentKind::Full;
    double alpha = 0.0, beta = 1.0;
    RateKind rate = RateKind::Qualitative;
    std::vector<double> offsets{0.0};  // left ends of rate segments

    std::vector<long> ms{0};
    std::vector<Method> methods{Method::Expansion};
    double eta = 0.0, eta_tilde = 0.0, B1 = 2.0, delta = 0.1;
    double tol = 1e-9;
    int threads = 1;
    bool timing = false;

    std::string out_path;
    std::string format = "csv";

    // All (T, y) cells in generation order.
    std::vector<std::pair<double, double>> grid() const;
};

SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);
// Each violated precondition, naming the inequality.
std::vector<std::string> validate_config(const SweepConfig& cfg);

LatticeModel make_model(const SweepConfig& cfg);

std::vector<SweepRecord> run_example(int threads = 1, bool timing = false);
// S(x) = 2 sum_{c <= x} phi(c)/c sqrt(x^2 - c^2) / x^2
double identity_partial_sum(long x);
std::vector<SweepRecord> run_identity(long x_max, bool timing = false);
std::vector<SweepRecord> run_sweep(const SweepConfig& cfg);

std::string format_records(const std::vector<SweepRecord>& records, const std::string& format);
void emit(const std::vector<SweepRecord>& records, const std::string& format, const std::string& path);
std::vector<SweepRecord> parse_records(const std::string& text, const std::string& format);

inline const char* kCsvHeader =
    "model,profile,T,y,Ty,alpha,beta,m,method,value_re,value_im,reference,abs_err,runtime_ms";

// Runs f(i) for i in [0, n) on up to `threads` workers.
void parallel_for(size_t n, int threads, const std::function<void(size_t)>& f);

}  // namespace sthe
