#include <cmath>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "sthe/sweep.hpp"

using namespace sthe;

namespace {

struct Common {
    std::string out;
    std::string format = "csv";
    double tol = 1e-9;
    int threads = 1;
    unsigned seed = 1;
    bool timing = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "output file (stdout when omitted)");
    sub->add_option("--format", c.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--tol", c.tol, "absolute quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "seed for random instances");
    sub->add_flag("--timing", c.timing, "fill runtime_ms (output is then not reproducible)");
}

SweepRecord base_record(const TestFunctionSpec& spec, double y, long m, const std::string& method) {
    SweepRecord r;
    r.model = spec.model.kind == ModelKind::Modular ? "modular" : "gamma0_" + std::to_string(spec.model.level);
    r.profile = spec.profile.name();
    r.T = spec.T;
    r.y = y;
    r.Ty = spec.T * y;
    r.alpha = 0.0;
    r.beta = 1.0;
    r.m = m;
    r.method = method;
    return r;
}

double ms_since(std::chrono::steady_clock::time_point t0, bool timing) {
    if (!timing) return 0.0;
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

// I(T, 1) on the c = 1 coset at fixed Ty.
std::vector<SweepRecord> statphase(const std::string& profile, double Ty, const std::vector<double>& Ts,
                                   const Common& c) {
    std::vector<SweepRecord> out;
    const DoubleCosetRep rep{0, -1, 1, 0, 1};
    for (double T : Ts) {
        TestFunctionSpec spec;
        spec.T = T;
        spec.profile = Profile::by_name(profile);
        const double y = Ty / T;
        const auto t0 = std::chrono::steady_clock::now();
        const auto I = stationary_phase_I(spec, rep, 1, 0, y, c.tol);
        auto r = base_record(spec, y, 0, "statphase");
        r.value_re = I.value.real();
        r.value_im = I.value.imag();
        r.reference = 0.0;
        r.abs_err = std::abs(I.value);
        r.runtime_ms = ms_since(t0, c.timing);
        out.push_back(r);
    }
    return out;
}

// Seeded random instances; each yields an oracle row and an expansion row.
// The reference column holds |oracle| and abs_err the complex distance to it.
std::vector<SweepRecord> compare(int count, const std::string& profile, const Common& c) {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> uT(2.0, 12.0), uTy(0.02, 0.2);
    std::uniform_int_distribution<int> um(-1, 1);
    struct Inst {
        double T, y;
        long m;
    };
    std::vector<Inst> inst;
    for (int i = 0; i < count; ++i) {
        const double T = uT(rng), Ty = uTy(rng);
        inst.push_back({T, Ty / T, um(rng)});
    }
    std::vector<SweepRecord> out(2 * inst.size());
    parallel_for(inst.size(), c.threads, [&](size_t i) {
        TestFunctionSpec spec;
        spec.T = inst[i].T;
        spec.profile = Profile::by_name(profile);
        const auto t0 = std::chrono::steady_clock::now();
        const auto o = direct_horocycle_integral(spec, 0.0, 1.0, inst[i].y, inst[i].m, c.tol);
        const double t_oracle = ms_since(t0, c.timing);
        const auto t1 = std::chrono::steady_clock::now();
        const auto ex = expansion_fourier_integral(spec, inst[i].m, inst[i].y, c.tol);
        const double t_exp = ms_since(t1, c.timing);
        auto ro = base_record(spec, inst[i].y, inst[i].m, "oracle");
        ro.value_re = o.value.real();
        ro.value_im = o.value.imag();
        ro.reference = std::abs(o.value);
        ro.abs_err = 0.0;
        ro.runtime_ms = t_oracle;
        auto re = base_record(spec, inst[i].y, inst[i].m, "expansion");
        re.value_re = ex.value.real();
        re.value_im = ex.value.imag();
        re.reference = std::abs(o.value);
        re.abs_err = std::abs(ex.value - o.value);
        re.runtime_ms = t_exp;
        out[2 * i] = ro;
        out[2 * i + 1] = re;
    });
    std::stable_sort(out.begin(), out.end(), record_less);
    return out;
}

std::vector<SweepRecord> envelope(const std::vector<double>& Ts, const std::vector<double>& Tys, double eta,
                                  double B1, double delta) {
    std::vector<SweepRecord> out;
    for (double T : Ts)
        for (double Ty : Tys) {
            EnvelopeInputs in;
            in.T = T;
            in.y = Ty / T;
            in.eta = eta;
            in.B1 = B1;
            in.delta = delta;
            SweepRecord r;
            r.model = "modular";
            r.profile = "-";
            r.T = T;
            r.y = in.y;
            r.Ty = Ty;
            r.alpha = 0.0;
            r.beta = 1.0;
            r.method = "envelope";
            r.value_re = error_envelope_E(in);
            r.value_im = 0.0;
            // reference column carries the (Ty/B1)^{delta/2} companion term
            r.reference = std::pow(Ty / B1, delta / 2.0);
            r.abs_err = r.value_re + r.reference;
            out.push_back(r);
        }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shrinking-target horocycle experiments"};
    app.require_subcommand(1);
    Common c;

    auto* ex = app.add_subcommand("example", "Ty = 1/4 example at T = 10, 100, 1000 with all three methods");
    add_common(ex, c);

    long x_max = 10000;
    auto* id = app.add_subcommand("identity", "totient partial sums S(x) against 3/pi");
    id->add_option("--x-max", x_max, "largest x")->check(CLI::Range(2L, 2000000000L));
    add_common(id, c);

    std::string config;
    auto* sw = app.add_subcommand("sweep", "run a configured sweep");
    sw->add_option("--config", config, "sweep configuration file")->required()->check(CLI::ExistingFile);
    add_common(sw, c);
    bool check_only = false;
    sw->add_flag("--check", check_only, "validate the configuration and exit");

    std::string sp_profile = "test";
    double sp_Ty = 0.1;
    std::vector<double> sp_T{1e2, 1e3, 1e4, 1e5};
    auto* sp = app.add_subcommand("statphase", "decay of I(T, 1) at fixed Ty");
    sp->add_option("--profile", sp_profile, "profile id");
    sp->add_option("--Ty", sp_Ty, "fixed product Ty");
    sp->add_option("--T", sp_T, "values of T");
    add_common(sp, c);

    int cmp_count = 20;
    std::string cmp_profile = "test";
    auto* cm = app.add_subcommand("compare", "oracle against expansion on random instances");
    cm->add_option("--count", cmp_count, "number of instances");
    cm->add_option("--profile", cmp_profile, "profile id");
    add_common(cm, c);

    std::vector<double> env_T{10, 100}, env_Ty{1e-3, 1e-4, 1e-5, 1e-6};
    double env_eta = 0.25, env_B1 = 2.0, env_delta = 0.1;
    auto* en = app.add_subcommand("envelope", "table of the envelope E");
    en->add_option("--T", env_T, "values of T");
    en->add_option("--Ty", env_Ty, "values of Ty");
    en->add_option("--eta", env_eta, "smoothing width");
    en->add_option("--B1", env_B1, "upper cusp height");
    en->add_option("--delta", env_delta, "exponent delta");
    add_common(en, c);

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<SweepRecord> recs;
        if (ex->parsed()) {
            recs = run_example(c.threads, c.timing);
        } else if (id->parsed()) {
            recs = run_identity(x_max, c.timing);
        } else if (sw->parsed()) {
            SweepConfig cfg = load_config(config);
            if (sw->count("--threads")) cfg.threads = c.threads;
            if (sw->count("--tol")) cfg.tol = c.tol;
            if (sw->count("--timing")) cfg.timing = true;
            if (sw->count("--out")) cfg.out_path = c.out;
            if (sw->count("--format")) cfg.format = c.format;
            const auto errs = validate_config(cfg);
            if (!errs.empty()) {
                std::cerr << "invalid configuration:\n";
                for (const auto& e : errs) std::cerr << "  " << e << "\n";
                return 2;
            }
            if (check_only) {
                std::cerr << "configuration ok: " << cfg.grid().size() << " grid points\n";
                return 0;
            }
            emit(run_sweep(cfg), cfg.format, cfg.out_path);
            return 0;
        } else if (sp->parsed()) {
            recs = statphase(sp_profile, sp_Ty, sp_T, c);
        } else if (cm->parsed()) {
            recs = compare(cmp_count, cmp_profile, c);
        } else if (en->parsed()) {
            recs = envelope(env_T, env_Ty, env_eta, env_B1, env_delta);
        }
        emit(recs, c.format, c.out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
