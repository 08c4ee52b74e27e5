#include "sthe/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace sthe {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s, const std::string& key) {
    size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw Error("parse", "bad number '" + s + "' for " + key);
    }
    if (pos != s.size()) throw Error("parse", "bad number '" + s + "' for " + key);
    return v;
}

long to_long(const std::string& s, const std::string& key) {
    size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        throw Error("parse", "bad integer '" + s + "' for " + key);
    }
    if (pos != s.size()) throw Error("parse", "bad integer '" + s + "' for " + key);
    return v;
}

bool to_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "off" || s == "no" || s == "0") return false;
    throw Error("parse", "bad boolean '" + s + "' for " + key);
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

struct Cell {
    double T, y, alpha, beta;
    long m;
    Method method;
};

}  // namespace

bool SweepRecord::operator==(const SweepRecord& o) const {
    return model == o.model && profile == o.profile && same(T, o.T) && same(y, o.y) && same(Ty, o.Ty) &&
           same(alpha, o.alpha) && same(beta, o.beta) && m == o.m && method == o.method &&
           same(value_re, o.value_re) && same(value_im, o.value_im) && same(reference, o.reference) &&
           same(abs_err, o.abs_err) && same(runtime_ms, o.runtime_ms);
}

bool record_less(const SweepRecord& a, const SweepRecord& b) {
    if (a.T != b.T) return a.T < b.T;
    if (a.y != b.y) return a.y < b.y;
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.beta != b.beta) return a.beta < b.beta;
    if (a.m != b.m) return a.m < b.m;
    return a.method < b.method;
}

std::vector<std::pair<double, double>> SweepConfig::grid() const {
    std::vector<std::pair<double, double>> out = pairs;
    if (rule) {
        for (int k = k_min; k <= k_max; ++k) out.emplace_back(std::pow(T_base, k), std::pow(y_base, -k));
    }
    return out;
}

SweepConfig parse_config(const std::string& text) {
    SweepConfig cfg;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') throw Error("parse", where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            static const std::vector<std::string> known{"model", "profile", "grid", "segment", "run", "output"};
            if (std::find(known.begin(), known.end(), section) == known.end())
                throw Error("parse", where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("parse", where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section + "." + key;
        if (section.empty()) throw Error("parse", where + ": key outside a section");

        if (full == "model.id") {
            if (val != "modular" && val != "gamma0") throw Error("parse", where + ": model id must be modular or gamma0");
            cfg.model_id = val;
        } else if (full == "model.N") {
            cfg.N = to_long(val, full);
        } else if (full == "model.s1") {
            cfg.s1 = to_double(val, full);
        } else if (full == "model.s1p") {
            cfg.s1p = to_double(val, full);
        } else if (full == "profile.id") {
            cfg.profile_id = val;
        } else if (full == "profile.cusp") {
            cfg.cusp = static_cast<int>(to_long(val, full));
        } else if (full == "grid.pairs") {
            for (const auto& p : split(val, ',')) {
                const auto c = p.find(':');
                if (c == std::string::npos) throw Error("parse", where + ": pair '" + p + "' must be T:y");
                cfg.pairs.emplace_back(to_double(trim(p.substr(0, c)), full), to_double(trim(p.substr(c + 1)), full));
            }
        } else if (full == "grid.rule") {
            if (val != "power") throw Error("parse", where + ": only rule = power is supported");
            cfg.rule = true;
        } else if (full == "grid.k") {
            const auto dots = val.find("..");
            if (dots == std::string::npos) throw Error("parse", where + ": k must be a range a..b");
            cfg.k_min = static_cast<int>(to_long(trim(val.substr(0, dots)), full));
            cfg.k_max = static_cast<int>(to_long(trim(val.substr(dots + 2)), full));
        } else if (full == "grid.T_base") {
            cfg.T_base = to_double(val, full);
        } else if (full == "grid.y_base") {
            cfg.y_base = to_double(val, full);
        } else if (full == "segment.kind") {
            if (val == "full") cfg.segment = SegmentKind::Full;
            else if (val == "fixed") cfg.segment = SegmentKind::Fixed;
            else if (val == "rate") cfg.segment = SegmentKind::Rate;
            else throw Error("parse", where + ": segment kind must be full, fixed or rate");
        } else if (full == "segment.alpha") {
            cfg.alpha = to_double(val, full);
        } else if (full == "segment.beta") {
            cfg.beta = to_double(val, full);
        } else if (full == "segment.rate") {
            cfg.rate = parse_rate_kind(val);
        } else if (full == "segment.offsets") {
            cfg.offsets.clear();
            for (const auto& s : split(val, ',')) cfg.offsets.push_back(to_double(s, full));
        } else if (full == "run.m") {
            cfg.ms.clear();
            for (const auto& s : split(val, ',')) cfg.ms.push_back(to_long(s, full));
        } else if (full == "run.methods") {
            cfg.methods.clear();
            for (const auto& s : split(val, ',')) cfg.methods.push_back(parse_method(s));
        } else if (full == "run.eta") {
            cfg.eta = to_double(val, full);
        } else if (full == "run.eta_tilde") {
            cfg.eta_tilde = to_double(val, full);
        } else if (full == "run.B1") {
            cfg.B1 = to_double(val, full);
        } else if (full == "run.delta" || full == "segment.delta") {
            cfg.delta = to_double(val, full);
        } else if (full == "run.tol") {
            cfg.tol = to_double(val, full);
        } else if (full == "run.threads") {
            cfg.threads = static_cast<int>(to_long(val, full));
        } else if (full == "run.timing") {
            cfg.timing = to_bool(val, full);
        } else if (full == "output.path") {
            cfg.out_path = val;
        } else if (full == "output.format") {
            if (val != "csv" && val != "jsonl") throw Error("parse", where + ": format must be csv or jsonl");
            cfg.format = val;
        } else {
            throw Error("parse", where + ": unknown key " + full);
        }
    }
    return cfg;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("io", "cannot open config " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

LatticeModel make_model(const SweepConfig& cfg) {
    if (cfg.model_id == "gamma0") return LatticeModel::gamma0(cfg.N, cfg.s1, cfg.s1p);
    return LatticeModel::modular();
}

namespace {

std::vector<std::pair<double, double>> segments_for(const SweepConfig& cfg, double T, double y) {
    switch (cfg.segment) {
        case SegmentKind::Full: return {{0.0, 1.0}};
        case SegmentKind::Fixed: return {{cfg.alpha, cfg.beta}};
        default: break;
    }
    const double L = admissible_rate(cfg.rate, T, y, cfg.B1, cfg.delta);
    std::vector<std::pair<double, double>> out;
    for (double a : cfg.offsets) out.emplace_back(a, a + L);
    return out;
}

}  // namespace

std::vector<std::string> validate_config(const SweepConfig& cfg) {
    std::vector<std::string> errs;
    LatticeModel model;
    try {
        model = make_model(cfg);
        model.check_cusp(cfg.cusp);
    } catch (const Error& e) {
        errs.push_back(std::string("model: ") + e.what());
        return errs;
    }
    try {
        Profile::by_name(cfg.profile_id);
    } catch (const Error& e) {
        errs.push_back(std::string("profile: ") + e.what());
    }
    const double eb = eta_bound(model.B0, cfg.B1);
    if (!(cfg.B1 > model.B0)) errs.push_back("B1 > B0 violated (B1 = " + fmt(cfg.B1) + ")");
    if (std::abs(cfg.eta) > eb) errs.push_back("|eta| <= min((B1-B0)/2, 1/4) violated (eta = " + fmt(cfg.eta) + ")");
    if (std::abs(cfg.eta_tilde) > eb)
        errs.push_back("|eta~| <= min((B1-B0)/2, 1/4) violated (eta~ = " + fmt(cfg.eta_tilde) + ")");
    if (!(cfg.delta > 0.0 && cfg.delta <= 0.5)) errs.push_back("0 < delta <= 1/2 violated");
    if (!(cfg.tol > 0.0)) errs.push_back("tol > 0 violated");
    if (cfg.threads < 1) errs.push_back("threads >= 1 violated");
    if (cfg.rule && cfg.k_min > cfg.k_max) errs.push_back("k_min <= k_max violated");
    if (cfg.segment == SegmentKind::Fixed && !(cfg.alpha < cfg.beta)) errs.push_back("alpha < beta violated");
    const bool whole = cfg.segment == SegmentKind::Full ||
                       (cfg.segment == SegmentKind::Fixed && std::abs(cfg.beta - cfg.alpha - std::round(cfg.beta - cfg.alpha)) < 1e-12 &&
                        std::round(cfg.beta - cfg.alpha) >= 1.0);
    for (Method me : cfg.methods)
        if (me == Method::Expansion && !whole)
            errs.push_back("expansion method needs beta - alpha to be a whole number of periods");

    for (const auto& [T, y] : cfg.grid()) {
        const std::string at = "(T = " + fmt(T) + ", y = " + fmt(y) + "): ";
        if (!(T > 0.0 && y > 0.0)) {
            errs.push_back(at + "T > 0 and y > 0 violated");
            continue;
        }
        if (!(T >= cfg.B1)) errs.push_back(at + "T >= B1 violated");
        if (!(T - eb > y)) errs.push_back(at + "T - min((B1-B0)/2, 1/4) > y violated");
        if (cfg.segment == SegmentKind::Rate && cfg.rate == RateKind::Effective) {
            if (!(T * y < 0.75)) errs.push_back(at + "Ty < 3/4 violated");
            if (cfg.eta == 0.0) errs.push_back(at + "eta != 0 required for the effective rate");
        }
    }
    return errs;
}

void parallel_for(size_t n, int threads, const std::function<void(size_t)>& f) {
    const size_t workers = std::max<size_t>(1, std::min<size_t>(n, static_cast<size_t>(std::max(1, threads))));
    if (workers == 1) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::mutex mu;
    std::exception_ptr first;
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            try {
                for (size_t i = next++; i < n; i = next++) f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first) first = std::current_exception();
                next = n;
            }
        });
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

namespace {

SweepRecord eval_cell(const TestFunctionSpec& spec, const Cell& cell, cplx limit, double tol, bool timing) {
    SweepRecord r;
    r.model = spec.model.kind == ModelKind::Modular ? "modular" : "gamma0_" + std::to_string(spec.model.level);
    r.profile = spec.profile.name();
    r.T = cell.T;
    r.y = cell.y;
    r.Ty = cell.T * cell.y;
    r.alpha = cell.alpha;
    r.beta = cell.beta;
    r.m = cell.m;
    r.method = method_name(cell.method);
    const double L = cell.beta - cell.alpha;
    const cplx ref = limit * exp_segment(cell.m, cell.alpha, cell.beta) / L;
    r.reference = std::abs(ref.imag()) > 1e-15 ? std::abs(ref) : ref.real();
    const double t0 = now_ms();
    try {
        cplx v;
        const double scale = cell.T / L;
        switch (cell.method) {
            case Method::Oracle:
                v = scale * direct_horocycle_integral(spec, cell.alpha, cell.beta, cell.y, cell.m, tol / scale).value;
                break;
            case Method::Interval:
                v = scale * interval_decomposition_integral(spec, cell.alpha, cell.beta, cell.y, cell.m, tol / scale).value;
                break;
            case Method::Expansion:
                v = cell.T * expansion_fourier_integral(spec, cell.m, cell.y, tol / cell.T).value;
                break;
        }
        r.value_re = v.real();
        r.value_im = v.imag();
        r.abs_err = std::abs(v - ref);
    } catch (const std::exception& e) {
        std::cerr << "cell (T = " << fmt(cell.T) << ", y = " << fmt(cell.y) << ", m = " << cell.m << ", "
                  << r.method << ") failed: " << e.what() << "\n";
        r.value_re = r.value_im = r.abs_err = kNaN;
    }
    r.runtime_ms = timing ? now_ms() - t0 : 0.0;
    return r;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    const auto errs = validate_config(cfg);
    if (!errs.empty()) {
        std::string msg = "invalid sweep configuration:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw Error("precondition", msg);
    }
    const LatticeModel model = make_model(cfg);
    Profile profile = Profile::by_name(cfg.profile_id);
    const cplx limit = cfg.eta == 0.0 ? limit_value(model, profile) : cplx(0.0);

    std::vector<Cell> cells;
    for (const auto& [T, y] : cfg.grid())
        for (const auto& [a, b] : segments_for(cfg, T, y))
            for (long m : cfg.ms)
                for (Method me : cfg.methods) cells.push_back({T, y, a, b, m, me});

    std::vector<SweepRecord> out(cells.size());
    parallel_for(cells.size(), cfg.threads, [&](size_t i) {
        TestFunctionSpec spec;
        spec.T = cells[i].T;
        spec.eta = cfg.eta;
        spec.B1 = cfg.B1;
        spec.profile = profile;
        spec.cusp = cfg.cusp;
        spec.model = model;
        const cplx lim = cfg.eta == 0.0 ? limit : mean_value_Q(cells[i].T, cfg.eta, model, profile, cfg.B1);
        out[i] = eval_cell(spec, cells[i], lim, cfg.tol, cfg.timing);
    });
    std::stable_sort(out.begin(), out.end(), record_less);
    return out;
}

std::vector<SweepRecord> run_example(int threads, bool timing) {
    SweepConfig cfg;
    cfg.pairs = {{10.0, 0.025}, {100.0, 0.0025}, {1000.0, 0.00025}};
    cfg.methods = {Method::Oracle, Method::Interval, Method::Expansion};
    cfg.tol = 1e-10;
    cfg.threads = threads;
    cfg.timing = timing;
    auto recs = run_sweep(cfg);
    const double ref = std::sqrt(3.0) / 2.0;
    for (auto& r : recs) {
        r.reference = ref;
        r.abs_err = std::abs(cplx(r.value_re, r.value_im) - ref);
    }
    return recs;
}

double identity_partial_sum(long x) {
    if (x < 1) throw Error("domain", "identity sum needs x >= 1");
    const auto phi = totient_sieve(x);
    const long double X = x;
    long double s = 0.0L;
    for (long c = 1; c <= x; ++c) {
        const long double cc = c;
        s += static_cast<long double>(phi[c - 1]) / cc * std::sqrt((X - cc) * (X + cc));
    }
    return static_cast<double>(2.0L * s / (X * X));
}

std::vector<SweepRecord> run_identity(long x_max, bool timing) {
    if (x_max < 2) throw Error("domain", "identity needs x_max >= 2");
    // powers of ten from 100 up to x_max, then x_max itself
    std::vector<long> xs;
    for (long x = 100; x < x_max; x *= 10) xs.push_back(x);
    xs.push_back(x_max);
    std::vector<SweepRecord> out;
    for (long x : xs) {
        SweepRecord r;
        r.model = "modular";
        r.profile = "constant";
        // S(x) is the full-circle value at T = x, y = 1/x^3, so Ty = 1/x^2.
        r.T = static_cast<double>(x);
        r.y = 1.0 / (r.T * r.T * r.T);
        r.Ty = 1.0 / (r.T * r.T);
        r.alpha = 0.0;
        r.beta = 1.0;
        r.m = 0;
        r.method = "identity";
        const double t0 = now_ms();
        r.value_re = identity_partial_sum(x);
        r.value_im = 0.0;
        r.runtime_ms = timing ? now_ms() - t0 : 0.0;
        r.reference = 3.0 / kPi;
        r.abs_err = std::abs(r.value_re - r.reference);
        out.push_back(r);
    }
    return out;
}

std::string format_records(const std::vector<SweepRecord>& records, const std::string& format) {
    std::ostringstream os;
    if (format == "csv") {
        os << kCsvHeader << "\n";
        for (const auto& r : records)
            os << r.model << ',' << r.profile << ',' << fmt(r.T) << ',' << fmt(r.y) << ',' << fmt(r.Ty) << ','
               << fmt(r.alpha) << ',' << fmt(r.beta) << ',' << r.m << ',' << r.method << ',' << fmt(r.value_re) << ','
               << fmt(r.value_im) << ',' << fmt(r.reference) << ',' << fmt(r.abs_err) << ',' << fmt(r.runtime_ms)
               << "\n";
    } else if (format == "jsonl" || format == "json-lines") {
        for (const auto& r : records) {
            nlohmann::ordered_json j;
            j["model"] = r.model;
            j["profile"] = r.profile;
            j["T"] = r.T;
            j["y"] = r.y;
            j["Ty"] = r.Ty;
            j["alpha"] = r.alpha;
            j["beta"] = r.beta;
            j["m"] = r.m;
            j["method"] = r.method;
            j["value_re"] = r.value_re;
            j["value_im"] = r.value_im;
            j["reference"] = r.reference;
            j["abs_err"] = r.abs_err;
            j["runtime_ms"] = r.runtime_ms;
            os << j.dump() << "\n";
        }
    } else {
        throw Error("parse", "unknown output format '" + format + "' (use csv or jsonl)");
    }
    return os.str();
}

void emit(const std::vector<SweepRecord>& records, const std::string& format, const std::string& path) {
    const std::string text = format_records(records, format);
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("io", "cannot write " + path);
    f << text;
    if (!f) throw Error("io", "write failed for " + path);
}

std::vector<SweepRecord> parse_records(const std::string& text, const std::string& format) {
    std::vector<SweepRecord> out;
    std::istringstream in(text);
    std::string line;
    if (format == "csv") {
        if (!std::getline(in, line) || line != kCsvHeader) throw Error("parse", "missing or unexpected CSV header");
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) f.push_back(cell);
            if (f.size() != 14) throw Error("parse", "CSV row has " + std::to_string(f.size()) + " fields, want 14");
            SweepRecord r;
            r.model = f[0];
            r.profile = f[1];
            r.T = std::strtod(f[2].c_str(), nullptr);
            r.y = std::strtod(f[3].c_str(), nullptr);
            r.Ty = std::strtod(f[4].c_str(), nullptr);
            r.alpha = std::strtod(f[5].c_str(), nullptr);
            r.beta = std::strtod(f[6].c_str(), nullptr);
            r.m = std::strtol(f[7].c_str(), nullptr, 10);
            r.method = f[8];
            r.value_re = std::strtod(f[9].c_str(), nullptr);
            r.value_im = std::strtod(f[10].c_str(), nullptr);
            r.reference = std::strtod(f[11].c_str(), nullptr);
            r.abs_err = std::strtod(f[12].c_str(), nullptr);
            r.runtime_ms = std::strtod(f[13].c_str(), nullptr);
            out.push_back(r);
        }
    } else if (format == "jsonl" || format == "json-lines") {
        auto num = [](const nlohmann::json& j, const char* k) {
            const auto& v = j.at(k);
            return v.is_null() ? kNaN : v.get<double>();
        };
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line);
            SweepRecord r;
            r.model = j.at("model").get<std::string>();
            r.profile = j.at("profile").get<std::string>();
            r.T = num(j, "T");
            r.y = num(j, "y");
            r.Ty = num(j, "Ty");
            r.alpha = num(j, "alpha");
            r.beta = num(j, "beta");
            r.m = j.at("m").get<long>();
            r.method = j.at("method").get<std::string>();
            r.value_re = num(j, "value_re");
            r.value_im = num(j, "value_im");
            r.reference = num(j, "reference");
            r.abs_err = num(j, "abs_err");
            r.runtime_ms = num(j, "runtime_ms");
            out.push_back(r);
        }
    } else {
        throw Error("parse", "unknown format '" + format + "'");
    }
    return out;
}

}  // namespace sthe
