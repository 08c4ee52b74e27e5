#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sthe/sweep.hpp"

namespace py = pybind11;
using namespace sthe;

namespace {

py::dict record_dict(const SweepRecord& r) {
    py::dict d;
    d["model"] = r.model;
    d["profile"] = r.profile;
    d["T"] = r.T;
    d["y"] = r.y;
    d["Ty"] = r.Ty;
    d["alpha"] = r.alpha;
    d["beta"] = r.beta;
    d["m"] = r.m;
    d["method"] = r.method;
    d["value"] = cplx(r.value_re, r.value_im);
    d["reference"] = r.reference;
    d["abs_err"] = r.abs_err;
    d["runtime_ms"] = r.runtime_ms;
    return d;
}

py::list records(const std::vector<SweepRecord>& recs) {
    py::list out;
    for (const auto& r : recs) out.append(record_dict(r));
    return out;
}

}  // namespace

PYBIND11_MODULE(sthe, m) {
    m.doc() = "Shrinking-target horocycle integrals on modular and Hecke congruence surfaces";

    static py::exception<Error> exc(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(exc, e.what());
        }
    });

    py::class_<QuadResult>(m, "QuadResult")
        .def_readonly("value", &QuadResult::value)
        .def_readonly("error", &QuadResult::error)
        .def_readonly("intervals", &QuadResult::intervals)
        .def_readonly("converged", &QuadResult::converged)
        .def("__repr__", [](const QuadResult& r) {
            return "QuadResult(value=" + py::repr(py::cast(r.value)).cast<std::string>() +
                   ", error=" + std::to_string(r.error) + ")";
        });

    py::class_<LatticeModel>(m, "LatticeModel")
        .def_static("modular", &LatticeModel::modular)
        .def_static("gamma0", &LatticeModel::gamma0, py::arg("N"), py::arg("s1") = 0.5, py::arg("s1p") = 0.5)
        .def_readonly("level", &LatticeModel::level)
        .def_readonly("covolume", &LatticeModel::covolume)
        .def_readonly("cusps", &LatticeModel::cusps)
        .def_readonly("B0", &LatticeModel::B0);

    py::class_<Profile>(m, "Profile")
        .def_static("constant", &Profile::constant, py::arg("value") = cplx(1.0))
        .def_static("test", &Profile::test)
        .def_static("bump", &Profile::bump)
        .def_static("by_name", &Profile::by_name)
        .def_static("parse", &Profile::parse, py::arg("text"), py::arg("name") = "file")
        .def_static("load", &Profile::load)
        .def("__call__", &Profile::eval, py::arg("x"), py::arg("theta"))
        .def("mode", &Profile::mode, py::arg("j"), py::arg("theta"))
        .def("mode_indices", &Profile::mode_indices)
        .def("averaged", &Profile::averaged)
        .def_property_readonly("name", &Profile::name);

    py::enum_<Variant>(m, "Variant")
        .value("Full", Variant::Full)
        .value("Averaged", Variant::Averaged)
        .value("Renormalized", Variant::Renormalized);

    py::class_<TestFunctionSpec>(m, "TestFunctionSpec")
        .def(py::init([](double T, double eta, double B1, Profile profile, int cusp, LatticeModel model,
                         Variant variant) {
                 TestFunctionSpec s;
                 s.T = T;
                 s.eta = eta;
                 s.B1 = B1;
                 s.profile = std::move(profile);
                 s.cusp = cusp;
                 s.model = std::move(model);
                 s.variant = variant;
                 s.validate();
                 return s;
             }),
             py::arg("T"), py::arg("eta") = 0.0, py::arg("B1") = 2.0, py::arg("profile") = Profile::constant(),
             py::arg("cusp") = 1, py::arg("model") = LatticeModel::modular(), py::arg("variant") = Variant::Full)
        .def_readwrite("T", &TestFunctionSpec::T)
        .def_readwrite("eta", &TestFunctionSpec::eta)
        .def_readwrite("B1", &TestFunctionSpec::B1)
        .def_readwrite("cusp", &TestFunctionSpec::cusp)
        .def("phi", [](const TestFunctionSpec& s, double x, double y, double theta) {
            return eval_phi(s, TangentPoint(x, y, theta));
        }, py::arg("x"), py::arg("y"), py::arg("theta") = 0.0);

    py::enum_<Method>(m, "Method")
        .value("Oracle", Method::Oracle)
        .value("Interval", Method::Interval)
        .value("Expansion", Method::Expansion);
    py::enum_<RateKind>(m, "RateKind")
        .value("Qualitative", RateKind::Qualitative)
        .value("Effective", RateKind::Effective);

    m.def("direct_horocycle_integral", &direct_horocycle_integral, py::arg("spec"), py::arg("alpha"),
          py::arg("beta"), py::arg("y"), py::arg("m") = 0, py::arg("tol") = 1e-9,
          py::call_guard<py::gil_scoped_release>());
    m.def("interval_decomposition_integral", &interval_decomposition_integral, py::arg("spec"), py::arg("alpha"),
          py::arg("beta"), py::arg("y"), py::arg("m") = 0, py::arg("tol") = 1e-9,
          py::call_guard<py::gil_scoped_release>());
    m.def("expansion_fourier_integral", &expansion_fourier_integral, py::arg("spec"), py::arg("m"), py::arg("y"),
          py::arg("tol") = 1e-9, py::call_guard<py::gil_scoped_release>());
    m.def("main_term", &main_term, py::arg("spec"), py::arg("m"), py::arg("y"), py::arg("tol") = 1e-9);
    m.def("stationary_phase_I", [](const TestFunctionSpec& spec, int j, long mm, double y, double tol) {
        return stationary_phase_I(spec, DoubleCosetRep{0, -1, 1, 0, 1}, j, mm, y, tol);
    }, "I(T, j) on the c = 1 coset", py::arg("spec"), py::arg("j") = 1, py::arg("m") = 0, py::arg("y"),
          py::arg("tol") = 1e-9);
    m.def("renormalized_pair", &renormalized_pair, py::arg("spec"), py::arg("m"), py::arg("y"), py::arg("B1"),
          py::arg("eta_tilde"), py::arg("tol") = 1e-9, py::arg("delta") = 0.1);
    m.def("sthe_lhs", &sthe_lhs, py::arg("spec"), py::arg("alpha"), py::arg("beta"), py::arg("y"),
          py::arg("method") = Method::Interval, py::arg("tol") = 1e-9, py::call_guard<py::gil_scoped_release>());

    m.def("limit_value", &limit_value, py::arg("model"), py::arg("profile"));
    m.def("mean_value_Q", &mean_value_Q, py::arg("T"), py::arg("eta"), py::arg("model"), py::arg("profile"),
          py::arg("B1") = 2.0);
    m.def("error_envelope_E", [](double T, double y, double eta, double alpha, double beta, double B1, double s1,
                                 double s1p, double delta) {
        EnvelopeInputs in;
        in.T = T;
        in.y = y;
        in.eta = eta;
        in.alpha = alpha;
        in.beta = beta;
        in.B1 = B1;
        in.s1 = s1;
        in.s1p = s1p;
        in.delta = delta;
        return error_envelope_E(in);
    }, py::arg("T"), py::arg("y"), py::arg("eta"), py::arg("alpha") = 0.0, py::arg("beta") = 1.0,
          py::arg("B1") = 2.0, py::arg("s1") = 0.5, py::arg("s1p") = 0.5, py::arg("delta") = 0.1);
    m.def("admissible_rate", &admissible_rate, py::arg("kind"), py::arg("T"), py::arg("y"), py::arg("B1") = 2.0,
          py::arg("delta") = 0.1);

    m.def("totient_sieve", &totient_sieve, py::arg("n_max"));
    m.def("identity_partial_sum", &identity_partial_sum, py::arg("x"));
    m.def("reduce_to_cusp", [](const LatticeModel& model, int cusp, double x, double y, double theta) {
        const Reduction r = reduce_to_cusp(model, cusp, TangentPoint(x, y, theta));
        return py::make_tuple(r.image.x, r.image.y, r.image.theta);
    }, py::arg("model"), py::arg("cusp"), py::arg("x"), py::arg("y"), py::arg("theta") = 0.0);

    m.def("run_example", [](int threads) {
        std::vector<SweepRecord> recs;
        {
            py::gil_scoped_release rel;
            recs = run_example(threads);
        }
        return records(recs);
    }, py::arg("threads") = 1);
    m.def("run_sweep", [](const std::string& config_text, int threads) {
        SweepConfig cfg = parse_config(config_text);
        if (threads > 0) cfg.threads = threads;
        const auto errs = validate_config(cfg);
        if (!errs.empty()) {
            std::string msg;
            for (const auto& e : errs) msg += (msg.empty() ? "" : "; ") + e;
            throw Error("precondition", msg);
        }
        std::vector<SweepRecord> recs;
        {
            py::gil_scoped_release rel;
            recs = run_sweep(cfg);
        }
        return records(recs);
    }, "run a sweep given the text of a configuration file", py::arg("config_text"), py::arg("threads") = 0);
}
