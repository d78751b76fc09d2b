#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "floqgap/lab.hpp"
#include "floqgap/orbits.hpp"
#include "floqgap/truncated.hpp"

namespace py = pybind11;
using namespace floqgap;

namespace {

FloquetSpec spec_of(int n, double gamma, const std::string& pattern, uint64_t seed, bool resample = false) {
    FloquetSpec s = make_spec(n, gamma, pattern_from_spec(pattern, n), seed);
    s.resample_each_period = resample;
    return s;
}

py::dict gap_dict(const GapEstimate& e) {
    py::dict d;
    d["delta"] = e.delta;
    d["method"] = to_string(e.method);
    d["iterations"] = e.iterations;
    d["residual"] = e.residual;
    d["converged"] = e.converged;
    d["degenerate"] = e.degenerate;
    d["weight_histogram"] = e.weight_histogram;
    return d;
}

py::dict formula_dict(const FormulaResult& f) {
    py::dict d;
    d["delta"] = f.delta;
    d["log_sum"] = std::vector<double>{f.log_sum[0], f.log_sum[1]};
    d["degenerate"] = f.degenerate;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Liouvillian gaps of dissipative Floquet Clifford circuits with Haar-doped sites";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("pattern", [](const std::string& spec, int n) { return pattern_from_spec(spec, n).literal(); }, py::arg("spec"),
          py::arg("n"));

    m.def(
        "gap",
        [](int n, double gamma, const std::string& pattern, uint64_t seed, const std::string& method, double tol,
           bool resample_each_period, int64_t max_periods) {
            PowerOptions opt;
            opt.tol = tol;
            opt.max_periods = max_periods;
            const FloquetSpec s = spec_of(n, gamma, pattern, seed, resample_each_period);
            py::gil_scoped_release nogil;
            const GapEstimate e = compute_gap(s, parse_gap_method(method), opt);
            py::gil_scoped_acquire gil;
            return gap_dict(e);
        },
        py::arg("n"), py::arg("gamma"), py::arg("pattern") = "undoped", py::arg("seed") = 0, py::arg("method") = "auto",
        py::arg("tol") = 1e-10, py::arg("resample_each_period") = false, py::arg("max_periods") = 200000);

    m.def(
        "ensemble",
        [](int n, double gamma, const std::string& pattern, int realizations, uint64_t seed, const std::string& method) {
            const FloquetSpec s = spec_of(n, gamma, pattern, 0);
            EnsembleResult r;
            {
                py::gil_scoped_release nogil;
                r = ensemble_gap(s, realizations, seed, parse_gap_method(method));
            }
            py::dict d;
            d["mean"] = r.mean;
            d["stderr"] = r.stderr_;
            d["ok"] = r.ok;
            d["failed"] = r.failed;
            d["seeds"] = r.seeds;
            std::vector<double> deltas;
            for (const auto& e : r.estimates) deltas.push_back(e.delta);
            d["deltas"] = deltas;
            return d;
        },
        py::arg("n"), py::arg("gamma"), py::arg("pattern") = "full", py::arg("realizations") = 1, py::arg("seed") = 0,
        py::arg("method") = "auto");

    m.def(
        "spectrum",
        [](int n, double gamma, const std::string& pattern, uint64_t seed) { return dense_spectrum(spec_of(n, gamma, pattern, seed)); },
        py::arg("n"), py::arg("gamma"), py::arg("pattern") = "undoped", py::arg("seed") = 0);

    m.def(
        "apply_channel",
        [](int n, double gamma, const std::string& pattern, uint64_t seed, const std::vector<double>& state, int64_t period) {
            return apply_channel(spec_of(n, gamma, pattern, seed), state, period);
        },
        py::arg("n"), py::arg("gamma"), py::arg("pattern"), py::arg("seed"), py::arg("state"), py::arg("period") = 0);

    m.def(
        "weight_distribution",
        [](int n, double gamma, const std::string& pattern, uint64_t seed) {
            return gap_dict(gap_eigenmode_weights(spec_of(n, gamma, pattern, seed)));
        },
        py::arg("n"), py::arg("gamma"), py::arg("pattern") = "undoped", py::arg("seed") = 0);

    m.def(
        "fully_doped_formula",
        [](int n, double gamma, uint64_t seed) { return formula_dict(fully_doped_formula(spec_of(n, gamma, "full", seed))); },
        py::arg("n"), py::arg("gamma"), py::arg("seed") = 0);
    m.def(
        "staggered_formula",
        [](int n, double gamma, const std::string& pattern, uint64_t seed) {
            return formula_dict(staggered_formula(spec_of(n, gamma, pattern, seed)));
        },
        py::arg("n"), py::arg("gamma"), py::arg("pattern") = "staggered", py::arg("seed") = 0);

    m.def(
        "orbit",
        [](const std::string& pauli) {
            const PauliString s = PauliString::parse(pauli);
            const PauliOrbit o = enumerate_orbit(s, CliffordCircuit::fixed_brickwork(s.n));
            std::vector<std::string> el;
            for (const auto& e : o.elements) el.push_back(e.str(true));
            py::dict d;
            d["elements"] = el;
            d["length"] = o.length;
            d["weight_sum"] = o.weight_sum;
            d["closing_sign"] = o.closing_sign;
            return d;
        },
        py::arg("pauli"));
    m.def(
        "orbit_spectrum",
        [](int n) {
            py::list out;
            for (const auto& o : orbit_weight_spectrum(CliffordCircuit::fixed_brickwork(n))) {
                py::dict d;
                d["representative"] = PauliString::from_index(n, o.representative).str(true);
                d["length"] = o.length;
                d["weight_sum"] = o.weight_sum;
                d["normalized_weight"] = o.normalized_weight();
                out.append(d);
            }
            return out;
        },
        py::arg("n"));

    m.def(
        "eigenmode_free",
        [](int n, const std::string& pattern, int w) {
            const EigenmodeFreeCertificate c = is_eigenmode_free(build_truncated(spec_of(n, 1.0, pattern, 0), w));
            py::dict d;
            d["eigenmode_free"] = c.eigenmode_free;
            d["nilpotency_index"] = c.nilpotency_index;
            d["cycle_length"] = c.cycle.size();
            return d;
        },
        py::arg("n"), py::arg("pattern"), py::arg("w"));
    m.def(
        "max_eigenmode_free_cutoff",
        [](int n, const std::string& pattern) { return max_eigenmode_free_cutoff(pattern_from_spec(pattern, n), n); },
        py::arg("n"), py::arg("pattern"));

    m.def(
        "cycles",
        [](int k, int w_max) {
            CycleSearchResult r;
            {
                py::gil_scoped_release nogil;
                r = scan_cycles(k, w_max);
            }
            py::dict d;
            d["k"] = r.k;
            d["w_star"] = r.w_star;
            d["report"] = format_cycle_report(r);
            return d;
        },
        py::arg("k"), py::arg("w_max") = 12);

    m.def(
        "haar_log_stats",
        [](int64_t samples, uint64_t seed, bool bilinear) {
            const HaarLogStats s = bilinear ? mc_log_bilinear_average(samples, seed) : mc_log_entry_average(samples, seed);
            py::dict d;
            d["mean"] = s.mean;
            d["stderr"] = s.stderr_;
            d["target"] = s.target;
            d["samples"] = s.sample_count;
            return d;
        },
        py::arg("samples"), py::arg("seed") = 0, py::arg("bilinear") = false);

    m.def("undoped_gap", &undoped_gap, py::arg("n"), py::arg("gamma"));

    // Same entry point as the floqlab executable; returns (exit code, stdout, stderr).
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release nogil;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
