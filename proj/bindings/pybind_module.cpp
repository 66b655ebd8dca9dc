#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <memory>

#include "bealab/backward_error.hpp"
#include "bealab/chaos.hpp"
#include "bealab/integrate.hpp"
#include "bealab/leapfrog.hpp"
#include "bealab/minifloat.hpp"
#include "bealab/orbit_graph.hpp"
#include "bealab/systems.hpp"

namespace py = pybind11;
using namespace bealab;

namespace {

Interpolant interp_from(const std::string& s) {
    if (s == "cubic-hermite" || s == "hermite") return Interpolant::cubic_hermite;
    if (s == "method-order") return Interpolant::method_order;
    throw std::invalid_argument("unknown interpolant: " + s);
}

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::ok: return "ok";
        case SolveStatus::step_underflow: return "step-underflow";
        case SolveStatus::diverged: return "diverged";
    }
    return "?";
}

HamiltonianState hs(const std::array<double, 4>& a) {
    return HamiltonianState{a[0], a[1], a[2], a[3]};
}

py::dict drift_dict(const EnergyDriftReport& rep) {
    py::dict d;
    d["orders"] = rep.orders;
    d["drift"] = rep.drift;
    d["dev_up"] = rep.dev_up;
    d["dev_down"] = rep.dev_down;
    d["diverged"] = rep.diverged;
    d["reference_energy"] = rep.reference_energy;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "adaptive integration, defect measurement and low-precision orbit analysis";

    py::class_<System, std::shared_ptr<System>>(m, "System")
        .def("dimension", &System::dimension)
        .def("name", &System::name)
        .def("rhs", [](const System& s, double t, const Vec& y) { return s.rhs_vec(t, y); });

    m.def("make_system", &make_system, py::arg("name"),
          "lorenz, decay, oscillator, henon-heiles or constant");

    py::class_<DenseSolution>(m, "DenseSolution")
        .def("eval", [](const DenseSolution& s, double t) { return s.eval(t); })
        .def("eval_derivative",
             [](const DenseSolution& s, double t) { return s.eval_derivative(t); })
        .def_property_readonly("times",
                               [](const DenseSolution& s) { return s.skeleton.times; })
        .def_property_readonly("steps", [](const DenseSolution& s) { return s.skeleton.steps; })
        .def_property_readonly("rejected",
                               [](const DenseSolution& s) { return s.skeleton.rejected; })
        .def_property_readonly("t_begin", &DenseSolution::t_begin)
        .def_property_readonly("t_end", &DenseSolution::t_end);

    py::class_<IntegrationResult>(m, "IntegrationResult")
        .def_readonly("solution", &IntegrationResult::solution)
        .def_readonly("t_reached", &IntegrationResult::t_reached)
        .def_readonly("message", &IntegrationResult::message)
        .def_property_readonly(
            "status", [](const IntegrationResult& r) { return std::string(status_name(r.status)); })
        .def("ok", &IntegrationResult::ok);

    m.def(
        "integrate",
        [](const std::shared_ptr<System>& sys, const Vec& y0, double t0, double t_end,
           double rtol, double atol, const std::string& interpolant) {
            SolverConfig cfg;
            cfg.rtol = rtol;
            cfg.atol = atol;
            cfg.interpolant = interp_from(interpolant);
            return integrate_adaptive(*sys, y0, t0, t_end, cfg);
        },
        py::arg("system"), py::arg("y0"), py::arg("t0"), py::arg("t_end"),
        py::arg("rtol") = 1e-8, py::arg("atol") = 1e-8,
        py::arg("interpolant") = "cubic-hermite");

    m.def(
        "integrate_euler",
        [](const std::shared_ptr<System>& sys, const Vec& y0, double t0, double t_end,
           double h) { return integrate_euler_fixed(*sys, y0, t0, t_end, h); },
        py::arg("system"), py::arg("y0"), py::arg("t0"), py::arg("t_end"), py::arg("h"));

    m.def(
        "max_residual",
        [](const DenseSolution& sol, const std::shared_ptr<System>& sys, int samples_per_step,
           bool relative) {
            const auto r = max_residual(sol, *sys, samples_per_step, relative);
            return py::make_tuple(r.value, r.time);
        },
        py::arg("solution"), py::arg("system"), py::arg("samples_per_step") = 8,
        py::arg("relative") = false, "returns (max_norm, argmax_time)");

    m.def(
        "lyapunov",
        [](const std::shared_ptr<System>& sys, const Vec& y0, double T, double renorm,
           double delta0, double discard, double rtol, double atol) {
            return lyapunov_estimate(*sys, y0, T, renorm, delta0, discard, rtol, atol);
        },
        py::arg("system"), py::arg("y0"), py::arg("T"), py::arg("renorm") = 0.5,
        py::arg("delta0") = 1e-8, py::arg("discard") = 5.0, py::arg("rtol") = 1e-9,
        py::arg("atol") = 1e-9);

    m.def(
        "separation_time",
        [](const std::shared_ptr<System>& sys, const Vec& y0, double eps, uint32_t seed1,
           uint32_t seed2, double threshold, double horizon) {
            DisturbanceSpec s1, s2;
            s1.epsilon = s2.epsilon = eps;
            s1.seed = seed1;
            s2.seed = seed2;
            const auto r = separation_time(sys, y0, s1, s2, threshold, horizon);
            py::dict d;
            d["reached"] = r.reached;
            d["T"] = r.T;
            d["threshold"] = r.threshold;
            d["horizon"] = r.horizon;
            return d;
        },
        py::arg("system"), py::arg("y0"), py::arg("eps"), py::arg("seed1") = 101,
        py::arg("seed2") = 202, py::arg("threshold") = 1.0, py::arg("horizon") = 100.0);

    m.def(
        "separation_scaling",
        [](const std::shared_ptr<System>& sys, const Vec& y0, const std::vector<double>& eps,
           uint32_t seed1, uint32_t seed2, double threshold, double horizon) {
            const auto r = separation_scaling(sys, y0, eps, seed1, seed2, threshold, horizon);
            py::dict d;
            d["epsilons"] = r.epsilons;
            d["T"] = r.T;
            d["excluded"] = r.excluded_epsilons;
            d["slope"] = r.slope;
            d["intercept"] = r.intercept;
            return d;
        },
        py::arg("system"), py::arg("y0"), py::arg("epsilons"), py::arg("seed1") = 101,
        py::arg("seed2") = 202, py::arg("threshold") = 1.0, py::arg("horizon") = 100.0);

    m.def(
        "trajectory_statistics",
        [](const DenseSolution& sol, double t_a, double t_b, int bins, long samples,
           int component) {
            const auto r = trajectory_statistics(sol, t_a, t_b, bins, samples, component);
            py::dict d;
            d["mean"] = r.mean;
            d["stddev"] = r.stddev;
            d["component"] = r.component;
            d["bin_edges"] = r.bin_edges;
            d["counts"] = r.counts;
            d["frequencies"] = r.frequencies;
            d["n_samples"] = r.n_samples;
            return d;
        },
        py::arg("solution"), py::arg("t_a"), py::arg("t_b"), py::arg("bins") = 50,
        py::arg("samples") = 4000, py::arg("component") = -1);

    m.def(
        "secular_envelope",
        [](double eps, double omega, double t_end) {
            const auto r = secular_envelope(eps, omega, t_end);
            py::dict d;
            d["slope"] = r.slope;
            d["intercept"] = r.intercept;
            d["n_maxima"] = r.n_maxima;
            return d;
        },
        py::arg("eps"), py::arg("omega"), py::arg("t_end"));

    m.def(
        "hamiltonian",
        [](const std::array<double, 4>& s) { return hh_hamiltonian(hs(s)); }, py::arg("state"),
        "energy of (q1, q2, p1, p2) under the cubic two-well potential");

    m.def(
        "modified_hamiltonian",
        [](const std::array<double, 4>& s, double h, int order) {
            return modified_hamiltonian(hs(s), h, order);
        },
        py::arg("state"), py::arg("h"), py::arg("order"));

    m.def(
        "k_terms", [](const std::array<double, 4>& s) { return k_terms(hs(s)); },
        py::arg("state"), "returns (K1, K2, K4, K5, K7, K8, K10, K11)");

    m.def(
        "corrected_rhs",
        [](const std::array<double, 4>& s, double h) { return hh_modified_rhs(hs(s), h); },
        py::arg("state"), py::arg("h"),
        "time derivative of (q1, q2, p1, p2) under the step-size-corrected field");

    m.def(
        "energy_drift",
        [](const std::array<double, 4>& s, double h, long N, const std::vector<int>& orders) {
            return drift_dict(energy_drift(leapfrog_dkd(hs(s), h, N), orders));
        },
        py::arg("state"), py::arg("h"), py::arg("steps"),
        py::arg("orders") = std::vector<int>{0, 2, 4});

    m.def(
        "detect_spurious_chaos",
        [](const std::array<double, 4>& s, double h, long N, double fraction) {
            const auto rep = energy_drift(leapfrog_dkd(hs(s), h, N), {0, 2, 4});
            return detect_spurious_chaos(rep, rep.reference_energy, fraction);
        },
        py::arg("state"), py::arg("h"), py::arg("steps"), py::arg("fraction") = 0.5);

    m.def(
        "leapfrog_orbit",
        [](const std::array<double, 4>& s, double h, long N) {
            const auto run = leapfrog_dkd(hs(s), h, N);
            std::vector<std::array<double, 4>> states;
            states.reserve(run.states.size());
            for (const auto& st : run.states)
                states.push_back({st.q1, st.q2, st.p1, st.p2});
            py::dict d;
            d["states"] = states;
            d["diverged_at"] = run.diverged_at;
            return d;
        },
        py::arg("state"), py::arg("h"), py::arg("steps"));

    m.def(
        "count_in_unit_interval",
        [](const std::string& fmt) { return FloatFormat::parse(fmt).count_in_unit_interval(); },
        py::arg("format"));

    m.def(
        "enumerate_unit_interval",
        [](const std::string& fmt) {
            std::vector<double> vals;
            for (const auto& mf : enumerate_unit_interval(FloatFormat::parse(fmt)))
                vals.push_back(mf.value);
            return vals;
        },
        py::arg("format"), "descending values from 1.0 to 0.0");

    m.def(
        "round_to_format",
        [](double x, const std::string& fmt) { return round_to_format(x, FloatFormat::parse(fmt)); },
        py::arg("x"), py::arg("format"));

    m.def(
        "unit_roundoff",
        [](const std::string& fmt) { return unit_roundoff(FloatFormat::parse(fmt)); },
        py::arg("format"));

    m.def(
        "map_eval",
        [](double x, const std::string& map, const std::string& fmt) {
            return map_eval(x, parse_map(map), FloatFormat::parse(fmt));
        },
        py::arg("x"), py::arg("map"), py::arg("format"));

    m.def(
        "orbit_summary",
        [](const std::string& fmt, const std::string& map, const std::string& nan_policy) {
            NanPolicy policy;
            if (nan_policy == "redirect") policy = NanPolicy::redirect_to_one;
            else if (nan_policy == "sink") policy = NanPolicy::sink;
            else throw std::invalid_argument("unknown nan policy: " + nan_policy);
            const auto g = build_graph(FloatFormat::parse(fmt), parse_map(map), policy);
            const auto d = decompose(g);
            py::dict out;
            out["nodes"] = g.n();
            out["components"] = d.cycles.size();
            out["cycle_lengths"] = d.cycle_lengths_sorted();
            out["component_sizes"] = d.component_sizes;
            out["longest_cycle"] = d.longest_cycle;
            out["longest_transient"] = d.longest_transient;
            return out;
        },
        py::arg("format"), py::arg("map") = "gauss", py::arg("nan_policy") = "redirect");

    m.def(
        "export_edges",
        [](const std::string& fmt, const std::string& map, const std::string& path) {
            export_edges(build_graph(FloatFormat::parse(fmt), parse_map(map)), path);
        },
        py::arg("format"), py::arg("map"), py::arg("path"));

    m.def(
        "measure_ks",
        [](const std::string& fmt, const std::string& map, const std::string& measure) {
            const auto g = build_graph(FloatFormat::parse(fmt), parse_map(map));
            return measure_compare(decompose(g), g, parse_measure(measure)).ks;
        },
        py::arg("format"), py::arg("map") = "gauss", py::arg("measure") = "gauss");

    m.def(
        "scaling_slope",
        [](const std::string& map, const std::vector<std::string>& formats) {
            std::vector<FloatFormat> fmts;
            for (const auto& f : formats) fmts.push_back(FloatFormat::parse(f));
            const auto rep = scaling_report(parse_map(map), fmts);
            py::dict d;
            d["slope"] = rep.slope;
            d["intercept"] = rep.intercept;
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict row;
                row["format"] = r.format;
                row["n"] = r.n;
                row["longest_cycle"] = r.longest_cycle;
                row["longest_transient"] = r.longest_transient;
                rows.append(row);
            }
            d["rows"] = rows;
            return d;
        },
        py::arg("map"), py::arg("formats"));

    m.def(
        "shadow",
        [](const std::string& fmt, int64_t start_index, long max_len) {
            const auto g = build_graph(FloatFormat::parse(fmt), MapId::gauss);
            const auto r = shadow_refine_gauss(g, start_index, max_len);
            py::dict d;
            d["ok"] = r.ok;
            d["pseudo"] = r.pseudo;
            d["shadow"] = r.shadow;
            d["dist"] = r.dist;
            d["max_dist"] = r.max_dist;
            d["max_dist_units"] = r.max_dist_units;
            if (!r.ok) d["error"] = r.error;
            return d;
        },
        py::arg("format"), py::arg("start_index"), py::arg("max_len") = 50);
}
