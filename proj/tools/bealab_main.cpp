#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bealab/backward_error.hpp"
#include "bealab/chaos.hpp"
#include "bealab/integrate.hpp"
#include "bealab/io.hpp"
#include "bealab/leapfrog.hpp"
#include "bealab/minifloat.hpp"
#include "bealab/orbit_graph.hpp"
#include "bealab/report.hpp"
#include "bealab/systems.hpp"

using nlohmann::json;
using namespace bealab;

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& s) {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
    return v;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const auto& part : split(s, ','))
        if (!part.empty()) out.push_back(to_double(part));
    if (out.empty()) throw std::invalid_argument("empty number list: " + s);
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_doubles(s)) out.push_back((int)std::lround(v));
    return out;
}

Vec default_state(const std::string& system) {
    if (system == "lorenz") return {1.0, 0.0, 0.0};
    if (system == "decay") return {1.0};
    if (system == "oscillator") return {0.0, 0.0};
    if (system == "henon-heiles") return {0.12, 0.12, 0.12, 0.12};
    if (system == "constant") return {0.0};
    return {1.0};
}

Interpolant parse_interpolant(const std::string& s) {
    if (s == "cubic-hermite" || s == "hermite") return Interpolant::cubic_hermite;
    if (s == "method-order") return Interpolant::method_order;
    throw std::invalid_argument("unknown interpolant: " + s +
                                " (expected cubic-hermite or method-order)");
}

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::ok: return "ok";
        case SolveStatus::step_underflow: return "step-underflow";
        case SolveStatus::diverged: return "diverged";
    }
    return "?";
}

// key = value lines; file values take precedence over flags
struct KvConfig {
    std::map<std::string, std::function<void(const std::string&)>> setters;

    void bind(const std::string& key, double* p) {
        setters[key] = [p](const std::string& v) { *p = to_double(v); };
    }
    void bind(const std::string& key, long* p) {
        setters[key] = [p](const std::string& v) { *p = std::stol(v); };
    }
    void bind(const std::string& key, int* p) {
        setters[key] = [p](const std::string& v) { *p = std::stoi(v); };
    }
    void bind(const std::string& key, std::string* p) {
        setters[key] = [p](const std::string& v) { *p = v; };
    }
    void bind(const std::string& key, bool* p) {
        setters[key] = [p](const std::string& v) {
            if (v == "true" || v == "1" || v == "yes") *p = true;
            else if (v == "false" || v == "0" || v == "no") *p = false;
            else throw std::invalid_argument("expected a boolean, got: " + v);
        };
    }
    void bind(const std::string& key, uint32_t* p) {
        setters[key] = [p](const std::string& v) { *p = (uint32_t)std::stoul(v); };
    }

    void apply(const std::string& path) const {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot read config file: " + path);
        std::string line;
        long lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            if (trim(line).empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            " has no '=': " + trim(line));
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            const auto it = setters.find(key);
            if (it == setters.end())
                throw std::invalid_argument("unknown config key: " + key);
            it->second(val);
        }
    }
};

void emit(const json& j) { std::cout << j.dump() << "\n"; }

// ---------------------------------------------------------------- simulate

struct SimulateParams {
    std::string system = "lorenz";
    std::string y0;
    double t0 = 0.0, t_end = 50.0;
    double rtol = 1e-8, atol = 1e-8;
    double h_init = 0.0, h_max = 0.0;
    std::string interpolant = "cubic-hermite";
    double sample_dt = 0.0;
    std::string out, svg, config;
};

int run_simulate(const SimulateParams& p) {
    auto sys = make_system(p.system);
    const Vec y0 = p.y0.empty() ? default_state(p.system) : parse_doubles(p.y0);
    SolverConfig cfg;
    cfg.rtol = p.rtol;
    cfg.atol = p.atol;
    cfg.h_init = p.h_init;
    cfg.h_max = p.h_max;
    cfg.interpolant = parse_interpolant(p.interpolant);
    const auto run = integrate_adaptive(*sys, y0, p.t0, p.t_end, cfg);
    if (!p.out.empty()) write_solution_csv(run.solution, p.out, p.sample_dt);
    if (!p.svg.empty()) {
        const int dim = run.solution.dimension();
        const long n = 2000;
        std::vector<double> xs, ys;
        for (long i = 0; i <= n; ++i) {
            const double t = p.t0 + (run.t_reached - p.t0) * (double)i / (double)n;
            const Vec y = run.solution.eval(t);
            xs.push_back(y[0]);
            ys.push_back(y[dim > 1 ? dim - 1 : 0]);
        }
        write_svg_scatter(p.svg, xs, ys, true);
    }
    json j{{"command", "simulate"},
           {"system", sys->name()},
           {"status", status_name(run.status)},
           {"t_reached", run.t_reached},
           {"steps", run.solution.skeleton.steps},
           {"rejected", run.solution.skeleton.rejected},
           {"endpoint", run.solution.skeleton.states.back()}};
    if (!run.message.empty()) j["message"] = run.message;
    emit(j);
    return run.ok() ? 0 : 2;
}

// ---------------------------------------------------------------- residual

struct ResidualParams {
    std::string system = "lorenz";
    std::string y0;
    double t0 = 0.0, t_end = 50.0;
    double rtol = 1e-8, atol = 1e-8;
    int samples_per_step = 8;
    std::string interpolant = "method-order";
    bool relative = false;
    std::string out, svg, config;
};

int run_residual(const ResidualParams& p) {
    auto sys = make_system(p.system);
    const Vec y0 = p.y0.empty() ? default_state(p.system) : parse_doubles(p.y0);
    SolverConfig cfg;
    cfg.rtol = p.rtol;
    cfg.atol = p.atol;
    cfg.interpolant = parse_interpolant(p.interpolant);
    const auto run = integrate_adaptive(*sys, y0, p.t0, p.t_end, cfg);
    const auto mr = max_residual(run.solution, *sys, p.samples_per_step, p.relative);
    if (!p.out.empty() || !p.svg.empty()) {
        long n = run.solution.skeleton.steps * p.samples_per_step;
        n = std::clamp(n, 2L, 200000L);
        const auto series =
            residual_series(run.solution, *sys, p.t0, run.t_reached, n, p.relative);
        if (!p.out.empty()) write_residual_csv(series, p.out);
        if (!p.svg.empty()) write_svg_scatter(p.svg, series.times, series.norms, true);
    }
    json j{{"command", "residual"},
           {"system", sys->name()},
           {"status", status_name(run.status)},
           {"max_residual", mr.value},
           {"argmax_time", mr.time},
           {"relative", p.relative},
           {"samples_per_step", p.samples_per_step},
           {"steps", run.solution.skeleton.steps}};
    emit(j);
    return run.ok() ? 0 : 2;
}

// ---------------------------------------------------------------- lyapunov

struct LyapunovParams {
    std::string system = "lorenz";
    std::string y0;
    double T = 1000.0;
    double renorm = 0.5, delta0 = 1e-8, discard = 5.0;
    double rtol = 1e-9, atol = 1e-9;
    std::string config;
};

int run_lyapunov(const LyapunovParams& p) {
    auto sys = make_system(p.system);
    const Vec y0 = p.y0.empty() ? default_state(p.system) : parse_doubles(p.y0);
    const double lam =
        lyapunov_estimate(*sys, y0, p.T, p.renorm, p.delta0, p.discard, p.rtol, p.atol);
    emit(json{{"command", "lyapunov"},
              {"system", sys->name()},
              {"lambda", lam},
              {"T", p.T},
              {"renorm_interval", p.renorm},
              {"delta0", p.delta0},
              {"discard", p.discard}});
    return 0;
}

// ---------------------------------------------------------------- separation

struct SeparationParams {
    std::string system = "lorenz";
    std::string y0;
    std::string eps = "1e-6,1e-8,1e-10";
    uint32_t seed1 = 101, seed2 = 202;
    double threshold = 1.0, horizon = 100.0;
    double rtol = 1e-10, atol = 1e-10;
    std::string out, svg, config;
};

int run_separation(const SeparationParams& p) {
    auto sys = make_system(p.system);
    const Vec y0 = p.y0.empty() ? default_state(p.system) : parse_doubles(p.y0);
    const auto epsilons = parse_doubles(p.eps);
    std::vector<double> T(epsilons.size(), std::nan(""));
    std::vector<bool> reached(epsilons.size(), false);
    std::vector<double> fit_x, fit_y;
    std::shared_ptr<const System> base = sys;
    for (size_t i = 0; i < epsilons.size(); ++i) {
        DisturbanceSpec s1, s2;
        s1.epsilon = s2.epsilon = epsilons[i];
        s1.seed = p.seed1;
        s2.seed = p.seed2;
        const auto r =
            separation_time(base, y0, s1, s2, p.threshold, p.horizon, p.rtol, p.atol);
        reached[i] = r.reached;
        if (r.reached) {
            T[i] = r.T;
            fit_x.push_back(std::log(1.0 / epsilons[i]));
            fit_y.push_back(r.T);
        }
    }
    json j{{"command", "separation"},
           {"system", sys->name()},
           {"epsilons", epsilons},
           {"threshold", p.threshold},
           {"horizon", p.horizon},
           {"seeds", {p.seed1, p.seed2}}};
    auto tj = json::array();
    auto rj = json::array();
    for (size_t i = 0; i < epsilons.size(); ++i) {
        tj.push_back(reached[i] ? json(T[i]) : json());
        rj.push_back((bool)reached[i]);
    }
    j["T"] = tj;
    j["reached"] = rj;
    if (fit_x.size() >= 2) {
        const auto fit = linear_fit(fit_x, fit_y);
        j["slope"] = fit.slope;
        j["intercept"] = fit.intercept;
    }
    if (!p.out.empty()) {
        std::ofstream f(p.out);
        if (!f) throw std::runtime_error("cannot write " + p.out);
        f << "eps,reached,T\n";
        for (size_t i = 0; i < epsilons.size(); ++i)
            f << fmt17(epsilons[i]) << "," << (reached[i] ? 1 : 0) << "," << fmt17(T[i]) << "\n";
    }
    if (!p.svg.empty() && fit_x.size() >= 2) write_svg_scatter(p.svg, fit_x, fit_y, false);
    emit(j);
    const size_t hits = fit_x.size();
    if (epsilons.size() == 1) return hits == 1 ? 0 : 2;
    return hits >= 2 ? 0 : 2;
}

// ---------------------------------------------------------------- leapfrog

struct LeapfrogParams {
    double h = 81.0 / 64.0;
    long steps = 16000;
    double q1 = 0.12, q2 = 0.12, p1 = 0.12, p2 = 0.12;
    std::string orders = "0,2,4";
    std::string out, svg, config;
};

int run_leapfrog(const LeapfrogParams& p) {
    const HamiltonianState s0{p.q1, p.q2, p.p1, p.p2};
    const auto orders = parse_ints(p.orders);
    const auto run = leapfrog_dkd(s0, p.h, p.steps);
    const auto rep = energy_drift(run, orders);
    if (!p.out.empty()) write_drift_csv(run, orders, p.out);
    if (!p.svg.empty()) {
        std::vector<double> xs, ys;
        for (size_t k = 0; k < run.states.size(); ++k) {
            xs.push_back(p.h * (double)k);
            ys.push_back(modified_hamiltonian(run.states[k], p.h, orders.front()));
        }
        write_svg_scatter(p.svg, xs, ys, true);
    }
    json j{{"command", "leapfrog"},
           {"h", p.h},
           {"steps", p.steps},
           {"orders", orders},
           {"drift", rep.drift},
           {"dev_up", rep.dev_up},
           {"dev_down", rep.dev_down},
           {"reference_energy", rep.reference_energy},
           {"diverged", rep.diverged}};
    if (run.diverged_at >= 0) j["diverged_at"] = run.diverged_at;
    emit(j);
    return rep.diverged ? 2 : 0;
}

// ---------------------------------------------------------------- energy

struct EnergyParams {
    double h = 81.0 / 64.0;
    long steps = 16000;
    double q1 = 0.12, q2 = 0.12, p1 = 0.12, p2 = 0.12;
    std::string orders = "0,2,4";
    double flag_frac = 0.5;
    std::string out, config;
};

int run_energy(const EnergyParams& p) {
    const HamiltonianState s0{p.q1, p.q2, p.p1, p.p2};
    const auto orders = parse_ints(p.orders);
    const auto run = leapfrog_dkd(s0, p.h, p.steps);
    const auto rep = energy_drift(run, orders);
    const bool flagged = detect_spurious_chaos(rep, rep.reference_energy, p.flag_frac);
    if (!p.out.empty()) write_drift_csv(run, orders, p.out);
    json j{{"command", "energy"},
           {"h", p.h},
           {"steps", p.steps},
           {"orders", orders},
           {"drift", rep.drift},
           {"reference_energy", rep.reference_energy},
           {"fraction", p.flag_frac},
           {"flagged", flagged},
           {"diverged", rep.diverged}};
    emit(j);
    return rep.diverged ? 2 : 0;
}

// ---------------------------------------------------------------- orbit-graph

struct OrbitGraphParams {
    std::string format = "e3m4";
    std::string map = "gauss";
    std::string nan_policy = "redirect";
    std::string edges_out, report_out, dot_out;
    std::string measure;
    std::string config;
};

int run_orbit_graph(const OrbitGraphParams& p) {
    NanPolicy policy;
    if (p.nan_policy == "redirect") policy = NanPolicy::redirect_to_one;
    else if (p.nan_policy == "sink") policy = NanPolicy::sink;
    else throw std::invalid_argument("unknown nan policy: " + p.nan_policy);
    const auto fmt = FloatFormat::parse(p.format);
    const auto g = build_graph(fmt, parse_map(p.map), policy);
    const auto d = decompose(g);
    if (!p.edges_out.empty()) export_edges(g, p.edges_out);
    if (!p.dot_out.empty()) export_dot(g, p.dot_out);

    json j{{"command", "orbit-graph"},
           {"format", fmt.str()},
           {"map", map_name(g.map)},
           {"nan_policy", p.nan_policy},
           {"nodes", g.n()},
           {"components", d.cycles.size()},
           {"cycle_lengths", d.cycle_lengths_sorted()},
           {"longest_cycle", d.longest_cycle},
           {"longest_transient", d.longest_transient}};
    if (!p.measure.empty()) {
        const auto mr = measure_compare(d, g, parse_measure(p.measure));
        j["measure"] = p.measure;
        j["ks_distance"] = mr.ks;
        j["support_nodes"] = mr.support_nodes;
    }
    if (!p.report_out.empty()) {
        json rep = j;
        rep.erase("command");
        rep["component_sizes"] = d.component_sizes;
        if (g.n() <= 1024) {
            auto cyc = json::array();
            for (const auto& cycle : d.cycles) {
                auto nodes = json::array();
                for (auto v : cycle) nodes.push_back({{"index", v}, {"value", g.value(v)}});
                cyc.push_back(nodes);
            }
            rep["cycles"] = cyc;
        }
        std::ofstream f(p.report_out);
        if (!f) throw std::runtime_error("cannot write " + p.report_out);
        f << rep.dump(2) << "\n";
    }
    emit(j);
    return 0;
}

// ---------------------------------------------------------------- shadow

struct ShadowParams {
    std::string format = "e3m4";
    std::string map = "gauss";
    int64_t start_index = 0;
    bool all = false;
    long samples = 0;
    long max_len = 50;
    std::string out, config;
};

int run_shadow(const ShadowParams& p) {
    if (parse_map(p.map) != MapId::gauss)
        throw std::invalid_argument("the shadow construction is specific to the gauss map");
    const auto g = build_graph(FloatFormat::parse(p.format), MapId::gauss);

    if (p.start_index > 0) {
        const auto r = shadow_refine_gauss(g, p.start_index, p.max_len);
        if (!p.out.empty()) {
            std::ofstream f(p.out);
            if (!f) throw std::runtime_error("cannot write " + p.out);
            f << "n,x,shadow,dist\n";
            for (size_t i = 0; i < r.pseudo.size() && r.ok; ++i)
                f << i << "," << fmt17(r.pseudo[i]) << "," << fmt17(r.shadow[i]) << ","
                  << fmt17(r.dist[i]) << "\n";
        }
        json j{{"command", "shadow"},
               {"format", p.format},
               {"start_index", p.start_index},
               {"ok", r.ok},
               {"length", r.pseudo.size()}};
        if (r.ok) {
            j["max_dist"] = r.max_dist;
            j["max_dist_units"] = r.max_dist_units;
        } else {
            j["error"] = r.error;
        }
        emit(j);
        return r.ok ? 0 : 2;
    }

    std::vector<int64_t> starts;
    if (p.all || p.samples <= 0) {
        for (int64_t k = 1; k <= g.n(); ++k) starts.push_back(k);
    } else {
        const long m = std::max(1L, p.samples);
        for (long i = 0; i < m; ++i)
            starts.push_back(1 + (int64_t)((i * (g.n() - 1)) / std::max(1L, m - 1)));
    }
    long shadowed = 0, skipped = 0;
    double max_units = 0.0;
    for (int64_t k : starts) {
        const auto r = shadow_refine_gauss(g, k, p.max_len);
        if (r.ok) {
            ++shadowed;
            max_units = std::max(max_units, r.max_dist_units);
        } else {
            ++skipped;
        }
    }
    emit(json{{"command", "shadow"},
              {"format", p.format},
              {"attempted", starts.size()},
              {"shadowed", shadowed},
              {"skipped", skipped},
              {"max_dist_units", max_units},
              {"max_len", p.max_len}});
    return 0;
}

// ---------------------------------------------------------------- scaling

struct ScalingParams {
    std::string map = "gauss";
    std::string formats = "e3m4,e4m3,e5m2,e4m5,e5m10";
    std::string out, svg, config;
};

int run_scaling(const ScalingParams& p) {
    std::vector<FloatFormat> fmts;
    for (const auto& name : split(p.formats, ','))
        if (!name.empty()) fmts.push_back(FloatFormat::parse(name));
    const auto rep = scaling_report(parse_map(p.map), fmts);
    if (!p.out.empty()) {
        std::ofstream f(p.out);
        if (!f) throw std::runtime_error("cannot write " + p.out);
        f << "format,n,longest_cycle,longest_transient\n";
        for (const auto& r : rep.rows)
            f << r.format << "," << r.n << "," << r.longest_cycle << "," << r.longest_transient
              << "\n";
    }
    if (!p.svg.empty()) {
        std::vector<double> xs, ys;
        for (const auto& r : rep.rows) {
            xs.push_back(std::log10((double)r.n));
            ys.push_back(std::log10((double)(r.longest_cycle + r.longest_transient)));
        }
        write_svg_scatter(p.svg, xs, ys, false);
    }
    auto rows = json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"format", r.format},
                        {"n", r.n},
                        {"longest_cycle", r.longest_cycle},
                        {"longest_transient", r.longest_transient}});
    emit(json{{"command", "scaling"},
              {"map", p.map},
              {"slope", rep.slope},
              {"intercept", rep.intercept},
              {"rows", rows}});
    return 0;
}

// ---------------------------------------------------------------- stats

struct StatsParams {
    std::string system = "lorenz";
    std::string y0;
    double t0 = 0.0, t_end = 50.0;
    double from = 10.0, to = 50.0;
    int bins = 50;
    long samples = 4000;
    int component = -1;
    double rtol = 1e-8, atol = 1e-8;
    std::string hist_out, svg, config;
};

int run_stats(const StatsParams& p) {
    auto sys = make_system(p.system);
    const Vec y0 = p.y0.empty() ? default_state(p.system) : parse_doubles(p.y0);
    SolverConfig cfg;
    cfg.rtol = p.rtol;
    cfg.atol = p.atol;
    const auto run = integrate_adaptive(*sys, y0, p.t0, p.t_end, cfg);
    if (!run.ok()) {
        emit(json{{"command", "stats"}, {"status", status_name(run.status)}});
        return 2;
    }
    const auto rep = trajectory_statistics(run.solution, p.from, p.to, p.bins, p.samples,
                                           p.component);
    if (!p.hist_out.empty()) write_histogram_csv(rep, p.hist_out);
    if (!p.svg.empty()) {
        std::vector<double> xs, ys;
        for (size_t i = 0; i + 1 < rep.bin_edges.size(); ++i) {
            xs.push_back(0.5 * (rep.bin_edges[i] + rep.bin_edges[i + 1]));
            ys.push_back(rep.frequencies[i]);
        }
        write_svg_scatter(p.svg, xs, ys, true);
    }
    emit(json{{"command", "stats"},
              {"system", sys->name()},
              {"window", {p.from, p.to}},
              {"mean", rep.mean},
              {"stddev", rep.stddev},
              {"component", rep.component},
              {"n_samples", rep.n_samples},
              {"bins", p.bins}});
    return 0;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceParams {
    std::string out_dir = "reproduce-out";
    std::string config;
};

int run_reproduce(const ReproduceParams& p) {
    std::filesystem::create_directories(p.out_dir);
    std::vector<CriterionResult> results;
    bool unexpected = false;
    for (const auto& id : criterion_ids()) {
        try {
            results.push_back(run_criterion(id));
        } catch (const std::exception& e) {
            CriterionResult r;
            r.id = id;
            r.pass = false;
            r.details.push_back(std::string("error: ") + e.what());
            results.push_back(r);
            unexpected = true;
        }
    }
    const json rep = build_report(results);
    const auto path = std::filesystem::path(p.out_dir) / "report.json";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << rep.dump(2) << "\n";
    emit(json{{"command", "reproduce"},
              {"passed", rep["passed"]},
              {"failed", rep["failed"]},
              {"report", path.string()}});
    return unexpected ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for backward error in chaotic dynamics"};
    app.require_subcommand(1);
    std::function<int()> action;

    SimulateParams sim;
    {
        auto* c = app.add_subcommand("simulate", "integrate a system with dense output");
        auto kv = std::make_shared<KvConfig>();
        c->add_option("--system", sim.system, "lorenz|decay|oscillator|henon-heiles|constant");
        c->add_option("--y0", sim.y0, "initial state, comma separated");
        c->add_option("--t0", sim.t0, "start time");
        c->add_option("--t-end", sim.t_end, "end time");
        c->add_option("--rtol", sim.rtol, "relative tolerance");
        c->add_option("--atol", sim.atol, "absolute tolerance");
        c->add_option("--h-init", sim.h_init, "initial step (0 = automatic)");
        c->add_option("--h-max", sim.h_max, "step ceiling (0 = none)");
        c->add_option("--interpolant", sim.interpolant, "cubic-hermite|method-order");
        c->add_option("--sample-dt", sim.sample_dt, "CSV sampling interval (0 = solver nodes)");
        c->add_option("--out", sim.out, "solution CSV path");
        c->add_option("--svg", sim.svg, "phase-projection SVG path");
        c->add_option("--config", sim.config, "key = value file; file values win");
        kv->bind("system", &sim.system);
        kv->bind("y0", &sim.y0);
        kv->bind("t0", &sim.t0);
        kv->bind("t-end", &sim.t_end);
        kv->bind("rtol", &sim.rtol);
        kv->bind("atol", &sim.atol);
        kv->bind("h-init", &sim.h_init);
        kv->bind("h-max", &sim.h_max);
        kv->bind("interpolant", &sim.interpolant);
        kv->bind("sample-dt", &sim.sample_dt);
        kv->bind("out", &sim.out);
        kv->bind("svg", &sim.svg);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(sim.config);
                return run_simulate(sim);
            };
        });
    }

    ResidualParams res;
    {
        auto* c = app.add_subcommand("residual", "defect of a dense solution against the field");
        auto kv = std::make_shared<KvConfig>();
        c->add_option("--system", res.system, "system name");
        c->add_option("--y0", res.y0, "initial state, comma separated");
        c->add_option("--t0", res.t0, "start time");
        c->add_option("--t-end", res.t_end, "end time");
        c->add_option("--rtol", res.rtol, "relative tolerance");
        c->add_option("--atol", res.atol, "absolute tolerance");
        c->add_option("--samples-per-step", res.samples_per_step, "residual samples per step");
        c->add_option("--interpolant", res.interpolant, "cubic-hermite|method-order");
        c->add_flag("--relative", res.relative, "divide by max(1, |Y|)");
        c->add_option("--out", res.out, "residual CSV path");
        c->add_option("--svg", res.svg, "residual-norm SVG path");
        c->add_option("--config", res.config, "key = value file; file values win");
        kv->bind("system", &res.system);
        kv->bind("y0", &res.y0);
        kv->bind("t0", &res.t0);
        kv->bind("t-end", &res.t_end);
        kv->bind("rtol", &res.rtol);
        kv->bind("atol", &res.atol);
        kv->bind("samples-per-step", &res.samples_per_step);
        kv->bind("interpolant", &res.interpolant);
        kv->bind("relative", &res.relative);
        kv->bind("out", &res.out);
        kv->bind("svg", &res.svg);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(res.config);
                return run_residual(res);
            };
        });
    }

    LyapunovParams lya;
    {
        auto* c = app.add_subcommand("lyapunov", "largest Lyapunov exponent estimate");
        auto kv = std::make_shared<KvConfig>();
        c->add_option("--system", lya.system, "system name");
        c->add_option("--y0", lya.y0, "initial state, comma separated");
        c->add_option("--T", lya.T, "averaging horizon");
        c->add_option("--renorm", lya.renorm, "renormalization interval");
        c->add_option("--delta0", lya.delta0, "initial offset");
        c->add_option("--discard", lya.discard, "transient to discard");
        c->add_option("--rtol", lya.rtol, "relative tolerance");
        c->add_option("--atol", lya.atol, "absolute tolerance");
        c->add_option("--config", lya.config, "key = value file; file values win");
        kv->bind("system", &lya.system);
        kv->bind("y0", &lya.y0);
        kv->bind("T", &lya.T);
        kv->bind("renorm", &lya.renorm);
        kv->bind("delta0", &lya.delta0);
        kv->bind("discard", &lya.discard);
        kv->bind("rtol", &lya.rtol);
        kv->bind("atol", &lya.atol);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(lya.config);
                return run_lyapunov(lya);
            };
        });
    }

    SeparationParams sep;
    {
        auto* c = app.add_subcommand("separation",
                                     "time for two disturbed runs to drift apart");
        auto kv = std::make_shared<KvConfig>();
        c->add_option("--system", sep.system, "system name");
        c->add_option("--y0", sep.y0, "initial state, comma separated");
        c->add_option("--eps", sep.eps, "disturbance sizes, comma separated");
        c->add_option("--seed1", sep.seed1, "seed of the first disturbance");
        c->add_option("--seed2", sep.seed2, "seed of the second disturbance");
        c->add_option("--threshold", sep.threshold, "max-norm separation threshold");
        c->add_option("--horizon", sep.horizon, "integration horizon");
        c->add_option("--rtol", sep.rtol, "relative tolerance");
        c->add_option("--atol", sep.atol, "absolute tolerance");
        c->add_option("--out", sep.out, "per-epsilon CSV path");
        c->add_option("--svg", sep.svg, "T against ln(1/eps) SVG path");
        c->add_option("--config", sep.config, "key = value file; file values win");
        kv->bind("system", &sep.system);
        kv->bind("y0", &sep.y0);
        kv->bind("eps", &sep.eps);
        kv->bind("seed1", &sep.seed1);
        kv->bind("seed2", &sep.seed2);
        kv->bind("threshold", &sep.threshold);
        kv->bind("horizon", &sep.horizon);
        kv->bind("rtol", &sep.rtol);
        kv->bind("atol", &sep.atol);
        kv->bind("out", &sep.out);
        kv->bind("svg", &sep.svg);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(sep.config);
                return run_separation(sep);
            };
        });
    }

    LeapfrogParams lf;
    {
        auto* c = app.add_subcommand("leapfrog", "symplectic run with per-step energies");
        c->set_help_flag("--help", "print this help");  // frees -h for the step size
        auto kv = std::make_shared<KvConfig>();
        c->add_option("-h,--h", lf.h, "step size");
        c->add_option("--steps", lf.steps, "step count");
        c->add_option("--q1", lf.q1, "initial q1");
        c->add_option("--q2", lf.q2, "initial q2");
        c->add_option("--p1", lf.p1, "initial p1");
        c->add_option("--p2", lf.p2, "initial p2");
        c->add_option("--orders", lf.orders, "expansion orders, comma separated");
        c->add_option("--out", lf.out, "per-step energy CSV path");
        c->add_option("--svg", lf.svg, "energy-over-time SVG path");
        c->add_option("--config", lf.config, "key = value file; file values win");
        kv->bind("h", &lf.h);
        kv->bind("steps", &lf.steps);
        kv->bind("q1", &lf.q1);
        kv->bind("q2", &lf.q2);
        kv->bind("p1", &lf.p1);
        kv->bind("p2", &lf.p2);
        kv->bind("orders", &lf.orders);
        kv->bind("out", &lf.out);
        kv->bind("svg", &lf.svg);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(lf.config);
                return run_leapfrog(lf);
            };
        });
    }

    EnergyParams en;
    {
        auto* c = app.add_subcommand("energy", "drift summary and spurious-chaos detection");
        c->set_help_flag("--help", "print this help");  // frees -h for the step size
        auto kv = std::make_shared<KvConfig>();
        c->add_option("-h,--h", en.h, "step size");
        c->add_option("--steps", en.steps, "step count");
        c->add_option("--q1", en.q1, "initial q1");
        c->add_option("--q2", en.q2, "initial q2");
        c->add_option("--p1", en.p1, "initial p1");
        c->add_option("--p2", en.p2, "initial p2");
        c->add_option("--orders", en.orders, "expansion orders, comma separated");
        c->add_option("--flag-frac", en.flag_frac, "drift fraction that raises the flag");
        c->add_option("--out", en.out, "per-step energy CSV path");
        c->add_option("--config", en.config, "key = value file; file values win");
        kv->bind("h", &en.h);
        kv->bind("steps", &en.steps);
        kv->bind("q1", &en.q1);
        kv->bind("q2", &en.q2);
        kv->bind("p1", &en.p1);
        kv->bind("p2", &en.p2);
        kv->bind("orders", &en.orders);
        kv->bind("flag-frac", &en.flag_frac);
        kv->bind("out", &en.out);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(en.config);
                return run_energy(en);
            };
        });
    }

    OrbitGraphParams og;
    {
        auto* c = app.add_subcommand("orbit-graph",
                                     "successor graph of a rounded map over [0,1]");
        auto kv = std::make_shared<KvConfig>();
        c->add_option("--format", og.format, "float format, e.g. e3m4 or binary16");
        c->add_option("--map", og.map, "gauss|logistic|bernoulli|identity");
        c->add_option("--nan-policy", og.nan_policy, "redirect|sink");
        c->add_option("--edges-out", og.edges_out, "successor-table CSV path");
        c->add_option("--report-out", og.report_out, "cycle report JSON path");
        c->add_option("--dot-out", og.dot_out, "DOT path (small graphs)");
        c->add_option("--measure", og.measure, "compare against gauss|lebesgue measure");
        c->add_option("--config", og.config, "key = value file; file values win");
        kv->bind("format", &og.format);
        kv->bind("map", &og.map);
        kv->bind("nan-policy", &og.nan_policy);
        kv->bind("edges-out", &og.edges_out);
        kv->bind("report-out", &og.report_out);
        kv->bind("dot-out", &og.dot_out);
        kv->bind("measure", &og.measure);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(og.config);
                return run_orbit_graph(og);
            };
        });
    }

    ShadowParams sh;
    {
        auto* c = app.add_subcommand("shadow", "exact orbit near a rounded pseudo-orbit");
        auto kv = std::make_shared<KvConfig>();
        c->add_option("--format", sh.format, "float format");
        c->add_option("--map", sh.map, "map name (gauss only)");
        c->add_option("--start-index", sh.start_index, "single start, 1-based descending index");
        c->add_flag("--all", sh.all, "sweep every start (default)");
        c->add_option("--samples", sh.samples, "sweep over evenly spaced starts");
        c->add_option("--max-len", sh.max_len, "pseudo-orbit length cap");
        c->add_option("--out", sh.out, "per-point CSV path (single start)");
        c->add_option("--config", sh.config, "key = value file; file values win");
        kv->bind("format", &sh.format);
        kv->bind("map", &sh.map);
        kv->bind("max-len", &sh.max_len);
        kv->bind("samples", &sh.samples);
        kv->bind("out", &sh.out);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(sh.config);
                return run_shadow(sh);
            };
        });
    }

    ScalingParams sc;
    {
        auto* c = app.add_subcommand("scaling", "cycle growth across float formats");
        auto kv = std::make_shared<KvConfig>();
        c->add_option("--map", sc.map, "map name");
        c->add_option("--formats", sc.formats, "format list, comma separated");
        c->add_option("--out", sc.out, "per-format CSV path");
        c->add_option("--svg", sc.svg, "log-log SVG path");
        c->add_option("--config", sc.config, "key = value file; file values win");
        kv->bind("map", &sc.map);
        kv->bind("formats", &sc.formats);
        kv->bind("out", &sc.out);
        kv->bind("svg", &sc.svg);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(sc.config);
                return run_scaling(sc);
            };
        });
    }

    StatsParams st;
    {
        auto* c = app.add_subcommand("stats", "windowed trajectory statistics and histogram");
        auto kv = std::make_shared<KvConfig>();
        c->add_option("--system", st.system, "system name");
        c->add_option("--y0", st.y0, "initial state, comma separated");
        c->add_option("--t0", st.t0, "start time");
        c->add_option("--t-end", st.t_end, "end time");
        c->add_option("--from", st.from, "window start");
        c->add_option("--to", st.to, "window end");
        c->add_option("--bins", st.bins, "histogram bins");
        c->add_option("--samples", st.samples, "uniform samples in the window");
        c->add_option("--component", st.component, "histogram component (-1 = automatic)");
        c->add_option("--rtol", st.rtol, "relative tolerance");
        c->add_option("--atol", st.atol, "absolute tolerance");
        c->add_option("--hist-out", st.hist_out, "histogram CSV path");
        c->add_option("--svg", st.svg, "histogram SVG path");
        c->add_option("--config", st.config, "key = value file; file values win");
        kv->bind("system", &st.system);
        kv->bind("y0", &st.y0);
        kv->bind("t0", &st.t0);
        kv->bind("t-end", &st.t_end);
        kv->bind("from", &st.from);
        kv->bind("to", &st.to);
        kv->bind("bins", &st.bins);
        kv->bind("samples", &st.samples);
        kv->bind("component", &st.component);
        kv->bind("rtol", &st.rtol);
        kv->bind("atol", &st.atol);
        kv->bind("hist-out", &st.hist_out);
        kv->bind("svg", &st.svg);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(st.config);
                return run_stats(st);
            };
        });
    }

    ReproduceParams rp;
    {
        auto* c = app.add_subcommand("reproduce", "run every acceptance criterion into a report");
        auto kv = std::make_shared<KvConfig>();
        c->add_option("--out-dir", rp.out_dir, "output directory for report.json");
        c->add_option("--config", rp.config, "key = value file; file values win");
        kv->bind("out-dir", &rp.out_dir);
        c->callback([&, kv] {
            action = [&, kv] {
                kv->apply(rp.config);
                return run_reproduce(rp);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (!action) return 1;
    try {
        return action();
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
