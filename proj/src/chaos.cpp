#include "bealab/chaos.hpp"

#include <cmath>
#include <random>

namespace bealab {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

// uniform in [0,1) from raw engine words, stable across library versions
double unit_uniform(std::mt19937& gen) {
    return (double)gen() * 0x1p-32;
}

}  // namespace

Disturbance::Disturbance(const DisturbanceSpec& spec) : spec_(spec) {
    if (spec_.dimension < 1) throw std::invalid_argument("disturbance: dimension >= 1");
    if (spec_.kind == DisturbanceKind::multi_sine) {
        std::mt19937 gen(spec_.seed);
        const int total = spec_.dimension * spec_.n_modes;
        omega_.resize(total);
        phase_.resize(total);
        for (int i = 0; i < total; ++i) {
            omega_[i] = spec_.omega_min + (spec_.omega_max - spec_.omega_min) * unit_uniform(gen);
            phase_[i] = TWO_PI * unit_uniform(gen);
        }
    }
}

void Disturbance::value(double t, double* out) const {
    const int d = spec_.dimension;
    if (spec_.kind == DisturbanceKind::multi_sine) {
        const int m = spec_.n_modes;
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) {
                const int idx = i * m + k;
                s += std::sin(omega_[idx] * t + phase_[idx]);
            }
            out[i] = s / (double)m;
        }
    } else {
        // piecewise constant on unit intervals, hashed from (seed, component, cell)
        const auto cell = (uint64_t)(int64_t)std::floor(t);
        for (int i = 0; i < d; ++i) {
            const uint64_t x = splitmix64(splitmix64((uint64_t)spec_.seed ^ (cell * 0x9e37u)) +
                                          (uint64_t)i);
            out[i] = 2.0 * ((double)(x >> 11) * 0x1p-53) - 1.0;
        }
    }
}

DisturbedSystem::DisturbedSystem(std::shared_ptr<const System> base, const DisturbanceSpec& spec)
    : base_(std::move(base)), dist_([&] {
          DisturbanceSpec s = spec;
          s.dimension = base_->dimension();
          return Disturbance(s);
      }()) {}

void DisturbedSystem::rhs(double t, const double* y, double* dydt) const {
    const int n = base_->dimension();
    base_->rhs(t, y, dydt);
    const double eps = dist_.spec().epsilon;
    if (eps != 0.0) {
        Vec v(n);
        dist_.value(t, v.data());
        for (int i = 0; i < n; ++i) dydt[i] += eps * v[i];
    }
}

StackedDisturbedPair::StackedDisturbedPair(std::shared_ptr<const System> base,
                                           const DisturbanceSpec& spec1,
                                           const DisturbanceSpec& spec2)
    : base_(std::move(base)), d1_([&] {
          DisturbanceSpec s = spec1;
          s.dimension = base_->dimension();
          return Disturbance(s);
      }()),
      d2_([&] {
          DisturbanceSpec s = spec2;
          s.dimension = base_->dimension();
          return Disturbance(s);
      }()) {}

void StackedDisturbedPair::rhs(double t, const double* y, double* dydt) const {
    const int n = base_->dimension();
    base_->rhs(t, y, dydt);
    base_->rhs(t, y + n, dydt + n);
    Vec v(n);
    if (d1_.spec().epsilon != 0.0) {
        d1_.value(t, v.data());
        for (int i = 0; i < n; ++i) dydt[i] += d1_.spec().epsilon * v[i];
    }
    if (d2_.spec().epsilon != 0.0) {
        d2_.value(t, v.data());
        for (int i = 0; i < n; ++i) dydt[n + i] += d2_.spec().epsilon * v[i];
    }
}

double lyapunov_estimate(const System& system, const Vec& y0, double T_total,
                         double renorm_interval, double delta0, double discard, double rtol,
                         double atol) {
    if (T_total < 20.0 * renorm_interval)
        throw std::invalid_argument("lyapunov_estimate: T_total must cover >= 20 intervals");
    const int n = system.dimension();

    SolverConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = atol;

    Vec ref = y0, pert = y0;
    pert[0] += delta0;

    double t = 0.0;
    double log_sum = 0.0;
    double time_counted = 0.0;
    while (t < T_total - 1e-12) {
        const double t1 = std::min(t + renorm_interval, T_total);
        auto r1 = integrate_adaptive(system, ref, t, t1, cfg);
        auto r2 = integrate_adaptive(system, pert, t, t1, cfg);
        if (!r1.ok() || !r2.ok())
            throw std::runtime_error("lyapunov_estimate: trajectory integration failed");
        ref = r1.solution.skeleton.states.back();
        pert = r2.solution.skeleton.states.back();

        Vec diff(n);
        for (int i = 0; i < n; ++i) diff[i] = pert[i] - ref[i];
        const double d = norm2(diff);
        if (d == 0.0) throw std::runtime_error("lyapunov_estimate: perturbation collapsed");
        if (t1 > discard) {
            log_sum += std::log(d / delta0);
            time_counted += t1 - t;
        }
        for (int i = 0; i < n; ++i) pert[i] = ref[i] + delta0 * diff[i] / d;
        t = t1;
    }
    if (time_counted <= 0.0) throw std::runtime_error("lyapunov_estimate: nothing after discard");
    return log_sum / time_counted;
}

SeparationResult separation_time(std::shared_ptr<const System> system, const Vec& y0,
                                 const DisturbanceSpec& spec1, const DisturbanceSpec& spec2,
                                 double threshold, double horizon, double rtol, double atol) {
    const int n = system->dimension();
    StackedDisturbedPair pair(system, spec1, spec2);
    Vec z0(2 * n);
    for (int i = 0; i < n; ++i) z0[i] = z0[n + i] = y0[i];

    SolverConfig cfg;
    cfg.rtol = rtol;
    cfg.atol = atol;
    auto res = integrate_adaptive(pair, z0, 0.0, horizon, cfg);

    SeparationResult out;
    out.eps1 = spec1.epsilon;
    out.eps2 = spec2.epsilon;
    out.seed1 = spec1.seed;
    out.seed2 = spec2.seed;
    out.threshold = threshold;
    out.horizon = horizon;
    out.times = res.solution.skeleton.times;
    out.status = res.status;

    const double t_max = res.t_reached;
    auto gap = [&](double t) {
        Vec y = res.solution.eval(t);
        double g = 0.0;
        for (int i = 0; i < n; ++i) g = std::max(g, std::abs(y[i] - y[n + i]));
        return g;
    };

    // scan a fixed fine grid, then bisect inside the first bracketing cell;
    // the fixed grid keeps first-crossing times monotone in the threshold
    const double dt = 0.01;
    double prev_t = 0.0;
    const long cells = (long)std::ceil(t_max / dt);
    for (long k = 1; k <= cells; ++k) {
        const double tk = std::min(t_max, (double)k * dt);
        if (gap(tk) >= threshold) {
            double lo = prev_t, hi = tk;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (gap(mid) >= threshold)
                    hi = mid;
                else
                    lo = mid;
            }
            out.reached = true;
            out.T = hi;
            return out;
        }
        prev_t = tk;
    }
    return out;
}

SeparationScaling separation_scaling(std::shared_ptr<const System> system, const Vec& y0,
                                     const std::vector<double>& epsilons, uint32_t seed1,
                                     uint32_t seed2, double threshold, double horizon) {
    if (epsilons.size() < 2)
        throw std::invalid_argument("separation_scaling: need at least two epsilon values");
    SeparationScaling sc;
    for (double eps : epsilons) {
        DisturbanceSpec s1, s2;
        s1.epsilon = s2.epsilon = eps;
        s1.seed = seed1;
        s2.seed = seed2;
        auto r = separation_time(system, y0, s1, s2, threshold, horizon);
        if (r.reached) {
            sc.epsilons.push_back(eps);
            sc.T.push_back(r.T);
        } else {
            sc.excluded_epsilons.push_back(eps);
        }
    }
    if (sc.epsilons.size() < 2)
        throw std::runtime_error("separation_scaling: fewer than two runs separated");
    std::vector<double> x(sc.epsilons.size());
    for (size_t i = 0; i < x.size(); ++i) x[i] = std::log(1.0 / sc.epsilons[i]);
    const LineFit f = linear_fit(x, sc.T);
    sc.slope = f.slope;
    sc.intercept = f.intercept;
    return sc;
}

StatisticsReport trajectory_statistics(const DenseSolution& sol, double t_a, double t_b,
                                       int n_bins, long n_samples, int component) {
    if (n_samples < 1000) throw std::invalid_argument("trajectory_statistics: n_samples >= 1000");
    if (n_bins < 1) throw std::invalid_argument("trajectory_statistics: n_bins >= 1");
    const int dim = sol.dimension();
    if (component < 0) component = std::min(2, dim - 1);

    StatisticsReport rep;
    rep.t_a = t_a;
    rep.t_b = t_b;
    rep.component = component;
    rep.n_samples = n_samples;
    rep.mean.assign(dim, 0.0);
    rep.stddev.assign(dim, 0.0);

    std::vector<double> comp(n_samples);
    Vec y(dim);
    for (long j = 0; j < n_samples; ++j) {
        const double t = t_a + (t_b - t_a) * (double)j / (double)(n_samples - 1);
        sol.eval(t, y.data());
        for (int i = 0; i < dim; ++i) rep.mean[i] += y[i];
        comp[j] = y[component];
    }
    for (int i = 0; i < dim; ++i) rep.mean[i] /= (double)n_samples;

    for (long j = 0; j < n_samples; ++j) {
        const double t = t_a + (t_b - t_a) * (double)j / (double)(n_samples - 1);
        sol.eval(t, y.data());
        for (int i = 0; i < dim; ++i) {
            const double d = y[i] - rep.mean[i];
            rep.stddev[i] += d * d;
        }
    }
    for (int i = 0; i < dim; ++i) rep.stddev[i] = std::sqrt(rep.stddev[i] / (double)n_samples);

    double lo = comp[0], hi = comp[0];
    for (double v : comp) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    rep.bin_edges.resize(n_bins + 1);
    for (int b = 0; b <= n_bins; ++b)
        rep.bin_edges[b] = lo + (hi - lo) * (double)b / (double)n_bins;
    rep.counts.assign(n_bins, 0);
    for (double v : comp) {
        int b = (int)((v - lo) / (hi - lo) * n_bins);
        b = std::clamp(b, 0, n_bins - 1);
        ++rep.counts[b];
    }
    rep.frequencies.resize(n_bins);
    for (int b = 0; b < n_bins; ++b)
        rep.frequencies[b] = (double)rep.counts[b] / (double)n_samples;
    return rep;
}

EnvelopeFit secular_envelope(double epsilon, double omega, double t_end, double sample_dt) {
    ForcedOscillator sys(epsilon, omega);
    SolverConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-10;
    auto res = integrate_adaptive(sys, {0.0, 0.0}, 0.0, t_end, cfg);
    if (!res.ok()) throw std::runtime_error("secular_envelope: integration failed");

    const long m = (long)std::floor(t_end / sample_dt);
    std::vector<double> amp(m + 1), ts(m + 1);
    Vec y(2);
    for (long j = 0; j <= m; ++j) {
        ts[j] = std::min(t_end, (double)j * sample_dt);
        res.solution.eval(ts[j], y.data());
        amp[j] = std::abs(y[0]);
    }

    std::vector<double> mt, mv;
    for (long j = 1; j + 1 <= m; ++j)
        if (amp[j] > amp[j - 1] && amp[j] > amp[j + 1]) {
            mt.push_back(ts[j]);
            mv.push_back(amp[j]);
        }

    EnvelopeFit fit;
    fit.n_maxima = (long)mt.size();
    if (mt.size() >= 3) {
        const LineFit f = linear_fit(mt, mv);
        fit.slope = f.slope;
        fit.intercept = f.intercept;
    }
    return fit;
}

}  // namespace bealab
