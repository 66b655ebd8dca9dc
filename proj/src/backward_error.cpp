#include "bealab/backward_error.hpp"

#include <cmath>

namespace bealab {

ResidualSeries residual_series(const DenseSolution& sol, const System& system, double t_from,
                               double t_to, long n_samples, bool relative) {
    if (n_samples < 2) throw std::invalid_argument("residual_series: need n_samples >= 2");
    if (t_from < sol.t_begin() || t_to > sol.t_end() || t_from > t_to)
        throw std::out_of_range("residual_series: range outside solution span");

    const int n = sol.dimension();
    ResidualSeries rs;
    rs.relative = relative;
    rs.times.reserve(n_samples);
    rs.residuals.reserve(n_samples);
    rs.norms.reserve(n_samples);

    Vec y(n), yp(n), f(n), r(n);
    rs.argmax_time = t_from;
    for (long j = 0; j < n_samples; ++j) {
        const double t = t_from + (t_to - t_from) * (double)j / (double)(n_samples - 1);
        sol.eval(t, y.data());
        sol.eval_derivative(t, yp.data());
        system.rhs(t, y.data(), f.data());
        for (int i = 0; i < n; ++i) r[i] = yp[i] - f[i];
        double nm = norm2(r);
        if (relative) nm /= std::max(1.0, norm2(y));
        rs.times.push_back(t);
        rs.residuals.push_back(r);
        rs.norms.push_back(nm);
        if (nm > rs.max_norm) {
            rs.max_norm = nm;
            rs.argmax_time = t;
        }
    }
    return rs;
}

MaxResidual max_residual(const DenseSolution& sol, const System& system, int samples_per_step,
                         bool relative) {
    if (samples_per_step < 1) throw std::invalid_argument("max_residual: samples_per_step >= 1");
    const auto& ts = sol.skeleton.times;
    const int n = sol.dimension();
    MaxResidual best;
    best.time = ts.front();

    Vec y(n), yp(n), f(n);
    for (size_t k = 0; k + 1 < ts.size(); ++k) {
        const double h = ts[k + 1] - ts[k];
        for (int j = 1; j <= samples_per_step; ++j) {
            const double t = ts[k] + h * (double)j / (double)samples_per_step;
            sol.eval(t, y.data());
            sol.eval_derivative(t, yp.data());
            system.rhs(t, y.data(), f.data());
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                const double r = yp[i] - f[i];
                s += r * r;
            }
            double nm = std::sqrt(s);
            if (relative) nm /= std::max(1.0, norm2(y));
            if (nm > best.value) {
                best.value = nm;
                best.time = t;
            }
        }
    }
    return best;
}

namespace {

class ModifiedEulerSystem : public System {
  public:
    ModifiedEulerSystem(std::shared_ptr<const System> base, double h, double c)
        : base_(std::move(base)), h_(h), c_(c) {
        if (!base_->has_jacobian())
            throw std::invalid_argument("modified_euler_rhs: base system has no Jacobian");
    }
    int dimension() const override { return base_->dimension(); }
    void rhs(double t, const double* y, double* dydt) const override {
        const int n = base_->dimension();
        Vec f(n), J(n * n);
        base_->rhs(t, y, f.data());
        base_->jacobian(t, y, J.data());
        for (int i = 0; i < n; ++i) {
            double jf = 0.0;
            for (int j = 0; j < n; ++j) jf += J[i * n + j] * f[j];
            dydt[i] = f[i] + c_ * h_ * jf;
        }
    }
    std::string name() const override { return base_->name() + "+h-correction"; }

  private:
    std::shared_ptr<const System> base_;
    double h_, c_;
};

}  // namespace

std::shared_ptr<System> modified_euler_rhs(std::shared_ptr<const System> base, double h,
                                           double coefficient) {
    return std::make_shared<ModifiedEulerSystem>(std::move(base), h, coefficient);
}

std::array<double, 8> k_terms(const HamiltonianState& s) {
    const double q1 = s.q1, q2 = s.q2, p1 = s.p1, p2 = s.p2;

    const double K1 = -2 * q1 + 5 * p1 * p2 - 24 * q1 * q2 - 20 * q1 * q2 * q2 -
                      24 * q2 * q1 * q1 * q1 - 8 * q1 * q2 * q2 * q2 + 5 * q1 * p1 * p1 -
                      q1 * p2 * p2 - 20 * q1 * q1 * q1 + 6 * q2 * p1 * p2;
    const double K2 = p1 * p2 - 2 * q1 * q1 * q1 - 2 * q1 * q2 * q2 - 6 * q1 * q2 - q1;
    const double K4 = 2 * q2 * p1 * p1 - 10 * q2 * p2 * p2 + 24 * q1 * q1 * q2 * q2 +
                      40 * q2 * q2 * q2 + 12 * q1 * q1 * q1 * q1 - 20 * q2 * q2 * q2 * q2 +
                      40 * q1 * q1 * q2 - 12 * q1 * p1 * p2 + 24 * q1 * q1 - 24 * q2 * q2 -
                      5 * p1 * p1 + 5 * p2 * p2 + 4 * q2;
    const double K5 = p1 * p1 - p2 * p2 - 6 * q1 * q1 + 6 * q2 * q2 - 2 * q2 -
                      4 * q1 * q1 * q2 - 4 * q2 * q2 * q2;
    const double K7 = 12 * q2 * q1 * p2 - 2 * p1 * q2 * q2 + 10 * p1 * q2 + 10 * q1 * q1 * p1 +
                      10 * q1 * p2 + p1;
    const double K8 = 2 * q1 * p2 + 2 * p1 * q2 + p1;
    const double K10 = -2 * q1 * q1 * p2 + 12 * q1 * p1 * q2 + 10 * q1 * p1 +
                       10 * q2 * q2 * p2 - 10 * q2 * p2 + p2;
    const double K11 = 2 * q1 * p1 - 2 * q2 * p2 + p2;

    return {K1, K2, K4, K5, K7, K8, K10, K11};
}

std::array<double, 4> hh_rhs(const HamiltonianState& s) {
    return {s.p1, s.p2, -s.q1 - 2 * s.q1 * s.q2, -s.q2 - s.q1 * s.q1 + s.q2 * s.q2};
}

std::array<double, 4> hh_modified_rhs(const HamiltonianState& s, double h) {
    const auto K = k_terms(s);
    const double K1 = K[0], K2 = K[1], K4 = K[2], K5 = K[3];
    const double K7 = K[4], K8 = K[5], K10 = K[6], K11 = K[7];
    const double h2 = h * h;
    const double h4 = h2 * h2;
    const auto base = hh_rhs(s);
    return {base[0] - K8 / 12.0 * h2 - K7 / 120.0 * h4,
            base[1] - K11 / 12.0 * h2 - K10 / 120.0 * h4,
            base[2] + K2 / 6.0 * h2 + K1 / 60.0 * h4,
            base[3] + K5 / 12.0 * h2 - K4 / 120.0 * h4};
}

double hh_h2(const HamiltonianState& s) {
    const double q1 = s.q1, q2 = s.q2, p1 = s.p1, p2 = s.p2;
    return -p1 * p1 * q2 / 12.0 - p1 * p1 / 24.0 - q1 * p2 * p1 / 6.0 + p2 * p2 * q2 / 12.0 -
           p2 * p2 / 24.0 + q1 * q1 * q1 * q1 / 12.0 + q1 * q1 * q2 * q2 / 6.0 +
           q2 * q2 * q2 * q2 / 12.0 + q1 * q1 * q2 / 2.0 - q2 * q2 * q2 / 6.0 + q1 * q1 / 12.0 +
           q2 * q2 / 12.0;
}

double hh_h4(const HamiltonianState& s) {
    const double q1 = s.q1, q2 = s.q2, p1 = s.p1, p2 = s.p2;
    return q1 * q1 * q1 * q1 * q2 / 10.0 + q1 * q1 * q2 * q2 * q2 / 15.0 -
           q2 * q2 * q2 * q2 * q2 / 30.0 - p1 * p1 * q1 * q1 / 24.0 +
           p1 * p1 * q2 * q2 / 120.0 - p1 * q2 * q1 * p2 / 10.0 + p2 * p2 * q1 * q1 / 120.0 -
           p2 * p2 * q2 * q2 / 24.0 + q1 * q1 * q1 * q1 / 12.0 + q1 * q1 * q2 * q2 / 6.0 +
           q2 * q2 * q2 * q2 / 12.0 - p1 * p1 * q2 / 24.0 - q1 * p2 * p1 / 12.0 +
           p2 * p2 * q2 / 24.0 + q1 * q1 * q2 / 5.0 - q2 * q2 * q2 / 15.0 - p1 * p1 / 240.0 -
           p2 * p2 / 240.0 + q1 * q1 / 60.0 + q2 * q2 / 60.0;
}

double modified_hamiltonian(const HamiltonianState& s, double h, int order) {
    const double h0 = hh_hamiltonian(s);
    if (order == 0) return h0;
    const double h2 = h * h;
    if (order == 2) return h0 + h2 * hh_h2(s);
    if (order == 4) return h0 + h2 * hh_h2(s) + h2 * h2 * hh_h4(s);
    throw std::invalid_argument("modified_hamiltonian: order must be 0, 2 or 4");
}

EnergyDriftReport energy_drift(const LeapfrogRun& run, const std::vector<int>& orders) {
    if (run.states.empty()) throw std::invalid_argument("energy_drift: empty run");
    EnergyDriftReport rep;
    rep.h = run.h;
    rep.N = run.N;
    rep.orders = orders;
    rep.diverged = run.diverged_at >= 0;
    rep.reference_energy = hh_hamiltonian(run.states.front());

    for (int ord : orders) {
        const double e0 = modified_hamiltonian(run.states.front(), run.h, ord);
        double up = 0.0, down = 0.0;
        for (const auto& st : run.states) {
            const double d = modified_hamiltonian(st, run.h, ord) - e0;
            up = std::max(up, d);
            down = std::max(down, -d);
        }
        rep.drift.push_back(std::max(up, down));
        rep.dev_up.push_back(up);
        rep.dev_down.push_back(down);
    }
    return rep;
}

bool detect_spurious_chaos(const EnergyDriftReport& report, double reference_energy,
                           double fraction) {
    if (reference_energy == 0.0)
        throw std::invalid_argument("detect_spurious_chaos: reference energy must be nonzero");
    double drift4 = 0.0;
    bool found = false;
    for (size_t i = 0; i < report.orders.size(); ++i)
        if (report.orders[i] == 4) {
            drift4 = report.drift[i];
            found = true;
        }
    if (!found) throw std::invalid_argument("detect_spurious_chaos: report lacks order-4 drift");
    return drift4 > fraction * std::abs(reference_energy);
}

}  // namespace bealab
