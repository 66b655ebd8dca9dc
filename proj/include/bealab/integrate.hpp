#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bealab/system.hpp"

namespace bealab {

enum class Interpolant { cubic_hermite, method_order };

struct SolverConfig {
    double rtol = 1e-8;
    double atol = 1e-8;
    double h_init = 0.0;  // 0 = auto via curvature heuristic
    double h_max = 0.0;   // 0 = unbounded
    double safety = 0.9;
    double step_shrink_floor = 0.2;
    double step_grow_cap = 5.0;
    Interpolant interpolant = Interpolant::cubic_hermite;
};

struct SolutionSkeleton {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<Vec> derivatives;  // rhs at each accepted point, bit-exact
    long steps = 0;
    long rejected = 0;
};

enum class SolveStatus { ok, step_underflow, diverged };

// Piecewise polynomial over the skeleton. cubic_hermite matches value and
// slope at both ends of every step. method_order adds a quartic bump
// w(theta) = theta^2 (1-theta)^2 fitted to one extra slope sample at
// theta = 1/4, which leaves all four node conditions bit-exact.
class DenseSolution {
  public:
    SolutionSkeleton skeleton;
    Interpolant kind = Interpolant::cubic_hermite;
    std::vector<Vec> bump;  // per-step correction vectors, method_order only

    int dimension() const { return skeleton.states.empty() ? 0 : (int)skeleton.states[0].size(); }
    double t_begin() const { return skeleton.times.front(); }
    double t_end() const { return skeleton.times.back(); }

    void eval(double t, double* out) const { eval_impl(t, 0, out); }
    void eval_derivative(double t, double* out) const { eval_impl(t, 1, out); }
    Vec eval(double t) const {
        Vec out(dimension());
        eval(t, out.data());
        return out;
    }
    Vec eval_derivative(double t) const {
        Vec out(dimension());
        eval_derivative(t, out.data());
        return out;
    }

  private:
    void eval_impl(double t, int order, double* out) const;
    size_t locate(double& t) const;
};

struct IntegrationResult {
    DenseSolution solution;
    SolveStatus status = SolveStatus::ok;
    double t_reached = 0.0;
    std::string message;
    std::vector<double> accepted_errors;  // weighted RMS error estimate per accepted step

    bool ok() const { return status == SolveStatus::ok; }
};

// Adaptive embedded 5(4) explicit Runge-Kutta pair with FSAL and dense output.
IntegrationResult integrate_adaptive(const System& system, const Vec& y0, double t0,
                                     double t_end, const SolverConfig& config = {});

// Fixed-step explicit Euler; dense output by cubic Hermite over stored slopes.
IntegrationResult integrate_euler_fixed(const System& system, const Vec& y0, double t0,
                                        double t_end, double h);

// Rebuilds dense output over an existing skeleton with slopes taken from the
// given vector field (the skeleton's states and times are kept as-is).
DenseSolution dense_with_field(const SolutionSkeleton& skeleton, const System& field,
                               Interpolant kind = Interpolant::cubic_hermite);

inline Vec eval_dense(const DenseSolution& sol, double t, int derivative_order = 0) {
    if (derivative_order == 0) return sol.eval(t);
    if (derivative_order == 1) return sol.eval_derivative(t);
    throw std::invalid_argument("derivative_order must be 0 or 1");
}

}  // namespace bealab
