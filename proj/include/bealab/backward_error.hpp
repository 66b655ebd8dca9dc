#pragma once

#include <array>
#include <memory>

#include "bealab/integrate.hpp"
#include "bealab/leapfrog.hpp"

namespace bealab {

// r(t) = Y'(t) - f(t, Y(t)) sampled along a dense solution
struct ResidualSeries {
    std::vector<double> times;
    std::vector<Vec> residuals;
    std::vector<double> norms;  // Euclidean per sample
    double max_norm = 0.0;
    double argmax_time = 0.0;
    bool relative = false;
};

ResidualSeries residual_series(const DenseSolution& sol, const System& system, double t_from,
                               double t_to, long n_samples, bool relative = false);

struct MaxResidual {
    double value = 0.0;
    double time = 0.0;
};

// samples every skeleton step uniformly (theta = j/s, j = 1..s), so doubling
// samples_per_step refines to a superset of sample points
MaxResidual max_residual(const DenseSolution& sol, const System& system, int samples_per_step,
                         bool relative = false);

// y -> f(y) + coefficient*h*J_f(y)*f(y). The first-order correction term of
// the stepper-adapted vector field for explicit Euler; default coefficient
// -1/2 is the convention that empirically raises the residual order (see the
// order tests).
std::shared_ptr<System> modified_euler_rhs(std::shared_ptr<const System> base, double h,
                                           double coefficient = -0.5);

// order (K1, K2, K4, K5, K7, K8, K10, K11)
std::array<double, 8> k_terms(const HamiltonianState& s);

// time derivative of (q1, q2, p1, p2) under the h^2/h^4-corrected field
std::array<double, 4> hh_modified_rhs(const HamiltonianState& s, double h);

// base flow without corrections, same ordering
std::array<double, 4> hh_rhs(const HamiltonianState& s);

double hh_h2(const HamiltonianState& s);
double hh_h4(const HamiltonianState& s);

// H0, H0 + h^2 H2, or H0 + h^2 H2 + h^4 H4
double modified_hamiltonian(const HamiltonianState& s, double h, int order);

struct EnergyDriftReport {
    double h = 0.0;
    long N = 0;
    std::vector<int> orders;
    std::vector<double> drift;     // max_k |Htilde(state_k) - Htilde(state_0)| per order
    std::vector<double> dev_up;    // max_k (Htilde_k - Htilde_0), clamped at 0
    std::vector<double> dev_down;  // max_k (Htilde_0 - Htilde_k), clamped at 0
    bool diverged = false;
    double reference_energy = 0.0;  // H at the initial state
};

EnergyDriftReport energy_drift(const LeapfrogRun& run, const std::vector<int>& orders = {0, 2, 4});

// true when the order-4 drift exceeds fraction*|reference_energy|
bool detect_spurious_chaos(const EnergyDriftReport& report, double reference_energy,
                           double fraction = 0.5);

}  // namespace bealab
