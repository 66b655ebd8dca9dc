#pragma once

#include <array>
#include <functional>
#include <vector>

#include "bealab/core.hpp"

namespace bealab {

struct HamiltonianState {
    double q1 = 0, q2 = 0, p1 = 0, p2 = 0;
};

// H = (p1^2 + p2^2)/2 + (q1^2 + q2^2)/2 + q1^2 q2 - q2^3/3
double hh_hamiltonian(const HamiltonianState& s);

// gradient of the potential, (dU/dq1, dU/dq2)
std::array<double, 2> hh_potential_grad(double q1, double q2);

struct LeapfrogRun {
    double h = 0;
    long N = 0;
    std::vector<HamiltonianState> states;  // length N+1 unless divergence truncates
    long diverged_at = -1;                 // step index of first non-finite state
};

// half-drift, kick, half-drift with the two-well cubic potential
LeapfrogRun leapfrog_dkd(const HamiltonianState& state0, double h, long N);

// same stepper with a caller-supplied potential gradient (used for reductions
// of the potential in tests)
LeapfrogRun leapfrog_dkd_custom(const std::function<std::array<double, 2>(double, double)>& grad,
                                const HamiltonianState& state0, double h, long N);

struct KickDriftRun {
    double h = 0;
    long N = 0;
    std::vector<std::array<double, 2>> p;  // length N+1
    std::vector<std::array<double, 2>> Q;  // staggered positions, length N+1
    long force_evals = 0;
    long diverged_at = -1;
};

// p_{n+1} = p_n - h U_q(Q_n), Q_{n+1} = Q_n + h p_{n+1}; one force
// evaluation per step. With Q_0 = q_0 + h p_0 / 2 the p-sequence matches
// leapfrog_dkd.
KickDriftRun leapfrog_kick_drift(const std::array<double, 2>& p0,
                                 const std::array<double, 2>& Q0, double h, long N);

}  // namespace bealab
