#include "bealab/leapfrog.hpp"

#include <cmath>

namespace bealab {

double hh_hamiltonian(const HamiltonianState& s) {
    return 0.5 * (s.p1 * s.p1 + s.p2 * s.p2 + s.q1 * s.q1 + s.q2 * s.q2) +
           s.q1 * s.q1 * s.q2 - s.q2 * s.q2 * s.q2 / 3.0;
}

std::array<double, 2> hh_potential_grad(double q1, double q2) {
    return {q1 + 2.0 * q1 * q2, q2 + q1 * q1 - q2 * q2};
}

static bool finite_state(const HamiltonianState& s) {
    return std::isfinite(s.q1) && std::isfinite(s.q2) && std::isfinite(s.p1) &&
           std::isfinite(s.p2);
}

LeapfrogRun leapfrog_dkd_custom(const std::function<std::array<double, 2>(double, double)>& grad,
                                const HamiltonianState& state0, double h, long N) {
    // negative h is allowed so a run can be stepped back in time (reversibility)
    if (h == 0.0 || !std::isfinite(h) || N < 1)
        throw std::invalid_argument("leapfrog: need a nonzero finite h and N >= 1");
    LeapfrogRun run;
    run.h = h;
    run.N = N;
    run.states.reserve(N + 1);
    run.states.push_back(state0);

    HamiltonianState s = state0;
    const double hh = 0.5 * h;
    for (long k = 0; k < N; ++k) {
        const double q1m = s.q1 + hh * s.p1;
        const double q2m = s.q2 + hh * s.p2;
        const auto g = grad(q1m, q2m);
        s.p1 -= h * g[0];
        s.p2 -= h * g[1];
        s.q1 = q1m + hh * s.p1;
        s.q2 = q2m + hh * s.p2;
        if (!finite_state(s)) {
            run.diverged_at = k + 1;
            break;
        }
        run.states.push_back(s);
    }
    return run;
}

LeapfrogRun leapfrog_dkd(const HamiltonianState& state0, double h, long N) {
    return leapfrog_dkd_custom([](double q1, double q2) { return hh_potential_grad(q1, q2); },
                               state0, h, N);
}

KickDriftRun leapfrog_kick_drift(const std::array<double, 2>& p0,
                                 const std::array<double, 2>& Q0, double h, long N) {
    if (h == 0.0 || !std::isfinite(h) || N < 1)
        throw std::invalid_argument("leapfrog: need a nonzero finite h and N >= 1");
    KickDriftRun run;
    run.h = h;
    run.N = N;
    run.p.reserve(N + 1);
    run.Q.reserve(N + 1);
    run.p.push_back(p0);
    run.Q.push_back(Q0);

    std::array<double, 2> p = p0, Q = Q0;
    for (long k = 0; k < N; ++k) {
        const auto g = hh_potential_grad(Q[0], Q[1]);
        ++run.force_evals;
        p[0] -= h * g[0];
        p[1] -= h * g[1];
        Q[0] += h * p[0];
        Q[1] += h * p[1];
        if (!(std::isfinite(p[0]) && std::isfinite(p[1]) && std::isfinite(Q[0]) &&
              std::isfinite(Q[1]))) {
            run.diverged_at = k + 1;
            break;
        }
        run.p.push_back(p);
        run.Q.push_back(Q);
    }
    return run;
}

}  // namespace bealab
