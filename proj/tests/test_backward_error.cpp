#include <doctest.h>

#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "bealab/backward_error.hpp"
#include "bealab/core.hpp"
#include "bealab/integrate.hpp"
#include "bealab/leapfrog.hpp"
#include "bealab/systems.hpp"

using namespace bealab;

TEST_CASE("residual vanishes identically on a constant solution") {
    ConstantRhs sys(2);
    auto res = integrate_adaptive(sys, {1.0, -2.0}, 0.0, 5.0);
    REQUIRE(res.ok());
    auto rs = residual_series(res.solution, sys, 0.0, 5.0, 101);
    CHECK(rs.max_norm == 0.0);
}

TEST_CASE("residual at skeleton nodes is zero by construction") {
    Lorenz sys;
    auto res = integrate_adaptive(sys, {1.0, 0.0, 0.0}, 0.0, 2.0);
    REQUIRE(res.ok());
    const auto& sk = res.solution.skeleton;
    Vec d(3), f(3);
    for (size_t n = 0; n < sk.times.size(); ++n) {
        res.solution.eval_derivative(sk.times[n], d.data());
        sys.rhs(sk.times[n], sk.states[n].data(), f.data());
        for (int i = 0; i < 3; ++i) CHECK(d[i] == f[i]);
    }
}

TEST_CASE("chaotic-run residual sits in the expected band and shrinks with tolerance") {
    Lorenz sys;
    std::vector<double> tols = {1e-8, 1e-9, 1e-10}, maxima;
    for (double tol : tols) {
        SolverConfig cfg;
        cfg.rtol = cfg.atol = tol;
        cfg.interpolant = Interpolant::method_order;
        auto res = integrate_adaptive(sys, {1.0, 0.0, 0.0}, 0.0, 50.0, cfg);
        REQUIRE(res.ok());
        maxima.push_back(max_residual(res.solution, sys, 8).value);
    }
    CHECK(maxima[0] > 1e-5);
    CHECK(maxima[0] < 1e-2);
    CHECK(maxima[0] > 1.57e-4 / 100);
    CHECK(maxima[0] < 1.57e-4 * 100);
    CHECK(maxima[1] < maxima[0]);
    CHECK(maxima[2] < maxima[1]);
}

TEST_CASE("refining the sample grid can only raise the observed maximum") {
    Lorenz sys;
    auto res = integrate_adaptive(sys, {1.0, 0.0, 0.0}, 0.0, 10.0);
    REQUIRE(res.ok());
    auto coarse = max_residual(res.solution, sys, 4);
    auto fine = max_residual(res.solution, sys, 8);
    CHECK(coarse.value <= fine.value);
}

TEST_CASE("relative and absolute residuals agree when the state norm is small") {
    Decay sys(1);  // |y| <= 1 on [0, 1], so the scale divisor is exactly 1
    auto res = integrate_adaptive(sys, {1.0}, 0.0, 1.0);
    REQUIRE(res.ok());
    auto abs_r = max_residual(res.solution, sys, 6, false);
    auto rel_r = max_residual(res.solution, sys, 6, true);
    CHECK(abs_r.value == rel_r.value);
    CHECK(abs_r.time == rel_r.time);
}

TEST_CASE("the corrected field collapses to the base field at h = 0") {
    auto base = std::make_shared<Lorenz>();
    auto g = modified_euler_rhs(base, 0.0);
    Vec y = {1.3, -0.4, 17.0}, f0(3), f1(3);
    base->rhs(0.0, y.data(), f0.data());
    g->rhs(0.0, y.data(), f1.data());
    for (int i = 0; i < 3; ++i) CHECK(f0[i] == f1[i]);
}

namespace {

class Rotation2 : public System {
  public:
    int dimension() const override { return 2; }
    void rhs(double, const double* y, double* d) const override {
        d[0] = y[1];
        d[1] = -y[0];
    }
    bool has_jacobian() const override { return true; }
    void jacobian(double, const double*, double* J) const override {
        J[0] = 0.0;
        J[1] = 1.0;
        J[2] = -1.0;
        J[3] = 0.0;
    }
    std::string name() const override { return "rotation"; }
};

}  // namespace

TEST_CASE("first-order correction term matches a hand computation") {
    auto base = std::make_shared<Rotation2>();
    auto g = modified_euler_rhs(base, 0.1, -0.5);
    Vec y = {0.3, -0.7}, out(2);
    g->rhs(0.0, y.data(), out.data());
    // f = (-0.7, -0.3), J f = (-0.3, 0.7), g = f - 0.05 J f
    CHECK(out[0] == doctest::Approx(-0.685).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(-0.335).epsilon(1e-15));
}

TEST_CASE("systems without a Jacobian cannot be corrected") {
    auto base = std::make_shared<ForcedOscillator>();
    CHECK_THROWS_AS((void)modified_euler_rhs(base, 0.1), std::invalid_argument);
}

namespace {

double euler_residual_vs_field(double h, double coefficient) {
    auto base = std::make_shared<Lorenz>();
    auto res = integrate_euler_fixed(*base, {1.0, 0.0, 0.0}, 0.0, 2.0, h);
    REQUIRE(res.ok());
    auto field = modified_euler_rhs(base, h, coefficient);
    DenseSolution rebuilt = dense_with_field(res.solution.skeleton, *field);
    return max_residual(rebuilt, *field, 4).value;
}

}  // namespace

TEST_CASE("only the minus-half convention lifts the residual order") {
    std::vector<double> hs = {1e-3, 5e-4, 2.5e-4};
    std::vector<double> r_minus, r_plus;
    for (double h : hs) {
        r_minus.push_back(euler_residual_vs_field(h, -0.5));
        r_plus.push_back(euler_residual_vs_field(h, +0.5));
    }
    const double s_minus = loglog_fit(hs, r_minus).slope;
    const double s_plus = loglog_fit(hs, r_plus).slope;
    CHECK(s_minus > 1.7);
    CHECK(s_minus < 2.3);
    CHECK(!(s_plus > 1.7 && s_plus < 2.3));
}

TEST_CASE("quartic correction building blocks at reference states") {
    auto z = k_terms(HamiltonianState{});
    for (double v : z) CHECK(v == 0.0);

    auto k = k_terms(HamiltonianState{0.0, 0.0, 1.0, 0.0});
    std::array<double, 8> expected = {0.0, 0.0, -5.0, 1.0, 1.0, 1.0, 0.0, 0.0};
    for (int i = 0; i < 8; ++i) CHECK(k[i] == expected[i]);

    auto kk = k_terms(HamiltonianState{0.12, 0.12, 0.12, 0.12});
    std::array<double, 8> frozen = {-0.57207552, -0.198912, 0.58699776, -0.253824,
                                    0.44256,     0.1776,    0.15456,    0.12};
    for (int i = 0; i < 8; ++i) CHECK(kk[i] == doctest::Approx(frozen[i]).epsilon(1e-12));
}

TEST_CASE("corrected flow at reference states") {
    HamiltonianState s{0.12, 0.12, 0.12, 0.12};

    auto plain = hh_rhs(s);
    auto zero_h = hh_modified_rhs(s, 0.0);
    for (int i = 0; i < 4; ++i) CHECK(plain[i] == zero_h[i]);

    auto at_origin = hh_modified_rhs(HamiltonianState{}, 0.1);
    for (double v : at_origin) CHECK(v == 0.0);

    auto r = hh_modified_rhs(s, 0.1);
    std::array<double, 4> frozen = {0.1198516312, 0.1198998712, -0.1491324734592,
                                    -0.1202120091648};
    for (int i = 0; i < 4; ++i) CHECK(r[i] == doctest::Approx(frozen[i]).epsilon(1e-12));
}

TEST_CASE("corrected flow is the canonical flow of the corrected energy") {
    const double fd = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
        std::array<double, 4> z;
        for (int i = 0; i < 4; ++i) {
            uint64_t bits = splitmix64(77 * (uint64_t)trial + (uint64_t)i + 5);
            z[i] = ((double)(bits >> 11) * 0x1p-53 - 0.5);
        }
        HamiltonianState s{z[0], z[1], z[2], z[3]};
        for (double h : {0.05, 0.2}) {
            auto got = hh_modified_rhs(s, h);
            auto at = [&](int j, double delta) {
                HamiltonianState t = s;
                if (j == 0) t.q1 += delta;
                if (j == 1) t.q2 += delta;
                if (j == 2) t.p1 += delta;
                if (j == 3) t.p2 += delta;
                return modified_hamiltonian(t, h, 4);
            };
            auto partial = [&](int j) { return (at(j, fd) - at(j, -fd)) / (2 * fd); };
            std::array<double, 4> want = {partial(2), partial(3), -partial(0), -partial(1)};
            const double tol = std::max(1e-7, 10.0 * std::pow(h, 6));
            for (int i = 0; i < 4; ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
        }
    }
}

TEST_CASE("correction energies at reference states") {
    HamiltonianState p10{0.0, 0.0, 1.0, 0.0};
    CHECK(hh_h2(p10) == doctest::Approx(-1.0 / 24.0).epsilon(1e-14));
    CHECK(hh_h4(p10) == doctest::Approx(-1.0 / 240.0).epsilon(1e-14));

    HamiltonianState s{0.12, 0.12, 0.12, 0.12};
    CHECK(hh_h2(s) == doctest::Approx(0.00155712).epsilon(1e-12));

    const double h = 0.3;
    CHECK(modified_hamiltonian(s, h, 0) == hh_hamiltonian(s));
    CHECK(modified_hamiltonian(s, h, 2) ==
          doctest::Approx(hh_hamiltonian(s) + h * h * hh_h2(s)).epsilon(1e-15));
    CHECK(modified_hamiltonian(s, h, 4) ==
          doctest::Approx(hh_hamiltonian(s) + h * h * hh_h2(s) + h * h * h * h * hh_h4(s))
              .epsilon(1e-15));
    CHECK_THROWS_AS((void)modified_hamiltonian(s, h, 3), std::invalid_argument);
}

TEST_CASE("energy drift vanishes on the fixed point and orders nest at moderate h") {
    auto quiet = leapfrog_dkd(HamiltonianState{}, 0.5, 200);
    auto rep0 = energy_drift(quiet);
    for (double d : rep0.drift) CHECK(d == 0.0);

    HamiltonianState s{0.12, 0.12, 0.12, 0.12};
    auto run = leapfrog_dkd(s, 0.5, 16000);
    REQUIRE(run.diverged_at < 0);
    auto rep = energy_drift(run);
    REQUIRE(rep.orders == std::vector<int>{0, 2, 4});
    CHECK(rep.drift[2] <= rep.drift[1]);
    CHECK(rep.drift[1] <= rep.drift[0]);

    // frozen regression values for this exact run
    CHECK(rep.drift[0] == doctest::Approx(0.0012345114757619374).epsilon(0.05));
    CHECK(rep.drift[1] == doctest::Approx(8.970457965821674e-05).epsilon(0.05));
    CHECK(rep.drift[2] == doctest::Approx(8.638863460239121e-06).epsilon(0.05));
}

TEST_CASE("drift shrinks at second and fourth order in the step size") {
    HamiltonianState s{0.12, 0.12, 0.12, 0.12};
    std::vector<double> hs = {0.05, 0.1, 0.2};
    std::vector<double> d0, d2;
    for (double h : hs) {
        auto run = leapfrog_dkd(s, h, std::lround(200.0 / h));
        REQUIRE(run.diverged_at < 0);
        auto rep = energy_drift(run, {0, 2});
        d0.push_back(rep.drift[0]);
        d2.push_back(rep.drift[1]);
    }
    const double s0 = loglog_fit(hs, d0).slope;
    const double s2 = loglog_fit(hs, d2).slope;
    CHECK(s0 > 1.6);
    CHECK(s0 < 2.4);
    CHECK(s2 > 3.4);
    CHECK(s2 < 4.6);
}

TEST_CASE("spurious-chaos flag fires only past the step-size cliff") {
    HamiltonianState s{0.12, 0.12, 0.12, 0.12};
    const double ref = hh_hamiltonian(s);
    auto drift_at = [&](double h) {
        auto run = leapfrog_dkd(s, h, 16000);
        return energy_drift(run);
    };
    CHECK(detect_spurious_chaos(drift_at(79.0 / 64.0), ref));
    CHECK(!detect_spurious_chaos(drift_at(81.0 / 64.0), ref));
    CHECK(!detect_spurious_chaos(drift_at(1.175), ref));
}

TEST_CASE("detector input validation") {
    HamiltonianState s{0.12, 0.12, 0.12, 0.12};
    auto run = leapfrog_dkd(s, 0.5, 100);
    auto rep = energy_drift(run);
    CHECK(!detect_spurious_chaos(rep, 1.0));  // tiny drift against an O(1) scale
    CHECK_THROWS_AS((void)detect_spurious_chaos(rep, 0.0), std::invalid_argument);
    auto no4 = energy_drift(run, {0, 2});
    CHECK_THROWS_AS((void)detect_spurious_chaos(no4, 1.0), std::invalid_argument);
    LeapfrogRun empty;
    CHECK_THROWS_AS((void)energy_drift(empty), std::invalid_argument);
}
