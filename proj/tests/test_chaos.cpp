#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "bealab/chaos.hpp"
#include "bealab/core.hpp"
#include "bealab/systems.hpp"

using namespace bealab;

TEST_CASE("disturbance signals are bounded, reproducible, and nearly centered") {
    DisturbanceSpec spec;
    spec.epsilon = 1e-6;
    spec.seed = 17;
    spec.dimension = 3;
    Disturbance a(spec), b(spec);
    double mean = 0.0;
    long n = 0;
    for (double t = 0.0; t <= 1000.0; t += 0.37) {
        Vec va = a.value(t), vb = b.value(t);
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(va[i]) <= 1.0);
            CHECK(va[i] == vb[i]);
            mean += va[i];
            ++n;
        }
    }
    CHECK(std::abs(mean / (double)n) < 0.05);
}

TEST_CASE("different seeds give different signals") {
    DisturbanceSpec s1;
    s1.seed = 1;
    DisturbanceSpec s2;
    s2.seed = 2;
    Disturbance a(s1), b(s2);
    bool differ = false;
    for (double t = 0.1; t < 10.0; t += 0.1)
        if (a.value(t)[0] != b.value(t)[0]) differ = true;
    CHECK(differ);
}

TEST_CASE("exponent estimate recovers the contraction rate of pure decay") {
    Decay sys(1);
    const double lam = lyapunov_estimate(sys, {1.0}, 200.0);
    CHECK(lam == doctest::Approx(-1.0).epsilon(0.05));
}

TEST_CASE("exponent estimate is near zero for the harmonic oscillator") {
    ForcedOscillator sys(0.0, 1.0);
    const double lam = lyapunov_estimate(sys, {1.0, 0.0}, 200.0);
    CHECK(std::abs(lam) < 0.05);
}

TEST_CASE("exponent estimate is insensitive to the probe offset") {
    Lorenz sys;
    std::vector<double> lams;
    for (double d0 : {1e-6, 1e-8, 1e-10})
        lams.push_back(lyapunov_estimate(sys, {1.0, 0.0, 0.0}, 200.0, 0.5, d0));
    for (size_t i = 0; i < lams.size(); ++i)
        for (size_t j = i + 1; j < lams.size(); ++j)
            CHECK(std::abs(lams[i] - lams[j]) < 0.05);
}

TEST_CASE("identical disturbances never separate") {
    auto sys = std::make_shared<Lorenz>();
    DisturbanceSpec spec;
    spec.epsilon = 1e-8;
    spec.seed = 7;
    auto r = separation_time(sys, {1.0, 0.0, 0.0}, spec, spec, 1.0, 30.0);
    CHECK(!r.reached);
}

TEST_CASE("small disturbances on a chaotic run separate on the expected horizon") {
    auto sys = std::make_shared<Lorenz>();
    DisturbanceSpec a;
    a.epsilon = 1e-9;
    a.seed = 101;
    DisturbanceSpec b;
    b.epsilon = 1e-9;
    b.seed = 202;
    auto r = separation_time(sys, {1.0, 0.0, 0.0}, a, b, 1.0, 100.0);
    REQUIRE(r.reached);
    // about ln(threshold/eps)/lambda with lambda near 0.9; generous pad both ways
    CHECK(r.T > 11.45);
    CHECK(r.T < 45.8);
}

TEST_CASE("a non-chaotic base flow stays together over a long horizon") {
    auto sys = std::make_shared<ForcedOscillator>(0.0, 1.0);
    DisturbanceSpec a;
    a.epsilon = 1e-6;
    a.seed = 101;
    DisturbanceSpec b;
    b.epsilon = 1e-6;
    b.seed = 202;
    auto r = separation_time(sys, {1.0, 0.0}, a, b, 1.0, 1e4);
    CHECK(!r.reached);
}

TEST_CASE("separation time grows with the threshold") {
    auto sys = std::make_shared<Lorenz>();
    DisturbanceSpec a;
    a.epsilon = 1e-8;
    a.seed = 101;
    DisturbanceSpec b;
    b.epsilon = 1e-8;
    b.seed = 202;
    auto r_half = separation_time(sys, {1.0, 0.0, 0.0}, a, b, 0.5, 100.0);
    auto r_one = separation_time(sys, {1.0, 0.0, 0.0}, a, b, 1.0, 100.0);
    auto r_two = separation_time(sys, {1.0, 0.0, 0.0}, a, b, 2.0, 100.0);
    REQUIRE(r_half.reached);
    REQUIRE(r_one.reached);
    REQUIRE(r_two.reached);
    CHECK(r_half.T <= r_one.T);
    CHECK(r_one.T <= r_two.T);
}

TEST_CASE("line fitting recovers exact affine data") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> y;
    for (double xi : x) y.push_back(1.105 * xi - 0.25);
    auto f = linear_fit(x, y);
    CHECK(f.slope == doctest::Approx(1.105).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(-0.25).epsilon(1e-10));
    CHECK_THROWS_AS((void)linear_fit({1.0}, {2.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)linear_fit({1.0, 1.0}, {2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("window statistics of a constant trajectory are degenerate but sane") {
    ConstantRhs sys(1);
    auto res = integrate_adaptive(sys, {3.0}, 0.0, 10.0);
    REQUIRE(res.ok());
    auto rep = trajectory_statistics(res.solution, 2.0, 8.0, 10, 1000);
    CHECK(rep.mean[0] == 3.0);
    CHECK(rep.stddev[0] == 0.0);
    REQUIRE(rep.bin_edges.size() == 11);
    CHECK(rep.bin_edges.front() < 3.0);
    CHECK(rep.bin_edges.back() > 3.0);
    double total = 0.0;
    for (double f : rep.frequencies) total += f;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("window statistics on a chaotic run are well formed") {
    Lorenz sys;
    SolverConfig cfg;
    cfg.rtol = cfg.atol = 1e-8;
    auto res = integrate_adaptive(sys, {1.0, 0.0, 0.0}, 0.0, 50.0, cfg);
    REQUIRE(res.ok());
    auto rep = trajectory_statistics(res.solution, 10.0, 50.0, 50, 4000, 2);
    CHECK(rep.mean.size() == 3);
    CHECK(rep.component == 2);
    CHECK(rep.n_samples == 4000);
    long total_counts = 0;
    for (long c : rep.counts) total_counts += c;
    CHECK(total_counts == 4000);
    double total = 0.0;
    for (double f : rep.frequencies) total += f;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // the third component of this flow wanders around the low twenties
    CHECK(rep.mean[2] > 15.0);
    CHECK(rep.mean[2] < 30.0);
}

TEST_CASE("resonant forcing grows linearly, detuned forcing stays bounded") {
    auto on = secular_envelope(0.01, 1.0, 200.0);
    CHECK(on.n_maxima > 10);
    CHECK(on.slope == doctest::Approx(0.005).epsilon(0.1));

    auto off = secular_envelope(0.01, 2.0, 200.0);
    CHECK(std::abs(off.slope) < 1e-3);
}
