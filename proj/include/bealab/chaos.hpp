#pragma once

#include <memory>

#include "bealab/integrate.hpp"
#include "bealab/systems.hpp"

namespace bealab {

enum class DisturbanceKind { multi_sine, seeded_piecewise };

struct DisturbanceSpec {
    double epsilon = 0.0;
    DisturbanceKind kind = DisturbanceKind::multi_sine;
    uint32_t seed = 0;
    int dimension = 1;
    int n_modes = 3;
    double omega_min = 0.5;
    double omega_max = 3.0;
};

// bounded forcing signal v(t), componentwise |v_i(t)| <= 1, reproducible from
// the seed
class Disturbance {
  public:
    explicit Disturbance(const DisturbanceSpec& spec);
    void value(double t, double* out) const;
    Vec value(double t) const {
        Vec v(spec_.dimension);
        value(t, v.data());
        return v;
    }
    const DisturbanceSpec& spec() const { return spec_; }

  private:
    DisturbanceSpec spec_;
    std::vector<double> omega_, phase_;  // n_modes entries per component
};

// f(t, y) + epsilon * v(t)
class DisturbedSystem : public System {
  public:
    DisturbedSystem(std::shared_ptr<const System> base, const DisturbanceSpec& spec);
    int dimension() const override { return base_->dimension(); }
    void rhs(double t, const double* y, double* dydt) const override;
    std::string name() const override { return base_->name() + "+disturbance"; }

  private:
    std::shared_ptr<const System> base_;
    Disturbance dist_;
};

// two disturbed copies side by side, for separation experiments
class StackedDisturbedPair : public System {
  public:
    StackedDisturbedPair(std::shared_ptr<const System> base, const DisturbanceSpec& spec1,
                         const DisturbanceSpec& spec2);
    int dimension() const override { return 2 * base_->dimension(); }
    void rhs(double t, const double* y, double* dydt) const override;

  private:
    std::shared_ptr<const System> base_;
    Disturbance d1_, d2_;
};

// classical two-trajectory renormalization estimate of the largest Lyapunov
// exponent
double lyapunov_estimate(const System& system, const Vec& y0, double T_total,
                         double renorm_interval = 0.5, double delta0 = 1e-8,
                         double discard = 5.0, double rtol = 1e-9, double atol = 1e-9);

struct SeparationResult {
    double eps1 = 0, eps2 = 0;
    uint32_t seed1 = 0, seed2 = 0;
    double threshold = 1.0;
    double horizon = 0.0;
    bool reached = false;
    double T = 0.0;                  // first time the max-norm gap meets the threshold
    std::vector<double> times;       // accepted node times of the co-integration
    SolveStatus status = SolveStatus::ok;
};

SeparationResult separation_time(std::shared_ptr<const System> system, const Vec& y0,
                                 const DisturbanceSpec& spec1, const DisturbanceSpec& spec2,
                                 double threshold = 1.0, double horizon = 100.0,
                                 double rtol = 1e-10, double atol = 1e-10);

struct SeparationScaling {
    std::vector<double> epsilons;          // reached runs only
    std::vector<double> T;                 // matching separation times
    std::vector<double> excluded_epsilons; // not reached within horizon
    double slope = 0.0;                    // T against ln(1/eps)
    double intercept = 0.0;
};

SeparationScaling separation_scaling(std::shared_ptr<const System> system, const Vec& y0,
                                     const std::vector<double>& epsilons, uint32_t seed1 = 101,
                                     uint32_t seed2 = 202, double threshold = 1.0,
                                     double horizon = 100.0);

struct StatisticsReport {
    double t_a = 0, t_b = 0;
    std::vector<double> mean;
    std::vector<double> stddev;
    int component = 0;               // histogram component
    std::vector<double> bin_edges;   // n_bins + 1
    std::vector<long> counts;
    std::vector<double> frequencies; // sums to 1
    long n_samples = 0;
};

StatisticsReport trajectory_statistics(const DenseSolution& sol, double t_a, double t_b,
                                       int n_bins, long n_samples, int component = -1);

struct EnvelopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    long n_maxima = 0;
};

// forced oscillator from rest; fits a line to the successive local maxima of
// |y| against time
EnvelopeFit secular_envelope(double epsilon, double omega, double t_end,
                             double sample_dt = 0.01);

}  // namespace bealab
