#pragma once

#include <memory>

#include "bealab/system.hpp"

namespace bealab {

class Lorenz : public System {
  public:
    Lorenz(double sigma = 10.0, double rho = 28.0, double beta = 8.0 / 3.0)
        : sigma_(sigma), rho_(rho), beta_(beta) {}
    int dimension() const override { return 3; }
    void rhs(double t, const double* y, double* dydt) const override;
    bool has_jacobian() const override { return true; }
    void jacobian(double t, const double* y, double* J) const override;
    std::string name() const override { return "lorenz"; }
    double sigma() const { return sigma_; }
    double rho() const { return rho_; }
    double beta() const { return beta_; }

  private:
    double sigma_, rho_, beta_;
};

// y' = -y, componentwise; exact solution y0 * exp(-t)
class Decay : public System {
  public:
    explicit Decay(int dim = 1) : dim_(dim) {}
    int dimension() const override { return dim_; }
    void rhs(double t, const double* y, double* dydt) const override;
    bool has_jacobian() const override { return true; }
    void jacobian(double t, const double* y, double* J) const override;
    std::string name() const override { return "decay"; }

  private:
    int dim_;
};

class ConstantRhs : public System {
  public:
    explicit ConstantRhs(int dim = 1) : dim_(dim) {}
    int dimension() const override { return dim_; }
    void rhs(double, const double*, double* dydt) const override {
        for (int i = 0; i < dim_; ++i) dydt[i] = 0.0;
    }
    std::string name() const override { return "constant"; }

  private:
    int dim_;
};

// y1'' + y1 = eps*sin(omega*t), written as a first-order pair; eps = 0 gives
// the plain harmonic oscillator
class ForcedOscillator : public System {
  public:
    ForcedOscillator(double eps = 0.0, double omega = 1.0) : eps_(eps), omega_(omega) {}
    int dimension() const override { return 2; }
    void rhs(double t, const double* y, double* dydt) const override;
    std::string name() const override { return "oscillator"; }

  private:
    double eps_, omega_;
};

// four-dimensional first-order form of the cubic two-well Hamiltonian flow,
// state ordered (q1, q2, p1, p2)
class HenonHeilesOde : public System {
  public:
    int dimension() const override { return 4; }
    void rhs(double t, const double* y, double* dydt) const override;
    std::string name() const override { return "henon-heiles"; }
};

std::shared_ptr<System> make_system(const std::string& name);

}  // namespace bealab
