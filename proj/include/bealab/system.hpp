#pragma once

#include <functional>
#include <string>

#include "bealab/core.hpp"

namespace bealab {

// First-order ODE y' = f(t, y). Jacobian is optional and row-major when present.
class System {
  public:
    virtual ~System() = default;
    virtual int dimension() const = 0;
    virtual void rhs(double t, const double* y, double* dydt) const = 0;
    virtual bool has_jacobian() const { return false; }
    virtual void jacobian(double /*t*/, const double* /*y*/, double* /*J*/) const {
        throw std::logic_error("system has no Jacobian");
    }
    virtual std::string name() const { return "system"; }

    Vec rhs_vec(double t, const Vec& y) const {
        Vec out(dimension());
        rhs(t, y.data(), out.data());
        return out;
    }
};

class FnSystem : public System {
  public:
    using Fn = std::function<void(double, const double*, double*)>;
    FnSystem(int dim, Fn fn, std::string name = "fn") : dim_(dim), fn_(std::move(fn)), name_(std::move(name)) {}
    int dimension() const override { return dim_; }
    void rhs(double t, const double* y, double* dydt) const override { fn_(t, y, dydt); }
    std::string name() const override { return name_; }

  private:
    int dim_;
    Fn fn_;
    std::string name_;
};

}  // namespace bealab
