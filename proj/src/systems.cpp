#include "bealab/systems.hpp"

namespace bealab {

void Lorenz::rhs(double, const double* y, double* dydt) const {
    dydt[0] = sigma_ * (y[1] - y[0]);
    dydt[1] = y[0] * (rho_ - y[2]) - y[1];
    dydt[2] = y[0] * y[1] - beta_ * y[2];
}

void Lorenz::jacobian(double, const double* y, double* J) const {
    J[0] = -sigma_; J[1] = sigma_;    J[2] = 0.0;
    J[3] = rho_ - y[2]; J[4] = -1.0;  J[5] = -y[0];
    J[6] = y[1];    J[7] = y[0];      J[8] = -beta_;
}

void Decay::rhs(double, const double* y, double* dydt) const {
    for (int i = 0; i < dim_; ++i) dydt[i] = -y[i];
}

void Decay::jacobian(double, const double*, double* J) const {
    for (int i = 0; i < dim_ * dim_; ++i) J[i] = 0.0;
    for (int i = 0; i < dim_; ++i) J[i * dim_ + i] = -1.0;
}

void ForcedOscillator::rhs(double t, const double* y, double* dydt) const {
    dydt[0] = y[1];
    dydt[1] = -y[0] + eps_ * std::sin(omega_ * t);
}

void HenonHeilesOde::rhs(double, const double* y, double* dydt) const {
    const double q1 = y[0], q2 = y[1], p1 = y[2], p2 = y[3];
    dydt[0] = p1;
    dydt[1] = p2;
    dydt[2] = -q1 - 2.0 * q1 * q2;
    dydt[3] = -q2 - q1 * q1 + q2 * q2;
}

std::shared_ptr<System> make_system(const std::string& name) {
    if (name == "lorenz") return std::make_shared<Lorenz>();
    if (name == "decay") return std::make_shared<Decay>();
    if (name == "henon-heiles") return std::make_shared<HenonHeilesOde>();
    if (name == "oscillator") return std::make_shared<ForcedOscillator>();
    throw std::invalid_argument("unknown system: " + name);
}

}  // namespace bealab
