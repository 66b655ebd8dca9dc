#include "bealab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bealab {

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

double wrms_error(const Vec& e, const Vec& y0, const Vec& y1, double rtol, double atol) {
    double s = 0.0;
    const size_t n = e.size();
    for (size_t i = 0; i < n; ++i) {
        const double w = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double q = e[i] / w;
        s += q * q;
    }
    return std::sqrt(s / (double)n);
}

double rms_scaled(const Vec& v, const Vec& sc) {
    double s = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const double q = v[i] / sc[i];
        s += q * q;
    }
    return std::sqrt(s / (double)v.size());
}

// standard curvature-based initial step guess
double initial_step(const System& sys, double t0, const Vec& y0, const Vec& f0,
                    double t_end, double rtol, double atol) {
    const int n = sys.dimension();
    Vec sc(n);
    for (int i = 0; i < n; ++i) sc[i] = atol + rtol * std::abs(y0[i]);
    const double d0 = rms_scaled(y0, sc);
    const double d1 = rms_scaled(f0, sc);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_end - t0);

    Vec y1(n), f1(n), df(n);
    for (int i = 0; i < n; ++i) y1[i] = y0[i] + h0 * f0[i];
    sys.rhs(t0 + h0, y1.data(), f1.data());
    for (int i = 0; i < n; ++i) df[i] = f1[i] - f0[i];
    const double d2 = rms_scaled(df, sc) / h0;

    double h1;
    const double dm = std::max(d1, d2);
    if (dm <= 1e-15)
        h1 = std::max(1e-6, h0 * 1e-3);
    else
        h1 = std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, t_end - t0});
}

struct HermiteBasis {
    double h00, h10, h01, h11;
};

HermiteBasis hermite_value(double th) {
    const double th2 = th * th, th3 = th2 * th;
    return {2 * th3 - 3 * th2 + 1, th3 - 2 * th2 + th, -2 * th3 + 3 * th2, th3 - th2};
}

HermiteBasis hermite_slope(double th) {
    const double th2 = th * th;
    return {6 * th2 - 6 * th, 3 * th2 - 4 * th + 1, -6 * th2 + 6 * th, 3 * th2 - 2 * th};
}

// slope sample at theta = 1/4 pins the quartic bump; w'(1/4) = 3/16
Vec method_order_bump(const Vec& y0, const Vec& f0, const Vec& y1, const Vec& f1,
                      double t, double h, const System& sys) {
    const int n = (int)y0.size();
    const double tau = 0.25;
    const HermiteBasis v = hermite_value(tau);
    const HermiteBasis s = hermite_slope(tau);
    Vec ytau(n), ftau(n), d(n);
    for (int i = 0; i < n; ++i)
        ytau[i] = v.h00 * y0[i] + v.h10 * h * f0[i] + v.h01 * y1[i] + v.h11 * h * f1[i];
    sys.rhs(t + tau * h, ytau.data(), ftau.data());
    for (int i = 0; i < n; ++i) {
        const double hp = s.h00 * y0[i] + s.h10 * h * f0[i] + s.h01 * y1[i] + s.h11 * h * f1[i];
        d[i] = (h * ftau[i] - hp) * (16.0 / 3.0);
    }
    return d;
}

}  // namespace

size_t DenseSolution::locate(double& t) const {
    const auto& ts = skeleton.times;
    if (ts.size() < 2) throw std::out_of_range("dense solution has no span");
    const double a = ts.front(), b = ts.back();
    const double slack = 1e-12 * (b - a);
    if (t < a - slack || t > b + slack) throw std::out_of_range("time outside solution span");
    t = std::clamp(t, a, b);
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    size_t k = (size_t)std::distance(ts.begin(), it);
    if (k == 0) k = 1;
    if (k >= ts.size()) k = ts.size() - 1;
    return k - 1;  // interval [k-1, k]
}

void DenseSolution::eval_impl(double t, int order, double* out) const {
    const size_t k = locate(t);
    const auto& sk = skeleton;
    const double tk = sk.times[k];
    const double h = sk.times[k + 1] - tk;
    const double th = (t - tk) / h;
    const Vec& y0 = sk.states[k];
    const Vec& y1 = sk.states[k + 1];
    const Vec& f0 = sk.derivatives[k];
    const Vec& f1 = sk.derivatives[k + 1];
    const int n = (int)y0.size();

    if (order == 0) {
        if (th == 0.0) {
            for (int i = 0; i < n; ++i) out[i] = y0[i];
            return;
        }
        if (th == 1.0) {
            for (int i = 0; i < n; ++i) out[i] = y1[i];
            return;
        }
        // shifted form: with h00 + h01 = 1 this reproduces constant data exactly
        const HermiteBasis b = hermite_value(th);
        for (int i = 0; i < n; ++i)
            out[i] = y0[i] + b.h01 * (y1[i] - y0[i]) + h * (b.h10 * f0[i] + b.h11 * f1[i]);
        if (kind == Interpolant::method_order) {
            const double w = th * th * (1 - th) * (1 - th);
            if (w != 0.0)
                for (int i = 0; i < n; ++i) out[i] += w * bump[k][i];
        }
    } else {
        // the stored slopes are the node conditions; return them untouched at the
        // ends so (h * f) / h cannot re-round them
        if (th == 0.0) {
            for (int i = 0; i < n; ++i) out[i] = f0[i];
            return;
        }
        if (th == 1.0) {
            for (int i = 0; i < n; ++i) out[i] = f1[i];
            return;
        }
        const HermiteBasis b = hermite_slope(th);
        for (int i = 0; i < n; ++i)
            out[i] = (b.h00 * y0[i] + b.h10 * h * f0[i] + b.h01 * y1[i] + b.h11 * h * f1[i]) / h;
        if (kind == Interpolant::method_order) {
            const double wp = 2 * th * (1 - th) * (1 - 2 * th);
            if (wp != 0.0)
                for (int i = 0; i < n; ++i) out[i] += wp / h * bump[k][i];
        }
    }
}

IntegrationResult integrate_adaptive(const System& sys, const Vec& y0, double t0,
                                     double t_end, const SolverConfig& cfg) {
    if (!(t_end > t0)) throw std::invalid_argument("integrate_adaptive: t_end must exceed t0");
    if (!(cfg.rtol > 0) || !(cfg.atol > 0)) throw std::invalid_argument("tolerances must be positive");
    if (!(cfg.safety > 0) || !(cfg.safety < 1)) throw std::invalid_argument("safety must lie in (0,1)");
    const int n = sys.dimension();
    if ((int)y0.size() != n) throw std::invalid_argument("state size mismatch");

    IntegrationResult res;
    res.solution.kind = cfg.interpolant;
    SolutionSkeleton& sk = res.solution.skeleton;

    Vec y = y0, f0(n);
    if (!all_finite(y)) {
        res.status = SolveStatus::diverged;
        res.message = "initial state not finite";
        res.t_reached = t0;
        return res;
    }
    sys.rhs(t0, y.data(), f0.data());
    if (!all_finite(f0)) {
        res.status = SolveStatus::diverged;
        res.message = "right-hand side not finite at initial state";
        res.t_reached = t0;
        return res;
    }

    double t = t0;
    double h = cfg.h_init > 0 ? cfg.h_init : initial_step(sys, t0, y, f0, t_end, cfg.rtol, cfg.atol);
    if (cfg.h_max > 0) h = std::min(h, cfg.h_max);
    const double h_min = 1e-14 * (t_end - t0);

    sk.times.push_back(t);
    sk.states.push_back(y);
    sk.derivatives.push_back(f0);

    Vec k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ys(n), y1(n), e(n);

    while (t < t_end) {
        bool clipped = false;
        if (h >= t_end - t) {
            h = t_end - t;
            clipped = true;
        }
        if (h < h_min) {
            res.status = SolveStatus::step_underflow;
            res.message = "step size underflow (stiffness or blow-up)";
            break;
        }

        const Vec& k1 = f0;
        for (int i = 0; i < n; ++i) ys[i] = y[i] + h * A21 * k1[i];
        sys.rhs(t + C2 * h, ys.data(), k2.data());
        for (int i = 0; i < n; ++i) ys[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        sys.rhs(t + C3 * h, ys.data(), k3.data());
        for (int i = 0; i < n; ++i) ys[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        sys.rhs(t + C4 * h, ys.data(), k4.data());
        for (int i = 0; i < n; ++i)
            ys[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        sys.rhs(t + C5 * h, ys.data(), k5.data());
        for (int i = 0; i < n; ++i)
            ys[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        sys.rhs(t + h, ys.data(), k6.data());
        for (int i = 0; i < n; ++i)
            y1[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        sys.rhs(t + h, y1.data(), k7.data());
        for (int i = 0; i < n; ++i)
            e[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);

        double err = std::numeric_limits<double>::infinity();
        if (all_finite(y1) && all_finite(e)) err = wrms_error(e, y, y1, cfg.rtol, cfg.atol);

        if (err <= 1.0) {
            const double t_new = clipped ? t_end : t + h;
            if (cfg.interpolant == Interpolant::method_order)
                res.solution.bump.push_back(method_order_bump(y, f0, y1, k7, t, h, sys));
            sk.times.push_back(t_new);
            sk.states.push_back(y1);
            sk.derivatives.push_back(k7);
            res.accepted_errors.push_back(err);
            ++sk.steps;
            y = y1;
            f0 = k7;
            t = t_new;
            double fac = cfg.step_grow_cap;
            if (err > 0)
                fac = std::min(cfg.step_grow_cap,
                               std::max(cfg.step_shrink_floor, cfg.safety * std::pow(err, -0.2)));
            h *= fac;
        } else {
            ++sk.rejected;
            double fac = cfg.step_shrink_floor;
            if (std::isfinite(err))
                fac = std::min(1.0, std::max(cfg.step_shrink_floor, cfg.safety * std::pow(err, -0.2)));
            h *= fac;
        }
        if (cfg.h_max > 0) h = std::min(h, cfg.h_max);
    }

    res.t_reached = t;
    return res;
}

IntegrationResult integrate_euler_fixed(const System& sys, const Vec& y0, double t0,
                                        double t_end, double h) {
    if (!(h > 0)) throw std::invalid_argument("integrate_euler_fixed: h must be positive");
    if (!(t_end > t0)) throw std::invalid_argument("integrate_euler_fixed: t_end must exceed t0");
    const int n = sys.dimension();

    IntegrationResult res;
    SolutionSkeleton& sk = res.solution.skeleton;
    long nsteps = (long)std::llround((t_end - t0) / h);
    if (nsteps < 1) nsteps = 1;

    Vec y = y0, f(n);
    double t = t0;
    sys.rhs(t, y.data(), f.data());
    sk.times.push_back(t);
    sk.states.push_back(y);
    sk.derivatives.push_back(f);

    for (long k = 0; k < nsteps; ++k) {
        const bool last = (k == nsteps - 1);
        const double hk = last ? t_end - t : h;
        for (int i = 0; i < n; ++i) y[i] += hk * f[i];
        t = last ? t_end : t0 + (double)(k + 1) * h;
        if (!all_finite(y)) {
            res.status = SolveStatus::diverged;
            res.message = "state not finite at step " + std::to_string(k + 1);
            break;
        }
        sys.rhs(t, y.data(), f.data());
        sk.times.push_back(t);
        sk.states.push_back(y);
        sk.derivatives.push_back(f);
        ++sk.steps;
    }
    res.t_reached = sk.times.back();
    return res;
}

DenseSolution dense_with_field(const SolutionSkeleton& skeleton, const System& field,
                               Interpolant kind) {
    DenseSolution sol;
    sol.kind = kind;
    sol.skeleton = skeleton;
    const int n = field.dimension();
    const size_t m = skeleton.times.size();
    sol.skeleton.derivatives.assign(m, Vec(n));
    for (size_t k = 0; k < m; ++k)
        field.rhs(skeleton.times[k], skeleton.states[k].data(), sol.skeleton.derivatives[k].data());
    if (kind == Interpolant::method_order) {
        sol.bump.resize(m - 1);
        for (size_t k = 0; k + 1 < m; ++k) {
            const double h = skeleton.times[k + 1] - skeleton.times[k];
            sol.bump[k] = method_order_bump(sol.skeleton.states[k], sol.skeleton.derivatives[k],
                                            sol.skeleton.states[k + 1], sol.skeleton.derivatives[k + 1],
                                            skeleton.times[k], h, field);
        }
    }
    return sol;
}

}  // namespace bealab
