#pragma once

#include <array>
#include <cmath>

#include "kpp_lab/errors.hpp"

namespace kpp_lab {

namespace detail {

// Regular solution y = Gamma(nu+1) (2/x)^nu J_nu(x), normalised to y(0) = 1.
// It satisfies y'' + (2nu+1)/x y' + y = 0.
struct CylinderState {
    double y;
    double dy;
};

inline CylinderState cylinder_series(double nu, double x) {
    double term = 1.0;
    double y = 1.0;
    double dy = 0.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 12; ++k) {
        term *= -q / (static_cast<double>(k) * (nu + static_cast<double>(k)));
        y += term;
        dy += term * 2.0 * static_cast<double>(k) / x;
    }
    return {y, dy};
}

inline CylinderState cylinder_rhs(double nu, double x, CylinderState s) {
    return {s.dy, -(2.0 * nu + 1.0) / x * s.dy - s.y};
}

inline CylinderState cylinder_rk4(double nu, double x, CylinderState s, double h) {
    auto axpy = [](CylinderState a, double c, CylinderState b) {
        return CylinderState{a.y + c * b.y, a.dy + c * b.dy};
    };
    const auto k1 = cylinder_rhs(nu, x, s);
    const auto k2 = cylinder_rhs(nu, x + 0.5 * h, axpy(s, 0.5 * h, k1));
    const auto k3 = cylinder_rhs(nu, x + 0.5 * h, axpy(s, 0.5 * h, k2));
    const auto k4 = cylinder_rhs(nu, x + h, axpy(s, h, k3));
    return {s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            s.dy + h / 6.0 * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy)};
}

}  // namespace detail

/// First positive zero j_{nu,1} of the order-nu cylinder function.
///
/// Starts from the power series at a small argument, marches the reduced
/// ODE with fixed-step RK4 until the first sign change, then bisects the
/// length of the final partial step to 1e-12.
inline double cylinder_first_zero(double nu) {
    if (!(nu >= -0.5)) throw InputError("cylinder_first_zero: order must be >= -1/2");
    constexpr double kStart = 1e-2;
    constexpr double kStep = 5e-4;
    constexpr double kTol = 1e-12;
    constexpr double kLimit = 1e4;

    auto s = detail::cylinder_series(nu, kStart);
    for (long i = 0;; ++i) {
        const double x = kStart + static_cast<double>(i) * kStep;
        if (x > kLimit) break;
        const auto next = detail::cylinder_rk4(nu, x, s, kStep);
        if (next.y <= 0.0) {
            double lo = 0.0, hi = kStep;
            while (hi - lo > kTol) {
                const double mid = 0.5 * (lo + hi);
                if (detail::cylinder_rk4(nu, x, s, mid).y > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            return x + 0.5 * (lo + hi);
        }
        s = next;
    }
    throw NoRootError("cylinder_first_zero: no sign change found");
}

/// rho = j_{(d-2)/2,1} / sqrt(m): first root of the linear radial problem with slope m.
inline double linear_first_root(double m, int d) {
    if (!(m > 0.0)) throw InputError("slope m must be positive");
    if (d < 1) throw InputError("dimension must be >= 1");
    return cylinder_first_zero(0.5 * (d - 2)) / std::sqrt(m);
}

}  // namespace kpp_lab
