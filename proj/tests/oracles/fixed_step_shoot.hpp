#pragma once

// Test-only oracle: first root of the radial IVP by classical RK4 at a fixed
// step, with linear interpolation of the final sign change.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace kpp_lab::oracle {

inline double fixed_step_first_root(const std::function<double(double)>& f, int d, double p,
                                    double step, double limit = 1e3) {
    auto acc = [&](double r, double v, double w) {
        return -f(std::max(v, 0.0)) - (d > 1 ? (d - 1) * w / r : 0.0);
    };
    // Taylor seed at r = step for d > 1; exact start at r = 0 otherwise.
    const double r_start = d > 1 ? step : 0.0;
    double r = r_start;
    long k = 0;
    double v = d > 1 ? p - f(p) * step * step / (2.0 * d) : p;
    double w = d > 1 ? -f(p) * step / d : 0.0;
    while (r < limit) {
        const double k1v = w, k1w = acc(r, v, w);
        const double k2v = w + 0.5 * step * k1w, k2w = acc(r + 0.5 * step, v + 0.5 * step * k1v, k2v);
        const double k3v = w + 0.5 * step * k2w, k3w = acc(r + 0.5 * step, v + 0.5 * step * k2v, k3v);
        const double k4v = w + step * k3w, k4w = acc(r + step, v + step * k3v, k4v);
        const double v_next = v + step / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        const double w_next = w + step / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        if (v_next <= 0.0) {
            // Cubic Hermite on [r, r+step] solved by bisection.
            double lo = 0.0, hi = 1.0;
            auto herm = [&](double t) {
                const double t2 = t * t, t3 = t2 * t;
                return (2 * t3 - 3 * t2 + 1) * v + (t3 - 2 * t2 + t) * step * w +
                       (-2 * t3 + 3 * t2) * v_next + (t3 - t2) * step * w_next;
            };
            for (int i = 0; i < 200; ++i) {
                const double mid = 0.5 * (lo + hi);
                (herm(mid) > 0.0 ? lo : hi) = mid;
            }
            return r + 0.5 * (lo + hi) * step;
        }
        r = r_start + static_cast<double>(++k) * step;
        v = v_next;
        w = w_next;
    }
    throw std::runtime_error("fixed_step_first_root: no root before the limit");
}

}  // namespace kpp_lab::oracle
