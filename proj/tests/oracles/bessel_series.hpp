#pragma once

// Test-only oracle: first zero of J_nu from its power series, bracketed on a
// coarse grid and bisected. Independent of the ODE route in the library.

#include <cmath>
#include <stdexcept>

namespace kpp_lab::oracle {

/// x^{-nu} J_nu(x) * 2^nu Gamma(nu+1), which has the same positive zeros as J_nu.
inline double reduced_bessel_series(double nu, double x) {
    const double q = -0.25 * x * x;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * (nu + k));
        sum += term;
        if (std::fabs(static_cast<double>(term)) < 1e-30) break;
    }
    return static_cast<double>(sum);
}

inline double bessel_first_zero_series(double nu) {
    double lo = 0.5;
    const double dx = 0.01;
    while (reduced_bessel_series(nu, lo + dx) > 0.0) {
        lo += dx;
        if (lo > 50.0) throw std::runtime_error("bessel_first_zero_series: no sign change");
    }
    double hi = lo + dx;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (reduced_bessel_series(nu, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Standard table values of j_{nu,1}.
inline constexpr double kJ0First = 2.404825557695773;
inline constexpr double kJ1First = 3.8317059702075123;
inline constexpr double kJ2First = 5.135622301840683;

}  // namespace kpp_lab::oracle
