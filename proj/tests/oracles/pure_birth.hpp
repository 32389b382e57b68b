#pragma once

// Test-only oracle: the binary pure-birth count N_t is Geometric(e^{-beta t})
// on {1, 2, ...}; E s^{N_t} is summed directly from the mass function.

#include <cmath>

namespace kpp_lab::oracle {

inline double geometric_pmf(double beta, double t, long k) {
    const double q = std::exp(-beta * t);
    return q * std::pow(1.0 - q, static_cast<double>(k - 1));
}

inline double pure_birth_pgf_series(double beta, double t, double s) {
    double sum = 0.0;
    for (long k = 1; k < 100000; ++k) {
        const double term = geometric_pmf(beta, t, k) * std::pow(s, static_cast<double>(k));
        sum += term;
        if (term < 1e-18) break;
    }
    return sum;
}

}  // namespace kpp_lab::oracle
