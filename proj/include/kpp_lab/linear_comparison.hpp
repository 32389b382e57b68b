#pragma once

#include <cmath>
#include <string_view>

#include "kpp_lab/cylinder_zero.hpp"
#include "kpp_lab/errors.hpp"
#include "kpp_lab/nonlinearity.hpp"
#include "kpp_lab/radial_shooting.hpp"

namespace kpp_lab {

enum class RhoMethod { ClosedForm, Numeric };

inline std::string_view to_string(RhoMethod m) noexcept {
    return m == RhoMethod::ClosedForm ? "ClosedForm" : "Numeric";
}

/// First root of the linear radial problem with slope m in dimension d.
struct ComparisonRecord {
    double slope;
    int dimension;
    double rho;
    RhoMethod method;
    double bessel_order;  // (d-2)/2
};

inline ComparisonRecord rho(double m, int d, RhoMethod method = RhoMethod::ClosedForm) {
    if (!(m > 0.0)) throw InputError("rho: slope must be positive");
    if (d < 1) throw InputError("rho: dimension must be >= 1");
    const double nu = 0.5 * (d - 2);
    if (method == RhoMethod::ClosedForm) return {m, d, linear_first_root(m, d), method, nu};
    // The root of the linear problem does not depend on the center value.
    const auto profile = shoot(Nonlinearity::linear(m), d, 0.5);
    return {m, d, first_root(profile), method, nu};
}

/// Principal Dirichlet eigenvalue of -Laplacian on the ball of radius R in R^d.
inline double eigenvalue_of_ball(double radius, int d) {
    if (!(radius > 0.0)) throw InputError("eigenvalue_of_ball: radius must be positive");
    if (d < 1) throw InputError("eigenvalue_of_ball: dimension must be >= 1");
    const double j = cylinder_first_zero(0.5 * (d - 2));
    return (j / radius) * (j / radius);
}

}  // namespace kpp_lab
