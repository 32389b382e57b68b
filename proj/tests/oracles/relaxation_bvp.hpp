#pragma once

// Test-only oracle: positive radial Dirichlet solution on B_R by finite
// differences + damped Newton, independent of the shooting code.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace kpp_lab::oracle {

struct RelaxationResult {
    double center_value;
    std::vector<double> values;  // V at r_i = i * R / n, i = 0..n
    int newton_iterations;
};

/// Conservative second-order discretisation of (r^{d-1} V')' + r^{d-1} f(V) = 0,
/// V'(0) = 0, V(R) = 0 on n uniform cells.
inline RelaxationResult relaxation_bvp(const std::function<double(double)>& f,
                                       const std::function<double(double)>& df, int d,
                                       double radius, std::size_t n) {
    const double h = radius / static_cast<double>(n);
    std::vector<double> v(n + 1), r(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        r[i] = static_cast<double>(i) * h;
        v[i] = 1.0 - std::exp(-(radius - r[i]));
    }
    v[n] = 0.0;

    auto weight = [d](double x) { return std::pow(x, d - 1); };
    // Residual rows i = 0..n-1 (V_n = 0 is fixed).
    std::vector<double> lower(n), diag(n), upper(n), res(n);
    int it = 0;
    for (; it < 100; ++it) {
        // Row 0: cell [0, h/2].
        diag[0] = -1.0 + df(v[0]) * h * h / (2.0 * d);
        upper[0] = 1.0;
        res[0] = v[1] - v[0] + f(v[0]) * h * h / (2.0 * d);
        for (std::size_t i = 1; i < n; ++i) {
            const double wl = weight(r[i] - 0.5 * h);
            const double wr = weight(r[i] + 0.5 * h);
            const double wc = weight(r[i]);
            res[i] = (wr * (v[i + 1] - v[i]) - wl * (v[i] - v[i - 1])) / (h * h * wc) + f(v[i]);
            lower[i] = wl / (h * h * wc);
            upper[i] = (i + 1 < n) ? wr / (h * h * wc) : 0.0;
            diag[i] = -(wl + wr) / (h * h * wc) + df(v[i]);
        }
        // Thomas algorithm on J delta = -res.
        std::vector<double> c(n), g(n), delta(n);
        c[0] = upper[0] / diag[0];
        g[0] = -res[0] / diag[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = diag[i] - lower[i] * c[i - 1];
            c[i] = upper[i] / m;
            g[i] = (-res[i] - lower[i] * g[i - 1]) / m;
        }
        delta[n - 1] = g[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) delta[i] = g[i] - c[i] * delta[i + 1];
        double step = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] += delta[i];
            step = std::max(step, std::abs(delta[i]));
        }
        if (step < 1e-14) break;
    }
    if (it == 100) throw std::runtime_error("relaxation_bvp: Newton did not converge");
    return {v[0], v, it};
}

/// Richardson-extrapolated center value from n and 2n cells.
inline double relaxation_center_value(const std::function<double(double)>& f,
                                      const std::function<double(double)>& df, int d,
                                      double radius, std::size_t n) {
    const double coarse = relaxation_bvp(f, df, d, radius, n).center_value;
    const double fine = relaxation_bvp(f, df, d, radius, 2 * n).center_value;
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace kpp_lab::oracle
