#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>

namespace kpp_lab::ode {

template <std::size_t N>
using State = std::array<double, N>;

/// One accepted Dormand-Prince step with its 4th-order continuous extension.
template <std::size_t N>
struct DenseSegment {
    double x0 = 0.0;
    double h = 0.0;
    std::array<State<N>, 5> rcont{};

    [[nodiscard]] double x1() const noexcept { return x0 + h; }

    [[nodiscard]] State<N> operator()(double x) const noexcept {
        const double theta = (x - x0) / h;
        const double theta1 = 1.0 - theta;
        State<N> out;
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = rcont[0][i] +
                     theta * (rcont[1][i] +
                              theta1 * (rcont[2][i] + theta * (rcont[3][i] + theta1 * rcont[4][i])));
        }
        return out;
    }
};

template <std::size_t N>
struct StepResult {
    State<N> y;
    State<N> dydx_end;  // FSAL derivative at x + h
    double error_norm;
    DenseSegment<N> dense;
};

/// Dormand-Prince 5(4) stepper (FSAL) with dense output.
///
/// `rhs(x, y)` returns std::nullopt when y leaves the region where the
/// right-hand side is defined; the step is then reported as failed.
template <std::size_t N, class Rhs>
std::optional<StepResult<N>> dopri5_step(const Rhs& rhs, double x, const State<N>& y,
                                         const State<N>& k1, double h, double rel_tol,
                                         double abs_tol) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                     d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                     d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

    State<N> tmp;
    auto stage = [&](auto&& combine, double cx) -> std::optional<State<N>> {
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * combine(i);
        return rhs(x + cx * h, tmp);
    };

    const auto k2 = stage([&](std::size_t i) { return a21 * k1[i]; }, c2);
    if (!k2) return std::nullopt;
    const auto k3 = stage([&](std::size_t i) { return a31 * k1[i] + a32 * (*k2)[i]; }, c3);
    if (!k3) return std::nullopt;
    const auto k4 = stage(
        [&](std::size_t i) { return a41 * k1[i] + a42 * (*k2)[i] + a43 * (*k3)[i]; }, c4);
    if (!k4) return std::nullopt;
    const auto k5 = stage(
        [&](std::size_t i) {
            return a51 * k1[i] + a52 * (*k2)[i] + a53 * (*k3)[i] + a54 * (*k4)[i];
        },
        c5);
    if (!k5) return std::nullopt;
    const auto k6 = stage(
        [&](std::size_t i) {
            return a61 * k1[i] + a62 * (*k2)[i] + a63 * (*k3)[i] + a64 * (*k4)[i] +
                   a65 * (*k5)[i];
        },
        1.0);
    if (!k6) return std::nullopt;
    State<N> y_new;
    for (std::size_t i = 0; i < N; ++i)
        y_new[i] = y[i] + h * (a71 * k1[i] + a73 * (*k3)[i] + a74 * (*k4)[i] + a75 * (*k5)[i] +
                               a76 * (*k6)[i]);
    const auto k7 = rhs(x + h, y_new);
    if (!k7) return std::nullopt;

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (e1 * k1[i] + e3 * (*k3)[i] + e4 * (*k4)[i] + e5 * (*k5)[i] +
                              e6 * (*k6)[i] + e7 * (*k7)[i]);
        const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err += (e / scale) * (e / scale);
    }
    err = std::sqrt(err / static_cast<double>(N));

    StepResult<N> out{y_new, *k7, err, {}};
    out.dense.x0 = x;
    out.dense.h = h;
    for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = y_new[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        out.dense.rcont[0][i] = y[i];
        out.dense.rcont[1][i] = ydiff;
        out.dense.rcont[2][i] = bspl;
        out.dense.rcont[3][i] = ydiff - h * (*k7)[i] - bspl;
        out.dense.rcont[4][i] = h * (d1 * k1[i] + d3 * (*k3)[i] + d4 * (*k4)[i] +
                                     d5 * (*k5)[i] + d6 * (*k6)[i] + d7 * (*k7)[i]);
    }
    if (!std::isfinite(err)) return std::nullopt;
    return out;
}

/// Standard step-size update for an embedded 5(4) pair.
inline double next_step_factor(double error_norm, bool after_reject) {
    constexpr double kSafety = 0.9;
    constexpr double kMinFactor = 0.2;
    constexpr double kMaxFactor = 5.0;
    if (error_norm == 0.0) return after_reject ? 1.0 : kMaxFactor;
    double factor = kSafety * std::pow(error_norm, -0.2);
    factor = std::clamp(factor, kMinFactor, after_reject ? 1.0 : kMaxFactor);
    return factor;
}

}  // namespace kpp_lab::ode
