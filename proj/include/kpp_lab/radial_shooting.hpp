#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kpp_lab/cylinder_zero.hpp"
#include "kpp_lab/dopri5.hpp"
#include "kpp_lab/errors.hpp"
#include "kpp_lab/nonlinearity.hpp"

namespace kpp_lab {

enum class ShootStatus { RootFound, NoRootWithinHorizon, IntegrationFailure };

inline std::string_view to_string(ShootStatus s) noexcept {
    switch (s) {
        case ShootStatus::RootFound: return "RootFound";
        case ShootStatus::NoRootWithinHorizon: return "NoRootWithinHorizon";
        case ShootStatus::IntegrationFailure: return "IntegrationFailure";
    }
    return "?";
}

struct ShootConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double series_cutoff = 1e-4;
    double root_tol = 1e-10;
    /// Unset: 10 * rho(f(p)/p, d) when that slope is positive, otherwise 1e3.
    std::optional<double> horizon;
    /// Minimum number of uniformly spaced samples added to the step points.
    std::size_t uniform_samples = 2000;

    void check() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(root_tol > 0.0))
            throw InputError("shoot: tolerances must be positive");
        if (!(series_cutoff > 0.0) || !(series_cutoff < 1.0))
            throw InputError("shoot: series cutoff must lie in (0,1)");
        if (horizon && !(*horizon > series_cutoff))
            throw InputError("shoot: horizon must exceed the series cutoff");
    }
};

/// Radial profile V(r), V'(r) from the center out to the first root (or the horizon).
struct RadialProfile {
    int dimension = 1;
    double center_value = 0.0;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> derivatives;
    std::optional<double> first_root;
    ShootStatus status = ShootStatus::IntegrationFailure;
    double root_tol = 0.0;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;

    [[nodiscard]] double extent() const noexcept { return grid.empty() ? 0.0 : grid.back(); }

    /// Cubic Hermite interpolation of V at r in [0, extent()].
    [[nodiscard]] double value_at(double r) const {
        if (grid.empty()) throw InputError("value_at: empty profile");
        if (r < grid.front() || r > grid.back())
            throw InputError("value_at: radius outside the profile grid");
        auto it = std::upper_bound(grid.begin(), grid.end(), r);
        std::size_t hi = static_cast<std::size_t>(it - grid.begin());
        if (hi >= grid.size()) return values.back();
        if (hi == 0) hi = 1;
        const std::size_t lo = hi - 1;
        const double h = grid[hi] - grid[lo];
        const double t = (r - grid[lo]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * values[lo] + (t3 - 2 * t2 + t) * h * derivatives[lo] +
               (-2 * t3 + 3 * t2) * values[hi] + (t3 - t2) * h * derivatives[hi];
    }
};

/// Second-order Taylor seed at r0 for V(0) = p, V'(0) = 0.
struct SeriesStart {
    double value;
    double derivative;
};

inline SeriesStart series_start(const Nonlinearity& f, int d, double p, double r0) {
    if (d < 1) throw InputError("series_start: dimension must be >= 1");
    const double fp = f(p);
    return {p - fp * r0 * r0 / (2.0 * d), -fp * r0 / d};
}

inline double default_horizon(const Nonlinearity& f, int d, double p) {
    const double slope = f(p) / p;
    if (slope > 0.0 && std::isfinite(slope)) return 10.0 * linear_first_root(slope, d);
    return 1e3;
}

/// Integrates (r^{d-1} V')' + r^{d-1} f(V) = 0, V(0) = p, V'(0) = 0 up to
/// the first zero of V or the horizon.
inline RadialProfile shoot(const Nonlinearity& f, int d, double p, const ShootConfig& cfg = {}) {
    cfg.check();
    if (d < 1) throw InputError("shoot: dimension must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw InputError("shoot: center value must lie in (0,1)");

    using S = ode::State<2>;
    const double r0 = cfg.series_cutoff;
    const double horizon = cfg.horizon.value_or(default_horizon(f, d, p));
    const double curvature = (d - 1.0);

    auto rhs = [&f, curvature](double r, const S& y) -> std::optional<S> {
        if (!Nonlinearity::in_domain(y[0]) || !std::isfinite(y[1])) return std::nullopt;
        return S{y[1], -f(y[0]) - curvature * y[1] / r};
    };

    RadialProfile out;
    out.dimension = d;
    out.center_value = p;
    out.root_tol = cfg.root_tol;

    const auto seed = series_start(f, d, p, r0);
    double r = r0;
    S y{seed.value, seed.derivative};
    S k1 = *rhs(r, y);
    double h = std::min(r0, horizon - r0);
    bool rejected_last = false;
    std::vector<ode::DenseSegment<2>> segments;
    std::optional<double> root;
    bool failed = false;

    constexpr std::size_t kMaxSteps = 10'000'000;
    while (r < horizon) {
        if (h < 1e-14 * std::max(1.0, r) || out.steps_accepted + out.steps_rejected > kMaxSteps) {
            failed = true;
            break;
        }
        const bool last = h >= horizon - r;
        if (last) h = horizon - r;
        auto step = ode::dopri5_step<2>(rhs, r, y, k1, h, cfg.rel_tol, cfg.abs_tol);
        if (!step) {
            // Undefined right-hand side somewhere in the step: overshoot past the root.
            ++out.steps_rejected;
            h *= 0.25;
            rejected_last = true;
            continue;
        }
        if (step->error_norm > 1.0) {
            ++out.steps_rejected;
            h *= ode::next_step_factor(step->error_norm, true);
            rejected_last = true;
            continue;
        }
        ++out.steps_accepted;
        segments.push_back(step->dense);
        const double r_new = last ? horizon : r + h;
        if (step->y[0] <= 0.0) {
            const auto& seg = segments.back();
            double lo = seg.x0, hi = seg.x1();
            for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
                 ++it) {
                const double mid = 0.5 * (lo + hi);
                if (seg(mid)[0] > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            root = 0.5 * (lo + hi);
            break;
        }
        r = r_new;
        y = step->y;
        k1 = step->dydx_end;
        h *= ode::next_step_factor(step->error_norm, rejected_last);
        rejected_last = false;
    }

    if (root) {
        out.status = ShootStatus::RootFound;
        out.first_root = root;
    } else {
        out.status = failed ? ShootStatus::IntegrationFailure : ShootStatus::NoRootWithinHorizon;
    }

    const double end = root ? *root : (segments.empty() ? r0 : segments.back().x1());
    const double fp = f(p);
    auto sample = [&](double x) -> S {
        if (x <= r0) return S{p - fp * x * x / (2.0 * d), -fp * x / d};
        auto it = std::upper_bound(segments.begin(), segments.end(), x,
                                   [](double v, const auto& seg) { return v < seg.x1(); });
        if (it == segments.end()) --it;
        return (*it)(x);
    };

    std::vector<double> radii;
    radii.reserve(segments.size() + cfg.uniform_samples + 3);
    radii.push_back(0.0);
    radii.push_back(std::min(r0, end));
    for (const auto& seg : segments)
        if (seg.x1() < end) radii.push_back(seg.x1());
    for (std::size_t i = 1; i < cfg.uniform_samples; ++i)
        radii.push_back(end * static_cast<double>(i) / static_cast<double>(cfg.uniform_samples));
    radii.push_back(end);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end(),
                            [end](double a, double b) { return b - a <= 1e-15 * std::max(1.0, end); }),
                radii.end());
    if (radii.back() != end) radii.back() = end;

    out.grid = std::move(radii);
    out.values.reserve(out.grid.size());
    out.derivatives.reserve(out.grid.size());
    for (double x : out.grid) {
        if (x == 0.0) {
            out.values.push_back(p);
            out.derivatives.push_back(0.0);
            continue;
        }
        const S s = sample(x);
        out.values.push_back(s[0]);
        out.derivatives.push_back(s[1]);
    }
    return out;
}

/// The first root R of a profile; throws NoRootError unless the shoot found one.
inline double first_root(const RadialProfile& profile) {
    if (profile.status != ShootStatus::RootFound || !profile.first_root)
        throw NoRootError("profile has no first root (status " +
                          std::string(to_string(profile.status)) + ")");
    return *profile.first_root;
}

/// True iff V' <= root_tol at every recorded radius up to the first root.
inline bool monotone_check(const RadialProfile& profile) {
    const double limit = profile.first_root.value_or(profile.extent());
    for (std::size_t i = 0; i < profile.grid.size() && profile.grid[i] <= limit; ++i)
        if (profile.derivatives[i] > profile.root_tol) return false;
    return true;
}

}  // namespace kpp_lab
