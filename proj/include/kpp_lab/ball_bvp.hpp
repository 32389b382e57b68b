#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kpp_lab/errors.hpp"
#include "kpp_lab/linear_comparison.hpp"
#include "kpp_lab/nonlinearity.hpp"
#include "kpp_lab/parallel.hpp"
#include "kpp_lab/radial_shooting.hpp"

namespace kpp_lab {

/// Positive radial solution of the Dirichlet problem on B_R.
struct BallSolution {
    double radius;
    double p_star;
    RadialProfile profile;
    int bracketing_iterations;
    double residual;  // |first_root(profile) - radius|
};

struct BvpConfig {
    double bvp_tol = 1e-8;
    /// Bisection also stops once the p-bracket is narrower than this,
    /// measured relative to min(p, 1-p).
    double p_tol = 1e-12;
    std::size_t scan_points = 64;
    int max_iterations = 200;
    ShootConfig shoot{};
};

/// Scan grid for the center value: geometric towards 0 for the lower half
/// and geometric in 1-p towards 1 for the upper half.
inline std::vector<double> center_value_scan(std::size_t points) {
    if (points < 4) throw InputError("center value scan needs at least 4 points");
    constexpr double kLowest = 1e-6;
    constexpr double kClosestToOne = 1e-15;
    const std::size_t lower = points / 2;
    const std::size_t upper = points - lower;
    std::vector<double> grid;
    grid.reserve(points);
    for (std::size_t i = 0; i < lower; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(lower);
        grid.push_back(kLowest * std::pow(0.5 / kLowest, t));
    }
    for (std::size_t i = 0; i < upper; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(upper - 1);
        grid.push_back(1.0 - 0.5 * std::pow(kClosestToOne / 0.5, t));
    }
    return grid;
}

namespace detail {

inline double root_or_infinity(const RadialProfile& profile) {
    return profile.status == ShootStatus::RootFound ? *profile.first_root
                                                    : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Finds p* with first_root(shoot(f, d, p*)) = R by a scan over center
/// values followed by bisection. The smallest bracketing p is used.
inline BallSolution dirichlet_solution(const Nonlinearity& f, int d, double radius,
                                       const BvpConfig& cfg = {}) {
    if (!(radius > 0.0)) throw InputError("dirichlet_solution: radius must be positive");
    if (!(cfg.bvp_tol > 0.0)) throw InputError("dirichlet_solution: bvp_tol must be positive");

    const auto grid = center_value_scan(cfg.scan_points);
    std::optional<std::size_t> bracket;
    double r_prev = detail::root_or_infinity(shoot(f, d, grid.front(), cfg.shoot));
    if (!(r_prev <= radius)) {
        std::ostringstream msg;
        msg << "NoPositiveSolution: every center value yields a first root above R = " << radius
            << " (smallest p = " << grid.front() << " gives " << r_prev << ")";
        throw NoPositiveSolution(msg.str());
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double r_here = detail::root_or_infinity(shoot(f, d, grid[i], cfg.shoot));
        if (r_prev <= radius && r_here >= radius) {
            bracket = i - 1;
            break;
        }
        r_prev = r_here;
    }
    if (!bracket) {
        std::ostringstream msg;
        msg << "NoPositiveSolution: no center value in (0,1) brackets R = " << radius;
        throw NoPositiveSolution(msg.str());
    }

    double lo = grid[*bracket];
    double hi = grid[*bracket + 1];
    std::optional<RadialProfile> best;
    double best_residual = std::numeric_limits<double>::infinity();
    double best_p = lo;
    int iterations = 0;
    for (; iterations < cfg.max_iterations; ++iterations) {
        const double mid = 0.5 * (lo + hi);
        auto profile = shoot(f, d, mid, cfg.shoot);
        const double r_mid = detail::root_or_infinity(profile);
        const double residual = std::abs(r_mid - radius);
        if (residual < best_residual) {
            best_residual = residual;
            best_p = mid;
            best = std::move(profile);
        }
        if (residual <= cfg.bvp_tol) break;
        if (r_mid < radius)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= cfg.p_tol * std::min(lo, 1.0 - hi)) {
            ++iterations;
            break;
        }
    }
    if (!best || best->status != ShootStatus::RootFound || iterations >= cfg.max_iterations ||
        best_residual > 1e3 * cfg.bvp_tol) {
        std::ostringstream msg;
        msg << "bisection stalled for R = " << radius << " (best residual " << best_residual
            << " at p = " << best_p << ")";
        throw ConvergenceFailure(msg.str());
    }
    return {radius, best_p, std::move(*best), iterations, best_residual};
}

/// Dirichlet solutions on an increasing list of radii; element i belongs to radii[i]
/// whatever the worker count.
inline std::vector<BallSolution> minimal_solution_sweep(const Nonlinearity& f, int d,
                                                        const std::vector<double>& radii,
                                                        const BvpConfig& cfg = {},
                                                        std::size_t workers = 1) {
    if (radii.empty()) throw InputError("minimal_solution_sweep: empty radius list");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw InputError("minimal_solution_sweep: radii must be strictly increasing");
    std::vector<std::optional<BallSolution>> slots(radii.size());
    parallel_for(radii.size(), workers,
                 [&](std::size_t i) { slots[i] = dirichlet_solution(f, d, radii[i], cfg); });
    std::vector<BallSolution> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

inline bool center_values_strictly_increasing(const std::vector<BallSolution>& sweep) {
    for (std::size_t i = 1; i < sweep.size(); ++i)
        if (!(sweep[i].p_star > sweep[i - 1].p_star)) return false;
    return true;
}

struct ThresholdEstimate {
    double radius;              // j_{(d-2)/2,1} / sqrt(s0)
    double small_z_slope;       // s0 = lim f(z)/z as z -> 0
    double scanned_infimum;     // min over the p-scan of first_root(shoot(f, d, p))
    std::vector<double> scan_p;
    std::vector<double> scan_roots;
    bool consistent;            // |scanned_infimum - radius| <= tol
};

/// Estimates lim_{z->0} f(z)/z by linear extrapolation of the ratio from
/// two small arguments, cross-checked against a second pair.
inline double small_z_slope(const Nonlinearity& f, double tol) {
    auto ratio = [&f](double z) { return f(z) / z; };
    constexpr double kZ = 1e-6;
    const double fine = 2.0 * ratio(kZ) - ratio(2.0 * kZ);
    const double coarse = 2.0 * ratio(2.0 * kZ) - ratio(4.0 * kZ);
    if (!std::isfinite(fine) || !(fine > 0.0))
        throw EstimationError(f.label() + ": small-z limit of f(z)/z is not a positive number");
    if (std::abs(fine - coarse) > tol * std::max(1.0, std::abs(fine)))
        throw EstimationError(f.label() + ": small-z limit of f(z)/z is not resolved");
    return fine;
}

inline ThresholdEstimate existence_threshold(const Nonlinearity& f, int d, double tol = 1e-2,
                                             const ShootConfig& shoot_cfg = {}) {
    if (!(tol > 0.0)) throw InputError("existence_threshold: tol must be positive");
    ThresholdEstimate est;
    est.small_z_slope = small_z_slope(f, tol);
    est.radius = linear_first_root(est.small_z_slope, d);
    est.scan_p = {1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
    est.scanned_infimum = std::numeric_limits<double>::infinity();
    for (double p : est.scan_p) {
        const double r = detail::root_or_infinity(shoot(f, d, p, shoot_cfg));
        est.scan_roots.push_back(r);
        est.scanned_infimum = std::min(est.scanned_infimum, r);
    }
    est.consistent = std::abs(est.scanned_infimum - est.radius) <= tol;
    return est;
}

/// Outcome of a numerical ordering check v1 >= v2 on [0, domain_radius].
struct ComparisonVerdict {
    bool ordered;
    bool hypothesis_met;   // v1 >= v2 - tol at domain_radius
    double location;       // radius of the largest v2 - v1
    double gap;            // max(v2 - v1) over the union grid (<= tol when ordered)
    std::size_t points_checked;
    std::string note;
};

/// Compares two radial profiles on the union of their grids restricted to
/// [0, domain_radius]. Points where v1 < v2 - tol make the verdict Violated,
/// and the note records whether the boundary ordering held.
inline ComparisonVerdict comparison_check(const RadialProfile& v1, const RadialProfile& v2,
                                          double domain_radius, double tol = 1e-9) {
    if (!(domain_radius > 0.0)) throw InputError("comparison_check: domain radius must be positive");
    constexpr double kGridSlack = 1e-12;
    for (const auto* v : {&v1, &v2})
        if (v->extent() < domain_radius * (1.0 - kGridSlack))
            throw InputError("comparison_check: profile does not cover the domain radius");
    const double edge1 = std::min(domain_radius, v1.extent());
    const double edge2 = std::min(domain_radius, v2.extent());

    std::vector<double> radii;
    radii.reserve(v1.grid.size() + v2.grid.size() + 1);
    for (double r : v1.grid)
        if (r <= domain_radius) radii.push_back(r);
    for (double r : v2.grid)
        if (r <= domain_radius) radii.push_back(r);
    radii.push_back(domain_radius);
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

    ComparisonVerdict verdict{true, true, 0.0, -std::numeric_limits<double>::infinity(), 0, ""};
    for (double r : radii) {
        const double gap = v2.value_at(std::min(r, edge2)) - v1.value_at(std::min(r, edge1));
        if (gap > verdict.gap) {
            verdict.gap = gap;
            verdict.location = r;
        }
    }
    verdict.points_checked = radii.size();
    verdict.ordered = verdict.gap <= tol;
    const double boundary_gap = v2.value_at(edge2) - v1.value_at(edge1);
    verdict.hypothesis_met = boundary_gap <= tol;
    if (!verdict.hypothesis_met)
        verdict.note = "hypothesis not met: v1 < v2 on the boundary, ordering is not implied";
    else if (verdict.ordered)
        verdict.note = "ordered";
    else
        verdict.note = "ordering violated although the boundary ordering holds";
    return verdict;
}

struct NonexistenceCertificate {
    std::string f_label;
    int dimension;
    double p;
    double radius;
    RadialProfile profile;
    double comparison_slope;  // f(p)/p
    double rho_bound;         // rho(f(p)/p, d)
    bool bound_holds;         // radius <= rho_bound * (1 + 1e-8)
    std::string statement;
};

/// Shoots from p and packages the subsolution that forces u >= p for every
/// entire solution u with values in (0,1).
inline NonexistenceCertificate nonexistence_certificate(const Nonlinearity& f, int d, double p,
                                                        const ShootConfig& cfg = {}) {
    const auto report = validate_assumptions(f);
    if (!report.passed()) {
        std::ostringstream msg;
        msg << f.label() << " fails validation (" << report.violation_count << " violations";
        if (!report.violations.empty()) msg << ", first at z = " << report.violations.front().first
                                             << ": " << report.violations.front().second;
        msg << ")";
        throw InvalidNonlinearity(msg.str());
    }
    const auto slope = comparison_slope(f, p);
    auto profile = shoot(f, d, p, cfg);
    const double radius = first_root(profile);
    const double bound = linear_first_root(slope.m, d);

    std::ostringstream st;
    st.precision(std::numeric_limits<double>::max_digits10);
    st << "For f = " << f.label() << " in dimension " << d
       << ", the radial solution with center value p = " << p
       << " is positive on the open ball of radius R = " << radius
       << " and vanishes on its boundary; hence any entire solution u of "
          "Laplacian(u) + f(u) = 0 with 0 < u < 1 satisfies u(y) >= " << p
       << " at every point y.";
    return {f.label(), d,     p,
            radius,    std::move(profile), slope.m,
            bound,     radius <= bound * (1.0 + 1e-8), st.str()};
}

}  // namespace kpp_lab
