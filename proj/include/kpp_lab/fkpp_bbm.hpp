#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "kpp_lab/errors.hpp"
#include "kpp_lab/nonlinearity.hpp"
#include "kpp_lab/parallel.hpp"

namespace kpp_lab {

// ---------------------------------------------------------------------------
// Test functions phi >= 0 entering the Laplace functional.

struct ConstantPhi {
    double c;
};

struct IndicatorPhi {
    double c;
    double a;
    double b;
};

class TestFunction {
public:
    static TestFunction constant(double c) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("test function: c must be >= 0");
        return TestFunction(ConstantPhi{c});
    }

    static TestFunction indicator(double c, double a, double b) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("test function: c must be >= 0");
        if (!(a < b)) throw InputError("test function: indicator needs a < b");
        return TestFunction(IndicatorPhi{c, a, b});
    }

    [[nodiscard]] double operator()(double x) const noexcept {
        if (const auto* k = std::get_if<ConstantPhi>(&form_)) return k->c;
        const auto& ind = std::get<IndicatorPhi>(form_);
        return (x >= ind.a && x <= ind.b) ? ind.c : 0.0;
    }

    [[nodiscard]] bool is_constant() const noexcept {
        return std::holds_alternative<ConstantPhi>(form_);
    }
    [[nodiscard]] double level() const noexcept {
        return std::visit([](const auto& v) { return v.c; }, form_);
    }
    /// Value of phi far away from the origin.
    [[nodiscard]] double far_field() const noexcept { return is_constant() ? level() : 0.0; }
    /// max(|a|, |b|) for indicators, 0 for constants.
    [[nodiscard]] double support_edge() const noexcept {
        if (const auto* ind = std::get_if<IndicatorPhi>(&form_))
            return std::max(std::abs(ind->a), std::abs(ind->b));
        return 0.0;
    }
    /// Jump locations of phi.
    [[nodiscard]] std::vector<double> jumps() const {
        if (const auto* ind = std::get_if<IndicatorPhi>(&form_))
            if (ind->c > 0.0) return {ind->a, ind->b};
        return {};
    }

    [[nodiscard]] std::string label() const {
        std::ostringstream os;
        os.precision(std::numeric_limits<double>::max_digits10);
        if (const auto* k = std::get_if<ConstantPhi>(&form_)) {
            os << "constant(c=" << k->c << ")";
        } else {
            const auto& ind = std::get<IndicatorPhi>(form_);
            os << "indicator(c=" << ind.c << ",a=" << ind.a << ",b=" << ind.b << ")";
        }
        return os.str();
    }

private:
    explicit TestFunction(std::variant<ConstantPhi, IndicatorPhi> form) : form_(form) {}
    std::variant<ConstantPhi, IndicatorPhi> form_;
};

// ---------------------------------------------------------------------------
// Branching Brownian motion in one dimension.

struct BBMOutcome {
    std::vector<double> positions;
    std::uint64_t seed;

    [[nodiscard]] std::size_t particle_count() const noexcept { return positions.size(); }
};

inline constexpr std::size_t kDefaultParticleCap = 10'000'000;

/// SplitMix64 finaliser; decorrelates neighbouring seeds.
inline std::uint64_t mix_seed(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of run `index` under `master_seed`.
inline std::uint64_t run_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix_seed(master_seed ^ mix_seed(index));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return std::mt19937_64(seq);
}

/// Exact event-driven simulation: exponential(beta) lifetimes, binary
/// splitting, unit-variance Brownian increments between events.
inline BBMOutcome simulate_bbm(double beta, double t, double x0, std::uint64_t seed,
                               std::size_t particle_cap = kDefaultParticleCap) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw InputError("simulate_bbm: beta must be >= 0");
    if (!(t >= 0.0) || !std::isfinite(t)) throw InputError("simulate_bbm: t must be >= 0");

    BBMOutcome out{{}, seed};
    if (t == 0.0) {
        out.positions.push_back(x0);
        return out;
    }
    auto engine = make_engine(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::exponential_distribution<double> lifetime(beta > 0.0 ? beta : 1.0);

    struct Pending {
        double birth_time;
        double position;
    };
    std::vector<Pending> stack{{0.0, x0}};
    while (!stack.empty()) {
        const Pending p = stack.back();
        stack.pop_back();
        const double death = beta > 0.0 ? p.birth_time + lifetime(engine)
                                        : std::numeric_limits<double>::infinity();
        if (death < t) {
            const double where = p.position + std::sqrt(death - p.birth_time) * gauss(engine);
            stack.push_back({death, where});
            stack.push_back({death, where});
            if (stack.size() + out.positions.size() > particle_cap)
                throw ResourceError("simulate_bbm: particle count exceeds the cap of " +
                                    std::to_string(particle_cap));
        } else {
            out.positions.push_back(p.position + std::sqrt(t - p.birth_time) * gauss(engine));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo estimation.

struct MCEstimate {
    double mean;
    double stderr_;
    std::size_t n_runs;
    std::uint64_t master_seed;
};

/// Mean and standard error of per-run values, summed pairwise in index order.
inline MCEstimate summarize(const std::vector<double>& values, std::uint64_t master_seed) {
    const std::size_t n = values.size();
    if (n < 2) throw InputError("summarize: need at least two runs");
    const double mean = pairwise_sum(values) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
    const double var = pairwise_sum(sq) / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n, master_seed};
}

/// Estimates E_x0 exp(-sum_i phi(z_i^t)).
inline MCEstimate laplace_functional_mc(const TestFunction& phi, double beta, double t, double x0,
                                        std::size_t n_runs, std::uint64_t master_seed,
                                        std::size_t workers = 1,
                                        std::size_t particle_cap = kDefaultParticleCap) {
    if (n_runs < 100) throw InputError("laplace_functional_mc: n_runs must be >= 100");
    std::vector<double> values(n_runs);
    parallel_for(n_runs, workers, [&](std::size_t i) {
        const auto outcome = simulate_bbm(beta, t, x0, run_seed(master_seed, i), particle_cap);
        double exponent = 0.0;
        for (double z : outcome.positions) exponent += phi(z);
        values[i] = std::exp(-exponent);
    });
    return summarize(values, master_seed);
}

/// Population counts N_t of independent runs, in run order.
inline std::vector<std::size_t> population_counts(double beta, double t, std::size_t n_runs,
                                                  std::uint64_t master_seed,
                                                  std::size_t workers = 1) {
    std::vector<std::size_t> counts(n_runs);
    parallel_for(n_runs, workers, [&](std::size_t i) {
        counts[i] = simulate_bbm(beta, t, 0.0, run_seed(master_seed, i)).particle_count();
    });
    return counts;
}

/// E s^{N_t} for the binary pure-birth count, s = exp(-c): the value of the
/// Laplace functional for a constant test function.
inline double yule_closed_form(double beta, double t, double c) {
    if (!(beta >= 0.0) || !(t >= 0.0) || !(c >= 0.0))
        throw InputError("yule_closed_form: arguments must be non-negative");
    const double s = std::exp(-c);
    const double q = std::exp(-beta * t);
    return s * q / (1.0 - (1.0 - q) * s);
}

// ---------------------------------------------------------------------------
// Method-of-lines solver for u_t = u_xx / 2 + beta u (1 - u).

struct FkppField {
    std::vector<double> x;
    std::vector<double> times;
    std::vector<std::vector<double>> u;  // u[k][i] at times[k], x[i]
    double h;
    double dt;

    /// Linear interpolation in x of the snapshot at index k.
    [[nodiscard]] double at(std::size_t k, double where) const {
        if (where < x.front() || where > x.back()) throw InputError("FkppField: x outside mesh");
        const double pos = (where - x.front()) / h;
        std::size_t i = static_cast<std::size_t>(std::floor(pos));
        if (i >= x.size() - 1) return u[k].back();
        const double w = pos - static_cast<double>(i);
        return (1.0 - w) * u[k][i] + w * u[k][i + 1];
    }
};

/// Default half-width: support edge + front travel + diffusive buffer.
inline double default_half_width(const TestFunction& phi, double beta, double t_end, double x0 = 0.0) {
    return std::max(phi.support_edge(), std::abs(x0)) + std::sqrt(2.0 * beta) * t_end +
           6.0 * std::sqrt(t_end);
}

/// Logistic solution of u' = beta u (1-u) from u0.
inline double logistic_solution(double beta, double u0, double t) {
    const double g = std::exp(beta * t);
    return u0 * g / (1.0 - u0 + u0 * g);
}

inline constexpr double kRangeSlack = 1e-12;
inline constexpr double kBoundaryTolerance = 1e-6;

/// Second-order central differences in x, classical RK4 in time on [-L, L].
/// The boundary nodes carry the far-field value of the solution: zero for
/// compactly supported phi, the logistic solution for constant phi.
/// Nodes that sit exactly on a jump of phi take the mean of the one-sided
/// initial values.
inline FkppField solve_fkpp(const Nonlinearity& reaction, const TestFunction& phi, double t_end,
                            double half_width, double h, double dt,
                            std::vector<double> output_times = {}) {
    const auto* kpp = std::get_if<Kpp>(&reaction.family());
    if (!kpp) throw InputError("solve_fkpp: reaction must be of KPP type");
    const double beta = kpp->beta;
    if (!(t_end >= 0.0)) throw InputError("solve_fkpp: t_end must be >= 0");
    if (!(h > 0.0) || !(dt > 0.0)) throw InputError("solve_fkpp: h and dt must be positive");
    if (dt > 0.5 * h * h * (1.0 + 1e-12))
        throw StabilityError("solve_fkpp: dt exceeds the diffusion limit h^2/2");
    if (output_times.empty()) output_times = {t_end};
    std::sort(output_times.begin(), output_times.end());
    if (output_times.front() < 0.0 || output_times.back() > t_end * (1.0 + 1e-12))
        throw InputError("solve_fkpp: output times must lie in [0, t_end]");

    const auto half_nodes = static_cast<std::size_t>(std::ceil(half_width / h - 1e-9));
    if (half_nodes < 2) throw InputError("solve_fkpp: domain too small for the mesh");
    const std::size_t n = 2 * half_nodes + 1;

    FkppField field;
    field.h = h;
    field.dt = 0.0;
    field.x.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        field.x[i] = (static_cast<double>(i) - static_cast<double>(half_nodes)) * h;

    const double far_u0 = 1.0 - std::exp(-phi.far_field());
    auto boundary = [&](double t) { return logistic_solution(beta, far_u0, t); };

    std::vector<double> u(n);
    const auto jumps = phi.jumps();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = field.x[i];
        u[i] = 1.0 - std::exp(-phi(x));
        for (double j : jumps) {
            if (std::abs(x - j) <= 1e-9 * h) {
                const double left = 1.0 - std::exp(-phi(x - 0.5 * h));
                const double right = 1.0 - std::exp(-phi(x + 0.5 * h));
                u[i] = 0.5 * (left + right);
            }
        }
    }
    u.front() = boundary(0.0);
    u.back() = boundary(0.0);

    const double inv_h2 = 0.5 / (h * h);
    auto rhs = [&](const std::vector<double>& v, std::vector<double>& out) {
        out.front() = 0.0;
        out.back() = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i)
            out[i] = inv_h2 * (v[i - 1] - 2.0 * v[i] + v[i + 1]) + beta * v[i] * (1.0 - v[i]);
    };
    auto check_state = [&](const std::vector<double>& v, double t) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!(v[i] >= -kRangeSlack && v[i] <= 1.0 + kRangeSlack)) {
                std::ostringstream msg;
                msg << "solve_fkpp: u = " << v[i] << " left [0,1] at x = " << field.x[i]
                    << ", t = " << t;
                throw StabilityError(msg.str());
            }
        }
        const double g = boundary(t);
        if (std::abs(v[1] - g) > kBoundaryTolerance || std::abs(v[n - 2] - g) > kBoundaryTolerance)
            throw DomainTooSmall("solve_fkpp: solution is not negligible at the boundary; increase L");
    };

    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = 0.0;
    check_state(u, t);
    for (double target : output_times) {
        const double span = target - t;
        const auto steps = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
        const double step = steps > 0 ? span / static_cast<double>(steps) : 0.0;
        field.dt = std::max(field.dt, step);
        for (std::size_t s = 0; s < steps; ++s) {
            const double t0 = t;
            rhs(u, k1);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * step * k1[i];
            tmp.front() = tmp.back() = boundary(t0 + 0.5 * step);
            rhs(tmp, k2);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * step * k2[i];
            tmp.front() = tmp.back() = boundary(t0 + 0.5 * step);
            rhs(tmp, k3);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + step * k3[i];
            tmp.front() = tmp.back() = boundary(t0 + step);
            rhs(tmp, k4);
            for (std::size_t i = 0; i < n; ++i)
                u[i] += step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            t = (s + 1 == steps) ? target : t0 + step;
            u.front() = u.back() = boundary(t);
            check_state(u, t);
        }
        t = target;
        field.times.push_back(target);
        field.u.push_back(u);
    }
    if (field.dt == 0.0) field.dt = dt;
    return field;
}

// ---------------------------------------------------------------------------
// Three-way consistency check of the Laplace functional.

struct ConsistencyParams {
    TestFunction phi = TestFunction::constant(0.0);
    double beta = 1.0;
    double t = 1.0;
    double x0 = 0.0;
    std::size_t n_runs = 100000;
    std::uint64_t master_seed = 0x5EED;
    double h = 0.02;
    std::optional<double> dt;          // default h^2/2
    std::optional<double> half_width;  // default_half_width()
    double pde_error_budget = 1e-3;
    std::optional<double> pde_beta;    // branching rate used by the PDE side; defaults to beta
    std::size_t workers = 1;
};

struct ConsistencyReport {
    MCEstimate mc;
    double pde_value;                   // u(x0, t)
    std::optional<double> closed_form;  // E exp(-c N_t) for constant phi
    bool pass;
    std::optional<FkppField> field;     // PDE snapshot at t (absent for t = 0)
};

inline ConsistencyReport consistency_check(const ConsistencyParams& params) {
    const double pde_beta = params.pde_beta.value_or(params.beta);
    ConsistencyReport report{
        laplace_functional_mc(params.phi, params.beta, params.t, params.x0, params.n_runs,
                              params.master_seed, params.workers),
        0.0, std::nullopt, false, std::nullopt};
    if (params.t == 0.0) {
        report.pde_value = 1.0 - std::exp(-params.phi(params.x0));
    } else {
        const double half_width = params.half_width.value_or(
            default_half_width(params.phi, pde_beta, params.t, params.x0));
        const double dt = params.dt.value_or(0.5 * params.h * params.h);
        report.field = solve_fkpp(Nonlinearity::kpp(pde_beta), params.phi, params.t, half_width,
                                  params.h, dt);
        report.pde_value = report.field->at(0, params.x0);
    }
    if (params.phi.is_constant())
        report.closed_form = yule_closed_form(params.beta, params.t, params.phi.level());
    const double bound = 3.0 * report.mc.stderr_ + params.pde_error_budget;
    report.pass = std::abs(report.mc.mean - (1.0 - report.pde_value)) <= bound;
    return report;
}

}  // namespace kpp_lab
