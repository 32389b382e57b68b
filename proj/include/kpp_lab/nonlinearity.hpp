#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kpp_lab/errors.hpp"

namespace kpp_lab {

/// Width of the region below zero where reaction terms are still defined
/// (as the constant f(0)). Only touched while a shooting step overshoots
/// the first root.
inline constexpr double kExtensionWidth = 1e-3;

struct Kpp {
    double beta;
};

struct GeneralizedLogistic {
    double m;
    double q;
    double exponent;
};

struct Linear {
    double m;
};

struct Tabulated {
    std::vector<std::pair<double, double>> samples;  // (z, f(z)), z strictly increasing, spanning [0,1]
};

using Family = std::variant<Kpp, GeneralizedLogistic, Linear, Tabulated>;

/// A reaction term f on [0,1].
///
/// Immutable once built. Closed-form families are evaluated directly.
/// Tabulated data is interpolated linearly in the ratio f(z)/z between
/// nodes with z > 0, so a table whose ratios strictly decrease yields an
/// interpolant whose ratio strictly decreases everywhere. When the table
/// has f(0) != 0 the first segment falls back to linear interpolation of f.
class Nonlinearity {
public:
    static Nonlinearity kpp(double beta) {
        if (!(beta > 0.0)) throw InputError("kpp: beta must be positive");
        return Nonlinearity(Kpp{beta}, "kpp(beta=" + format_param(beta) + ")");
    }

    static Nonlinearity logistic(double m, double q, double exponent) {
        if (!(m > 0.0) || !(q > 0.0)) throw InputError("logistic: m and q must be positive");
        if (!(exponent > 1.0)) throw InputError("logistic: exponent must exceed 1");
        return Nonlinearity(GeneralizedLogistic{m, q, exponent},
                            "logistic(m=" + format_param(m) + ",q=" + format_param(q) +
                                ",p=" + format_param(exponent) + ")");
    }

    static Nonlinearity linear(double m) {
        if (!(m > 0.0)) throw InputError("linear: m must be positive");
        return Nonlinearity(Linear{m}, "linear(m=" + format_param(m) + ")");
    }

    static Nonlinearity table(std::vector<std::pair<double, double>> samples,
                              std::string label = "table") {
        if (samples.size() < 2) throw InputError("table: need at least two samples");
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto [z, fz] = samples[i];
            if (!std::isfinite(z) || !std::isfinite(fz))
                throw InputError("table: non-finite sample");
            if (i > 0 && !(z > samples[i - 1].first))
                throw InputError("table: z values must be strictly increasing");
        }
        if (samples.front().first != 0.0 || samples.back().first != 1.0)
            throw InputError("table: samples must span exactly [0,1]");
        return Nonlinearity(Tabulated{std::move(samples)}, std::move(label));
    }

    [[nodiscard]] const Family& family() const noexcept { return family_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    [[nodiscard]] static bool in_domain(double z) noexcept {
        return z >= -kExtensionWidth && z <= 1.0;
    }

    /// f(z) on [-kExtensionWidth, 1]; throws DomainError elsewhere.
    [[nodiscard]] double operator()(double z) const {
        if (!in_domain(z)) {
            std::ostringstream msg;
            msg << label_ << ": argument " << z << " outside [-" << kExtensionWidth << ", 1]";
            throw DomainError(msg.str());
        }
        return value(std::max(z, 0.0));
    }

private:
    Nonlinearity(Family family, std::string label)
        : family_(std::move(family)), label_(std::move(label)) {}

    static std::string format_param(double x) {
        std::ostringstream os;
        os.precision(std::numeric_limits<double>::max_digits10);
        os << x;
        return os.str();
    }

    [[nodiscard]] double value(double z) const {
        return std::visit(
            [z](const auto& fam) -> double {
                using T = std::decay_t<decltype(fam)>;
                if constexpr (std::is_same_v<T, Kpp>) {
                    return fam.beta * z * (1.0 - z);
                } else if constexpr (std::is_same_v<T, GeneralizedLogistic>) {
                    return fam.m * z - fam.q * std::pow(z, fam.exponent);
                } else if constexpr (std::is_same_v<T, Linear>) {
                    return fam.m * z;
                } else {
                    return interpolate(fam.samples, z);
                }
            },
            family_);
    }

    static double interpolate(const std::vector<std::pair<double, double>>& s, double z) {
        auto it = std::upper_bound(s.begin(), s.end(), z,
                                   [](double v, const auto& node) { return v < node.first; });
        std::size_t hi = static_cast<std::size_t>(it - s.begin());
        if (hi >= s.size()) return s.back().second;  // z == 1
        if (hi == 0) hi = 1;
        const std::size_t lo = hi - 1;
        const auto [z0, f0] = s[lo];
        const auto [z1, f1] = s[hi];
        if (lo == 0 && f0 != 0.0) {
            const double w = (z - z0) / (z1 - z0);
            return (1.0 - w) * f0 + w * f1;
        }
        // Ratio interpolation; the first segment extrapolates the ratio from the next one.
        std::size_t a = lo, b = hi;
        if (lo == 0) {
            if (s.size() < 3) return f1 / z1 * z;
            a = 1;
            b = 2;
        }
        const double ga = s[a].second / s[a].first;
        const double gb = s[b].second / s[b].first;
        const double g = ga + (gb - ga) * (z - s[a].first) / (s[b].first - s[a].first);
        return z * g;
    }

    Family family_;
    std::string label_;
};

struct ValidationReport {
    bool positive_interior = true;
    bool ratio_strictly_decreasing = true;
    bool liminf_positive = true;
    std::size_t grid_size = 0;
    /// Smallest observed decrease rate -(r(z_{i+1}) - r(z_i)) / (z_{i+1} - z_i) of r = f/z.
    double strictness_margin = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, std::string>> violations;  // first kMaxRecorded only
    std::size_t violation_count = 0;

    static constexpr std::size_t kMaxRecorded = 100;

    [[nodiscard]] bool passed() const noexcept {
        return positive_interior && ratio_strictly_decreasing && liminf_positive;
    }
};

inline constexpr std::size_t kDefaultValidationGrid = 10000;
inline constexpr double kDefaultStrictnessEps = 1e-12;

/// Checks positivity on (0,1), strict decrease of f(z)/z and a positive
/// small-z ratio on the uniform grid z_i = i/(n+1), i = 1..n.
inline ValidationReport validate_assumptions(const Nonlinearity& f,
                                             std::size_t grid_size = kDefaultValidationGrid,
                                             double strictness_eps = kDefaultStrictnessEps) {
    if (grid_size < 100) throw InputError("validate_assumptions: grid_size must be >= 100");
    if (!(strictness_eps > 0.0)) throw InputError("validate_assumptions: strictness_eps must be > 0");

    ValidationReport report;
    report.grid_size = grid_size;
    auto record = [&report](double z, std::string what) {
        ++report.violation_count;
        if (report.violations.size() < ValidationReport::kMaxRecorded)
            report.violations.emplace_back(z, std::move(what));
    };

    const double step = 1.0 / static_cast<double>(grid_size + 1);
    double prev_z = 0.0;
    double prev_ratio = 0.0;
    for (std::size_t i = 1; i <= grid_size; ++i) {
        const double z = static_cast<double>(i) * step;
        const double fz = f(z);
        const double ratio = fz / z;
        if (!(fz > 0.0)) {
            report.positive_interior = false;
            record(z, "f(z) = " + std::to_string(fz) + " is not positive");
        }
        if (i == 1) {
            if (!(ratio > strictness_eps)) {
                report.liminf_positive = false;
                record(z, "f(z)/z near 0 is not bounded away from zero");
            }
        } else {
            const double dz = z - prev_z;
            report.strictness_margin = std::min(report.strictness_margin, (prev_ratio - ratio) / dz);
            if (!(ratio < prev_ratio - strictness_eps * dz)) {
                report.ratio_strictly_decreasing = false;
                record(z, "f(z)/z does not strictly decrease (" + std::to_string(prev_ratio) +
                              " -> " + std::to_string(ratio) + ")");
            }
        }
        prev_z = z;
        prev_ratio = ratio;
    }
    return report;
}

struct ComparisonSlope {
    double m;           // f(p)/p
    double min_margin;  // min over the sample grid of f(u) - m*u, u in (0,p)
};

/// Slope m = f(p)/p of the linear minorant, verified to satisfy f(u) > m u on (0,p).
inline ComparisonSlope comparison_slope(const Nonlinearity& f, double p,
                                        std::size_t samples = 1000) {
    if (!(p > 0.0 && p < 1.0)) throw InputError("comparison_slope: p must lie in (0,1)");
    const double m = f(p) / p;
    if (!(m > 0.0)) throw InvalidNonlinearity(f.label() + ": f(p)/p is not positive");
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= samples; ++j) {
        const double u = p * static_cast<double>(j) / static_cast<double>(samples + 1);
        const double gap = f(u) - m * u;
        margin = std::min(margin, gap);
        if (!(gap > 0.0)) {
            std::ostringstream msg;
            msg << f.label() << ": f(u) > m u fails at u = " << u << " (m = " << m
                << ", gap = " << gap << ")";
            throw InvalidNonlinearity(msg.str());
        }
    }
    return {m, margin};
}

/// Reads a two-column CSV with header `z,f`.
inline std::vector<std::pair<double, double>> read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open table file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError("table file is empty: " + path);
    line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
    if (line != "z,f") throw InputError("table file must start with header `z,f`: " + path);
    std::vector<std::pair<double, double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InputError(path + ":" + std::to_string(lineno) + ": expected `z,f`");
        try {
            std::size_t used = 0;
            const double z = std::stod(line.substr(0, comma), &used);
            const double fz = std::stod(line.substr(comma + 1));
            rows.emplace_back(z, fz);
        } catch (const std::logic_error&) {
            throw InputError(path + ":" + std::to_string(lineno) + ": unparsable number");
        }
    }
    return rows;
}

inline double require_param(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw InputError("nonlinearity descriptor is missing `" + key + "`");
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::logic_error&) {
        throw InputError("nonlinearity descriptor: `" + key + "=" + it->second + "` is not a number");
    }
}

/// Builds a nonlinearity from key/value pairs: `family=kpp beta=1`,
/// `family=logistic m=2 q=1 p=2`, `family=linear m=1`, `family=table file=<csv>`.
inline Nonlinearity make_nonlinearity(const std::map<std::string, std::string>& kv) {
    auto fam = kv.find("family");
    if (fam == kv.end()) throw InputError("nonlinearity descriptor is missing `family`");
    const std::string& name = fam->second;
    if (name == "kpp") return Nonlinearity::kpp(require_param(kv, "beta"));
    if (name == "logistic")
        return Nonlinearity::logistic(require_param(kv, "m"), require_param(kv, "q"),
                                      require_param(kv, "p"));
    if (name == "linear") return Nonlinearity::linear(require_param(kv, "m"));
    if (name == "table") {
        auto file = kv.find("file");
        if (file == kv.end()) throw InputError("table nonlinearity needs `file`");
        return Nonlinearity::table(read_table_csv(file->second), "table(" + file->second + ")");
    }
    throw InputError("unknown nonlinearity family `" + name + "`");
}

/// Parses a whitespace separated `key=value` descriptor.
inline Nonlinearity parse_nonlinearity(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0)
            throw InputError("nonlinearity descriptor token `" + token + "` is not key=value");
        kv[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return make_nonlinearity(kv);
}

}  // namespace kpp_lab
