#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kpp_lab/ball_bvp.hpp"
#include "kpp_lab/errors.hpp"
#include "kpp_lab/fkpp_bbm.hpp"
#include "kpp_lab/linear_comparison.hpp"
#include "kpp_lab/nonlinearity.hpp"
#include "kpp_lab/radial_shooting.hpp"

namespace kpp_lab::io {

using nlohmann::json;

/// 17 significant digits: round-trips every double and keeps output bytes stable.
inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

inline std::string profile_csv(const RadialProfile& profile) {
    std::string s = "r,V,dV\n";
    for (std::size_t i = 0; i < profile.grid.size(); ++i)
        s += fmt(profile.grid[i]) + ',' + fmt(profile.values[i]) + ',' + fmt(profile.derivatives[i]) + '\n';
    return s;
}

inline json profile_summary(const RadialProfile& profile) {
    return json{{"d", profile.dimension},
                {"p", profile.center_value},
                {"R", profile.first_root ? json(*profile.first_root) : json(nullptr)},
                {"status", std::string(to_string(profile.status))},
                {"tol", profile.root_tol}};
}

inline json to_json(const ValidationReport& r, const std::string& label) {
    json violations = json::array();
    for (const auto& [z, what] : r.violations) violations.push_back({{"z", z}, {"diagnostic", what}});
    return json{{"f", label},
                {"passed", r.passed()},
                {"positive_interior", r.positive_interior},
                {"ratio_strictly_decreasing", r.ratio_strictly_decreasing},
                {"liminf_positive", r.liminf_positive},
                {"grid_size", r.grid_size},
                {"strictness_margin", r.strictness_margin},
                {"violation_count", r.violation_count},
                {"violations", violations}};
}

inline json to_json(const ComparisonRecord& c) {
    return json{{"m", c.slope}, {"d", c.dimension}, {"rho", c.rho}, {"method", std::string(to_string(c.method))}};
}

inline std::string rho_csv(const std::vector<ComparisonRecord>& rows) {
    std::string s = "m,d,rho,method\n";
    for (const auto& c : rows)
        s += fmt(c.slope) + ',' + std::to_string(c.dimension) + ',' + fmt(c.rho) + ',' +
             std::string(to_string(c.method)) + '\n';
    return s;
}

inline json to_json(const BallSolution& s) {
    return json{{"R", s.radius},
                {"p_star", s.p_star},
                {"iterations", s.bracketing_iterations},
                {"residual", s.residual}};
}

inline std::string sweep_csv(const std::vector<BallSolution>& sweep) {
    std::string s = "R,p_star,iterations,residual\n";
    for (const auto& b : sweep)
        s += fmt(b.radius) + ',' + fmt(b.p_star) + ',' + std::to_string(b.bracketing_iterations) +
             ',' + fmt(b.residual) + '\n';
    return s;
}

inline json to_json(const NonexistenceCertificate& c, const std::string& profile_path) {
    return json{{"f", c.f_label},
                {"d", c.dimension},
                {"p", c.p},
                {"R", c.radius},
                {"comparison_slope", c.comparison_slope},
                {"rho_bound", c.rho_bound},
                {"bound_holds", c.bound_holds},
                {"statement", c.statement},
                {"profile_csv", profile_path}};
}

inline json to_json(const ConsistencyReport& r, const ConsistencyParams& p) {
    return json{{"phi", p.phi.label()},
                {"beta", p.beta},
                {"t", p.t},
                {"x0", p.x0},
                {"mc_mean", r.mc.mean},
                {"mc_stderr", r.mc.stderr_},
                {"n_runs", r.mc.n_runs},
                {"pde_value", r.pde_value},
                {"closed_form", r.closed_form ? json(*r.closed_form) : json(nullptr)},
                {"verdict", r.pass ? "Pass" : "Fail"}};
}

inline std::string field_csv(const FkppField& field, std::size_t k) {
    std::string s = "x,u\n";
    for (std::size_t i = 0; i < field.x.size(); ++i)
        s += fmt(field.x[i]) + ',' + fmt(field.u[k][i]) + '\n';
    return s;
}

}  // namespace kpp_lab::io
