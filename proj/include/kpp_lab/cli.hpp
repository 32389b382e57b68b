#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kpp_lab/ball_bvp.hpp"
#include "kpp_lab/errors.hpp"
#include "kpp_lab/fkpp_bbm.hpp"
#include "kpp_lab/io.hpp"
#include "kpp_lab/linear_comparison.hpp"
#include "kpp_lab/nonlinearity.hpp"
#include "kpp_lab/radial_shooting.hpp"

namespace kpp_lab::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kNumericalFailure = 2, kBadInput = 3 };

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;
inline constexpr const char* kDefaultOutputDir = "kpp_lab_out";
inline constexpr const char* kOutputEnv = "KPP_LAB_OUTPUT";

/// Everything a command can read. Defaults here are the documented defaults table.
struct RunConfig {
    std::string command;

    // nonlinearity
    std::string family = "kpp";
    double beta = 1.0;
    double slope = 1.0;  // m for linear / logistic
    double q = 1.0;
    double exponent = 2.0;
    std::string table_file;

    // geometry
    std::string dims = "3";    // rho accepts a comma list
    std::string slopes;        // rho: comma list of m (defaults to --m)
    double p = 0.5;
    double radius = 0.0;
    std::string radii;

    // BBM / FKPP
    std::string phi = "constant";
    double t = 1.0;
    double c = 0.7;
    double a = -1.0;
    double b = 1.0;
    double x0 = 0.0;
    std::size_t n_runs = 100000;
    double h = 0.02;
    double dt = 0.0;           // 0: h^2/2
    double pde_budget = 1e-3;

    // tolerances
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double root_tol = 1e-10;
    double r0 = 1e-4;
    double horizon = 0.0;      // 0: automatic
    double bvp_tol = 1e-8;
    std::size_t scan_points = 64;
    std::size_t grid_size = kDefaultValidationGrid;
    double strictness_eps = kDefaultStrictnessEps;
    std::string method = "closed";

    // run control
    std::string seed = "0x5EED";
    std::size_t workers = 1;
    std::string output_dir = kDefaultOutputDir;
    std::string format = "both";
};

namespace detail {

inline std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw InputError(std::string("cannot parse ") + what + " entry `" + item + "`");
        }
    }
    if (out.empty()) throw InputError(std::string(what) + " list is empty");
    return out;
}

inline std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    for (double v : parse_list(text, "--d")) {
        if (v != static_cast<int>(v) || v < 1) throw InputError("--d entries must be integers >= 1");
        dims.push_back(static_cast<int>(v));
    }
    return dims;
}

inline int single_dim(const RunConfig& cfg) {
    const auto dims = parse_dims(cfg.dims);
    if (dims.size() != 1) throw InputError("this command takes a single --d");
    return dims.front();
}

inline std::uint64_t parse_seed(const std::string& text) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(text, &used, 0);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::logic_error&) {
        throw InputError("cannot parse --seed `" + text + "`");
    }
}

inline Nonlinearity make_f(const RunConfig& cfg) {
    std::map<std::string, std::string> kv{{"family", cfg.family}};
    if (cfg.family == "kpp") kv["beta"] = io::fmt(cfg.beta);
    if (cfg.family == "logistic") {
        kv["m"] = io::fmt(cfg.slope);
        kv["q"] = io::fmt(cfg.q);
        kv["p"] = io::fmt(cfg.exponent);
    }
    if (cfg.family == "linear") kv["m"] = io::fmt(cfg.slope);
    if (cfg.family == "table") {
        if (cfg.table_file.empty()) throw InputError("--f table needs --file");
        kv["file"] = cfg.table_file;
    }
    return make_nonlinearity(kv);
}

inline ShootConfig make_shoot_config(const RunConfig& cfg) {
    ShootConfig s;
    s.rel_tol = cfg.rel_tol;
    s.abs_tol = cfg.abs_tol;
    s.root_tol = cfg.root_tol;
    s.series_cutoff = cfg.r0;
    if (cfg.horizon > 0.0) s.horizon = cfg.horizon;
    s.check();
    return s;
}

inline BvpConfig make_bvp_config(const RunConfig& cfg) {
    BvpConfig b;
    b.bvp_tol = cfg.bvp_tol;
    b.scan_points = cfg.scan_points;
    b.shoot = make_shoot_config(cfg);
    return b;
}

struct Emitter {
    const RunConfig& cfg;
    std::ostream& out;
    std::filesystem::path dir;

    [[nodiscard]] bool csv() const { return cfg.format == "csv" || cfg.format == "both"; }
    [[nodiscard]] bool json_files() const { return cfg.format == "json" || cfg.format == "both"; }

    std::string file(const std::string& name, const std::string& content) const {
        const auto path = dir / name;
        io::write_text(path, content);
        return path.string();
    }

    void finish(const nlohmann::json& doc, const std::string& json_name, const std::string& summary) const {
        if (json_files()) file(json_name, doc.dump(2) + "\n");
        if (cfg.format == "json")
            out << doc.dump(2) << "\n";
        else
            out << summary << "\n";
    }
};

inline int cmd_validate(const RunConfig& cfg, const Emitter& em) {
    const auto f = make_f(cfg);
    const auto report = validate_assumptions(f, cfg.grid_size, cfg.strictness_eps);
    const auto doc = io::to_json(report, f.label());
    if (em.csv()) {
        std::string csv = "z,diagnostic\n";
        for (const auto& [z, what] : report.violations) csv += io::fmt(z) + ",\"" + what + "\"\n";
        em.file("violations.csv", csv);
    }
    std::ostringstream line;
    line << "validate-f " << f.label() << ": " << (report.passed() ? "PASS" : "FAIL");
    if (!report.passed()) {
        line << " (" << report.violation_count << " violations)";
        for (const auto& [z, what] : report.violations) line << "\n  z=" << z << ": " << what;
    }
    em.finish(doc, "validation.json", line.str());
    return report.passed() ? kOk : kValidationFailure;
}

inline int cmd_shoot(const RunConfig& cfg, const Emitter& em) {
    const auto f = make_f(cfg);
    const int d = single_dim(cfg);
    const auto profile = shoot(f, d, cfg.p, make_shoot_config(cfg));
    auto doc = io::profile_summary(profile);
    doc["f"] = f.label();
    doc["monotone"] = monotone_check(profile);
    if (em.csv()) doc["profile_csv"] = em.file("profile.csv", io::profile_csv(profile));
    std::ostringstream line;
    line.precision(12);
    line << "shoot " << f.label() << " d=" << d << " p=" << cfg.p << ": " << to_string(profile.status);
    if (profile.first_root) line << " R=" << *profile.first_root;
    em.finish(doc, "shoot.json", line.str());
    return profile.status == ShootStatus::RootFound ? kOk : kNumericalFailure;
}

inline int cmd_rho(const RunConfig& cfg, const Emitter& em) {
    const auto dims = parse_dims(cfg.dims);
    const auto slopes = parse_list(cfg.slopes.empty() ? io::fmt(cfg.slope) : cfg.slopes, "--m");
    RhoMethod method;
    if (cfg.method == "closed")
        method = RhoMethod::ClosedForm;
    else if (cfg.method == "numeric")
        method = RhoMethod::Numeric;
    else
        throw InputError("--method must be closed or numeric");
    std::vector<ComparisonRecord> rows;
    for (double m : slopes)
        for (int d : dims) rows.push_back(rho(m, d, method));
    nlohmann::json doc;
    if (rows.size() == 1) {
        doc = io::to_json(rows.front());
    } else {
        doc = nlohmann::json::array();
        for (const auto& r : rows) doc.push_back(io::to_json(r));
    }
    if (em.csv()) em.file("rho.csv", io::rho_csv(rows));
    std::ostringstream line;
    line.precision(15);
    line << "rho:";
    for (const auto& r : rows) line << " (m=" << r.slope << ", d=" << r.dimension << ") " << r.rho;
    em.finish(doc, "rho.json", line.str());
    return kOk;
}

inline int cmd_bvp(const RunConfig& cfg, const Emitter& em) {
    const auto f = make_f(cfg);
    const int d = single_dim(cfg);
    const auto sol = dirichlet_solution(f, d, cfg.radius, make_bvp_config(cfg));
    auto doc = io::to_json(sol);
    doc["f"] = f.label();
    doc["d"] = d;
    if (em.csv()) doc["profile_csv"] = em.file("bvp_profile.csv", io::profile_csv(sol.profile));
    std::ostringstream line;
    line.precision(15);
    line << "bvp " << f.label() << " d=" << d << " R=" << cfg.radius << ": p*=" << sol.p_star
         << " residual=" << sol.residual;
    em.finish(doc, "bvp.json", line.str());
    return kOk;
}

inline int cmd_sweep(const RunConfig& cfg, const Emitter& em) {
    const auto f = make_f(cfg);
    const int d = single_dim(cfg);
    if (cfg.radii.empty()) throw InputError("sweep needs --radii");
    const auto radii = parse_list(cfg.radii, "--radii");
    const auto sweep = minimal_solution_sweep(f, d, radii, make_bvp_config(cfg), cfg.workers);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& s : sweep) rows.push_back(io::to_json(s));
    const bool increasing = center_values_strictly_increasing(sweep);
    nlohmann::json doc{{"f", f.label()}, {"d", d}, {"rows", rows}, {"strictly_increasing", increasing}};
    if (em.csv()) em.file("sweep.csv", io::sweep_csv(sweep));
    std::ostringstream line;
    line.precision(15);
    line << "sweep " << f.label() << " d=" << d << ":";
    for (const auto& s : sweep) line << " p*(" << s.radius << ")=" << s.p_star;
    line << (increasing ? " [strictly increasing]" : " [NOT increasing]");
    em.finish(doc, "sweep.json", line.str());
    return kOk;
}

inline int cmd_certify(const RunConfig& cfg, const Emitter& em) {
    const auto f = make_f(cfg);
    const int d = single_dim(cfg);
    const auto cert = nonexistence_certificate(f, d, cfg.p, make_shoot_config(cfg));
    const std::string profile_path = em.file("certificate_profile.csv", io::profile_csv(cert.profile));
    const auto doc = io::to_json(cert, profile_path);
    std::ostringstream line;
    line.precision(12);
    line << "certify " << f.label() << " d=" << d << " p=" << cfg.p << ": R=" << cert.radius
         << " <= rho=" << cert.rho_bound << (cert.bound_holds ? "" : " [BOUND VIOLATED]");
    em.finish(doc, "certificate.json", line.str());
    return cert.bound_holds ? kOk : kNumericalFailure;
}

inline int cmd_bbm_check(const RunConfig& cfg, const Emitter& em) {
    ConsistencyParams params;
    if (cfg.phi == "constant")
        params.phi = TestFunction::constant(cfg.c);
    else if (cfg.phi == "indicator")
        params.phi = TestFunction::indicator(cfg.c, cfg.a, cfg.b);
    else
        throw InputError("--phi must be constant or indicator");
    if (!(cfg.beta > 0.0)) throw InputError("--beta must be positive");
    params.beta = cfg.beta;
    params.t = cfg.t;
    params.x0 = cfg.x0;
    params.n_runs = cfg.n_runs;
    params.master_seed = parse_seed(cfg.seed);
    params.h = cfg.h;
    if (cfg.dt > 0.0) params.dt = cfg.dt;
    params.pde_error_budget = cfg.pde_budget;
    params.workers = cfg.workers;
    const auto report = consistency_check(params);
    auto doc = io::to_json(report, params);
    if (em.csv() && report.field) em.file("fkpp_field.csv", io::field_csv(*report.field, 0));
    std::ostringstream line;
    line.precision(10);
    line << "bbm-check " << params.phi.label() << " beta=" << params.beta << " t=" << params.t
         << ": mc=" << report.mc.mean << " +- " << report.mc.stderr_ << ", 1-u=" << 1.0 - report.pde_value;
    if (report.closed_form) line << ", closed=" << *report.closed_form;
    line << " -> " << (report.pass ? "Pass" : "Fail");
    em.finish(doc, "bbm_check.json", line.str());
    return report.pass ? kOk : kNumericalFailure;
}

inline void add_options(CLI::App& app, RunConfig& cfg) {
    app.add_option("--f", cfg.family, "Nonlinearity family")
        ->check(CLI::IsMember({"kpp", "logistic", "linear", "table"}));
    app.add_option("--beta", cfg.beta, "KPP coefficient / branching rate");
    app.add_option("--m", cfg.slopes, "Slope m (linear, logistic); rho accepts a comma list");
    app.add_option("--q", cfg.q, "Logistic coefficient q");
    app.add_option("--exponent", cfg.exponent, "Logistic exponent (> 1)");
    app.add_option("--file", cfg.table_file, "Two-column CSV (header z,f) for --f table");
    app.add_option("--d", cfg.dims, "Dimension (rho accepts a comma list)");
    app.add_option("--p", cfg.p, "Center value in (0,1)");
    app.add_option("--R", cfg.radius, "Ball radius");
    app.add_option("--radii", cfg.radii, "Comma separated increasing radii");
    app.add_option("--phi", cfg.phi, "Test function: constant or indicator");
    app.add_option("--t", cfg.t, "Time horizon");
    app.add_option("--c", cfg.c, "Test function level");
    app.add_option("--a", cfg.a, "Indicator left edge");
    app.add_option("--b", cfg.b, "Indicator right edge");
    app.add_option("--x0", cfg.x0, "Starting point of the first particle");
    app.add_option("--n-runs", cfg.n_runs, "Monte Carlo runs");
    app.add_option("--h", cfg.h, "PDE mesh width");
    app.add_option("--dt", cfg.dt, "PDE time step (default h^2/2)");
    app.add_option("--pde-budget", cfg.pde_budget, "PDE error budget in the consistency check");
    app.add_option("--rel-tol", cfg.rel_tol);
    app.add_option("--abs-tol", cfg.abs_tol);
    app.add_option("--root-tol", cfg.root_tol);
    app.add_option("--r0", cfg.r0, "Series cutoff radius");
    app.add_option("--horizon", cfg.horizon, "Shooting horizon (default automatic)");
    app.add_option("--bvp-tol", cfg.bvp_tol);
    app.add_option("--scan-points", cfg.scan_points);
    app.add_option("--grid-size", cfg.grid_size);
    app.add_option("--strictness-eps", cfg.strictness_eps);
    app.add_option("--method", cfg.method, "rho method: closed or numeric");
    app.add_option("--seed", cfg.seed, "Master seed (decimal or 0x hex)");
    app.add_option("--workers", cfg.workers, "Worker threads");
    app.add_option("--output-dir", cfg.output_dir, "Directory for CSV/JSON artifacts (env KPP_LAB_OUTPUT)");
    app.add_option("--format", cfg.format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
}

}  // namespace detail

/// Runs the command line `args` (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    RunConfig cfg;
    CLI::App app{"Numerical laboratory for KPP-type equations Laplacian(u) + f(u) = 0", "kpp_lab"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_config("--config", "", "key=value file overriding the defaults");
    app.require_subcommand(1);
    app.fallthrough();
    detail::add_options(app, cfg);
    for (const char* name : {"validate-f", "shoot", "rho", "bvp", "sweep", "certify", "bbm-check"})
        app.add_subcommand(name)->fallthrough();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    // Precedence: flag > environment > config file > default.
    const bool output_flag = std::any_of(args.begin() + 1, args.end(), [](const std::string& a) {
        return a == "--output-dir" || a.rfind("--output-dir=", 0) == 0;
    });
    if (const char* env = std::getenv(kOutputEnv); env && *env && !output_flag) cfg.output_dir = env;
    if (!cfg.slopes.empty() && cfg.command != "rho") {
        try {
            cfg.slope = std::stod(cfg.slopes);
        } catch (const std::logic_error&) {
            err << "error: cannot parse --m\n";
            return kBadInput;
        }
    }

    try {
        detail::Emitter em{cfg, out, cfg.output_dir};
        if (cfg.workers < 1) throw InputError("--workers must be >= 1");
        if (cfg.command == "validate-f") return detail::cmd_validate(cfg, em);
        if (cfg.command == "shoot") return detail::cmd_shoot(cfg, em);
        if (cfg.command == "rho") return detail::cmd_rho(cfg, em);
        if (cfg.command == "bvp") return detail::cmd_bvp(cfg, em);
        if (cfg.command == "sweep") return detail::cmd_sweep(cfg, em);
        if (cfg.command == "certify") return detail::cmd_certify(cfg, em);
        if (cfg.command == "bbm-check") return detail::cmd_bbm_check(cfg, em);
        throw InputError("unknown command " + cfg.command);
    } catch (const InvalidNonlinearity& e) {
        err << "InvalidNonlinearity: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const NoPositiveSolution& e) {
        err << e.what() << "\n";
        return kNumericalFailure;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const InputError& e) {
        err << "bad input: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }
}

inline int run(int argc, char** argv) {
    return run(std::vector<std::string>(argv, argv + argc));
}

}  // namespace kpp_lab::cli
