// gheat: command-line front end for the G-heat explicit solutions, the PDE
// solver and the capacity estimates. Tables go to stdout (or --output) as CSV
// or JSON; exit codes are 0 ok, 2 usage, 3 numeric failure, 4 out of range.

#include "gheat/capacity.hpp"
#include "gheat/critical_points.hpp"
#include "gheat/io.hpp"
#include "gheat/pde_solver.hpp"
#include "gheat/solutions.hpp"
#include "gheat/special_functions.hpp"
#include "gheat/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifndef GHEAT_VERSION
#define GHEAT_VERSION "0.0.0"
#endif

namespace {

using namespace gheat;

enum Exit : int { kOk = 0, kUsage = 2, kNumeric = 3, kRange = 4 };

struct RunConfig {
    double abs_tol = 1e-12;
    double root_tol = kDefaultRootTol;
    double dx = 0.01;
    double cfl = 0.4;
    double domain_factor = 6.0;
    double coarsen_ratio = 32.0;
    std::string format = "csv";
    std::string output;
    std::uint64_t seed = 20240601;

    QuadratureConfig quadrature() const {
        QuadratureConfig q;
        q.abs_tol = abs_tol;
        return q;
    }

    GridSpec grid() const {
        GridSpec g;
        g.dx = dx;
        g.cfl = cfl;
        g.domain_factor = domain_factor;
        g.multiscale = Multiscale{coarsen_ratio, 0.0, 0.0};
        return g;
    }

    void validate() const {
        if (!(abs_tol > 0.0) || !(root_tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tolerances must be positive");
        if (!(dx > 0.0)) throw Error(ErrorCode::InvalidParameter, "dx must be positive");
        if (!(domain_factor > 0.0)) throw Error(ErrorCode::InvalidParameter, "domain factor must be positive");
    }
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::vector<double> range(const std::vector<double>& spec, const char* what) {
    if (spec.size() != 3 || !(spec[2] > 0.0) || !(spec[1] >= spec[0])) {
        throw Error(ErrorCode::InvalidParameter, std::string(what) + " range needs START STOP STEP with STOP >= START, STEP > 0");
    }
    const auto n = static_cast<long>(std::floor((spec[1] - spec[0]) / spec[2] + 1e-9)) + 1;
    if (n > 1'000'000) throw Error(ErrorCode::InvalidParameter, std::string(what) + " range is too long");
    std::vector<double> out(n);
    for (long i = 0; i < n; ++i) out[i] = spec[0] + static_cast<double>(i) * spec[2];
    return out;
}

// Writes one result in the configured format with the metadata header.
class Emitter {
public:
    Emitter(const RunConfig& cfg, std::string command, std::string config_text)
        : cfg_(cfg), command_(std::move(command)) {
        char hash[17];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(config_text)));
        hash_ = hash;
    }

    void emit(const Table& table, const nlohmann::json& extra = {}, const std::vector<std::string>& notes = {}) {
        std::ostringstream os;
        if (cfg_.format == "json") {
            nlohmann::json doc;
            doc["meta"] = {{"tool", "gheat"}, {"version", GHEAT_VERSION}, {"command", command_}, {"config_hash", hash_}};
            if (!extra.is_null()) {
                for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
            }
            doc["columns"] = table.columns;
            doc["rows"] = to_json(table);
            os << doc.dump(2) << '\n';
        } else {
            std::vector<std::string> comments{"gheat " + std::string(GHEAT_VERSION) + " command=" + command_ +
                                              " config_hash=" + hash_};
            comments.insert(comments.end(), notes.begin(), notes.end());
            write_csv(os, table, comments);
        }
        write(os.str());
    }

private:
    void write(const std::string& text) const {
        std::filesystem::path path = cfg_.output;
        const char* dir = std::getenv("GHEAT_OUTPUT_DIR");
        if (path.empty() && dir && *dir) path = std::filesystem::path(command_ + "." + cfg_.format);
        if (path.empty()) {
            std::cout << text;
            std::cout.flush();
            return;
        }
        if (path.is_relative() && dir && *dir) path = std::filesystem::path(dir) / path;
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error(ErrorCode::InvalidParameter, "cannot open output file " + path.string());
        out << text;
    }

    const RunConfig& cfg_;
    std::string command_;
    std::string hash_;
};

std::string note(const std::string& key, double v) { return key + "=" + format_double(v); }

// ---- phi -------------------------------------------------------------------

struct PhiArgs {
    double lambda = 0.25;
    std::vector<double> xs;
    std::vector<double> x_range;
    int random = 0;
    double random_lo = -5.0;
    double random_hi = 5.0;
};

void cmd_phi(const RunConfig& cfg, const PhiArgs& a, Emitter& out) {
    const LambdaParam lam(a.lambda);
    std::vector<double> xs = a.xs;
    if (!a.x_range.empty()) {
        const auto r = range(a.x_range, "x");
        xs.insert(xs.end(), r.begin(), r.end());
    }
    if (a.random > 0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> dist(a.random_lo, a.random_hi);
        for (int i = 0; i < a.random; ++i) xs.push_back(dist(rng));
    }
    if (xs.empty()) xs.push_back(0.0);

    const auto evals = phi_eval_batch(lam, xs, Exec::Parallel, cfg.quadrature());
    Table t{{"x", "phi", "d1", "d2", "ode_residual", "err"}, {}};
    for (const auto& e : evals) t.add({e.x, e.phi, e.d1, e.d2, e.ode_residual(lam), e.err});
    out.emit(t, {{"lambda", a.lambda}}, {note("lambda", a.lambda)});
}

// ---- constants -------------------------------------------------------------

struct ConstantsArgs {
    std::vector<double> lambdas;
    std::vector<double> lambda_range;
    std::vector<double> sigmas;
    std::vector<double> sigma_range;
};

void cmd_constants(const RunConfig& cfg, const ConstantsArgs& a, Emitter& out) {
    std::vector<double> lambdas = a.lambdas;
    std::vector<double> sigmas = a.sigmas;
    if (!a.lambda_range.empty()) lambdas = range(a.lambda_range, "lambda");
    if (!a.sigma_range.empty()) sigmas = range(a.sigma_range, "sigma");
    if (lambdas.empty() == sigmas.empty()) {
        throw Error(ErrorCode::InvalidParameter, "give either a lambda grid or a sigma grid");
    }
    const QuadratureConfig q = cfg.quadrature();

    if (!lambdas.empty()) {
        Table t{{"lambda", "x1", "x2", "z", "sigma_lambda", "in_supported_range"}, {}};
        for (double l : lambdas) {
            const CriticalPoints cp = critical_points(LambdaParam(l), cfg.root_tol, q);
            t.add({l, cp.x1, cp.x2, cp.z, cp.sigma_lambda, cp.in_supported_range ? 1.0 : 0.0});
        }
        out.emit(t);
        return;
    }
    Table t{{"sigma", "lambda_sigma", "two_lambda_sigma", "half_sigma_squared"}, {}};
    for (double s : sigmas) {
        const double l = lambda_of_sigma(SigmaParam(s), cfg.root_tol, q);
        t.add({s, l, 2.0 * l, 0.5 * s * s});
    }
    out.emit(t);
}

// ---- solution / pde-verify ----------------------------------------------------

PiecewiseSolution resolve_solution(const RunConfig& cfg, double sigma, const std::string& lambda) {
    const SigmaParam s(sigma);
    if (lambda == "auto") return build_P(s, cfg.root_tol, cfg.quadrature());
    double l = 0.0;
    try {
        std::size_t used = 0;
        l = std::stod(lambda, &used);
        if (used != lambda.size()) throw std::invalid_argument(lambda);
    } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidParameter, "--lambda must be a number or 'auto', got '" + lambda + "'");
    }
    return build_H(LambdaParam(l), s, cfg.root_tol, cfg.quadrature());
}

struct SolutionArgs {
    double sigma = 0.5;
    std::string lambda = "auto";
    std::vector<double> x_range{-5.0, 5.0, 0.5};
};

void cmd_solution(const RunConfig& cfg, const SolutionArgs& a, Emitter& out) {
    const PiecewiseSolution sol = resolve_solution(cfg, a.sigma, a.lambda);
    Table t{{"x", "H", "dH", "d2H", "ode_residual"}, {}};
    for (double x : range(a.x_range, "x")) {
        const HEval e = eval_H_all(sol, x);
        t.add({x, e.h, e.d1, e.d2, ode_residual(sol, x)});
    }
    out.emit(t, {{"solution", to_json(sol)}},
             {note("lambda", sol.lambda.value()), note("sigma", sol.sigma.value()), note("mu1", sol.mu1),
              note("mu2", sol.mu2), note("breakpoint", sol.breakpoint)});
}

struct PdeVerifyArgs {
    double sigma = 0.5;
    std::string lambda = "auto";
    double t = 1.0;
    double window = 4.0;
};

void cmd_pde_verify(const RunConfig& cfg, const PdeVerifyArgs& a, Emitter& out) {
    if (!(a.t > 0.0)) throw Error(ErrorCode::InvalidParameter, "--t must be positive");
    const PiecewiseSolution sol = resolve_solution(cfg, a.sigma, a.lambda);
    GridSpec base;
    base.cfl = cfg.cfl;
    base.domain_factor = cfg.domain_factor;
    const ConvergenceStudy c = self_similar_convergence(sol, a.t, cfg.dx, a.window, base);
    const double h0 = c.coarse.h0;
    Table t{{"sigma", "lambda", "t", "dx", "H0", "max_error", "max_error_over_H0", "max_error_half_dx", "order"}, {}};
    t.add({sol.sigma.value(), sol.lambda.value(), a.t, c.coarse.dx, h0, c.coarse.max_error, c.coarse.max_error / h0,
           c.fine.max_error, c.order});
    out.emit(t, {{"solution", to_json(sol)}});
}

// ---- capacity / order ---------------------------------------------------------

struct CapacityArgs {
    double sigma = 0.5;
    std::vector<double> eps{0.1};
};

void cmd_capacity(const RunConfig& cfg, const CapacityArgs& a, Emitter& out) {
    const SigmaParam s(a.sigma);
    std::vector<CapacityReport> reports;
    for (double e : a.eps) reports.push_back(capacity_report(s, e, cfg.grid()));
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& r : reports) reps.push_back(to_json(r));
    out.emit(capacity_table(reports), {{"reports", reps}});
}

struct OrderArgs {
    double sigma = 0.5;
    std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    double t = 1.0;
};

void cmd_order(const RunConfig& cfg, const OrderArgs& a, Emitter& out) {
    const OrderFit f = order_fit(SigmaParam(a.sigma), a.eps, a.t, cfg.grid());
    Table t{{"epsilon", "log_epsilon", "estimate", "log_estimate"}, {}};
    for (std::size_t i = 0; i < f.epsilons.size(); ++i) {
        t.add({f.epsilons[i], std::log(f.epsilons[i]), f.estimates[i], std::log(f.estimates[i])});
    }
    out.emit(t, {{"fit", to_json(f)}},
             {note("sigma", f.sigma), note("estimated_exponent", f.estimated_exponent),
              note("target_exponent", f.target_exponent), note("r2", f.r2)});
}

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidParameter:
    case ErrorCode::InvalidGrid:
    case ErrorCode::DegenerateInterval: return kUsage;
    case ErrorCode::RangeError: return kRange;
    default: return kNumeric;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explicit solutions, PDE checks and capacity estimates for the 1-D G-heat equation", "gheat"};
    app.set_version_flag("--version", GHEAT_VERSION);
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    app.add_option("--abs-tol", cfg.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
    app.add_option("--root-tol", cfg.root_tol, "Root tolerance in x")->capture_default_str();
    app.add_option("--dx", cfg.dx, "Grid spacing")->capture_default_str();
    app.add_option("--cfl", cfg.cfl, "dt / dx^2, at most 0.5")->capture_default_str();
    app.add_option("--domain-factor", cfg.domain_factor, "Domain half-width in units of sqrt(1 + t)")
        ->capture_default_str();
    app.add_option("--coarsen-ratio", cfg.coarsen_ratio, "Multiscale coarsening ratio for capacities")
        ->capture_default_str();
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--output,-o", cfg.output, "Output file (relative paths resolve against GHEAT_OUTPUT_DIR)");
    app.add_option("--seed", cfg.seed, "Seed for sampled abscissae")->capture_default_str();

    PhiArgs phi_args;
    auto* phi_cmd = app.add_subcommand("phi", "phi, phi', phi'' and the ODE residual");
    phi_cmd->add_option("--lambda", phi_args.lambda, "lambda in (0, 1/2)")->required();
    phi_cmd->add_option("--x", phi_args.xs, "Abscissae");
    phi_cmd->add_option("--x-range", phi_args.x_range, "START STOP STEP")->expected(3);
    phi_cmd->add_option("--random", phi_args.random, "Number of seeded random abscissae");
    phi_cmd->add_option("--random-lo", phi_args.random_lo)->capture_default_str();
    phi_cmd->add_option("--random-hi", phi_args.random_hi)->capture_default_str();

    ConstantsArgs const_args;
    auto* const_cmd = app.add_subcommand("constants", "x1, x2, z, sigma_lambda over lambda, or lambda_sigma over sigma");
    const_cmd->add_option("--lambda", const_args.lambdas, "lambda values");
    const_cmd->add_option("--lambda-range", const_args.lambda_range, "START STOP STEP")->expected(3);
    const_cmd->add_option("--sigma", const_args.sigmas, "sigma values");
    const_cmd->add_option("--sigma-range", const_args.sigma_range, "START STOP STEP")->expected(3);

    SolutionArgs sol_args;
    auto* sol_cmd = app.add_subcommand("solution", "Tabulate H_{lambda,sigma}");
    sol_cmd->add_option("--sigma", sol_args.sigma)->required();
    sol_cmd->add_option("--lambda", sol_args.lambda, "lambda or 'auto' for lambda_sigma")->capture_default_str();
    sol_cmd->add_option("--x-range", sol_args.x_range, "START STOP STEP")->expected(3)->capture_default_str();

    PdeVerifyArgs pde_args;
    auto* pde_cmd = app.add_subcommand("pde-verify", "Finite differences against the self-similar closed form");
    pde_cmd->add_option("--sigma", pde_args.sigma)->required();
    pde_cmd->add_option("--lambda", pde_args.lambda, "lambda or 'auto'")->capture_default_str();
    pde_cmd->add_option("--t", pde_args.t)->capture_default_str();
    pde_cmd->add_option("--window", pde_args.window, "Error window |x| <= window")->capture_default_str();

    CapacityArgs cap_args;
    auto* cap_cmd = app.add_subcommand("capacity", "Capacity sandwich and closed-form bounds of [-eps, eps]");
    cap_cmd->add_option("--sigma", cap_args.sigma)->required();
    cap_cmd->add_option("--eps", cap_args.eps)->capture_default_str();

    OrderArgs order_args;
    auto* order_cmd = app.add_subcommand("order", "Log-log fit of the capacity order");
    order_cmd->add_option("--sigma", order_args.sigma)->required();
    order_cmd->add_option("--eps", order_args.eps)->capture_default_str();
    order_cmd->add_option("--t", order_args.t)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        cfg.validate();
        Emitter out(cfg, sub->get_name(), app.config_to_str(true, false));
        if (sub == phi_cmd) cmd_phi(cfg, phi_args, out);
        else if (sub == const_cmd) cmd_constants(cfg, const_args, out);
        else if (sub == sol_cmd) cmd_solution(cfg, sol_args, out);
        else if (sub == pde_cmd) cmd_pde_verify(cfg, pde_args, out);
        else if (sub == cap_cmd) cmd_capacity(cfg, cap_args, out);
        else if (sub == order_cmd) cmd_order(cfg, order_args, out);
    } catch (const Error& e) {
        std::cerr << "gheat: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "gheat: " << e.what() << '\n';
        return kNumeric;
    }
    return kOk;
}
