#include "condopt/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <memory>

#include <CLI11.hpp>

#include "condopt/io.hpp"
#include "condopt/optimizer.hpp"
#include "condopt/solver.hpp"

namespace condopt {

namespace {

std::unique_ptr<CLI::App> build_app(RunConfig& cfg)
{
    auto app = std::make_unique<CLI::App>(
        "condopt - SPH heat-conduction solver and conductivity-distribution optimizer");
    app->fallthrough();
    app->set_config("--config", "", "Flat key=value configuration file");

    auto opt = [](CLI::Option* o, const char* env) { return o->envname(env); };

    opt(app->add_option("--problem", cfg.problem,
                        "Built-in problem id (1..7) or path to a problem-spec file"),
        "CONDOPT_PROBLEM")
        ->required();
    opt(app->add_option("--resolution", cfg.resolution, "Inner particles per side"),
        "CONDOPT_RESOLUTION")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--dummy-layers", cfg.dummy_layers, "Dummy particle layers per edge"),
        "CONDOPT_DUMMY_LAYERS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--h-ratio", cfg.h_ratio, "Smoothing length over lattice spacing"),
        "CONDOPT_H_RATIO")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--dt-multiplier", cfg.dt_multiplier,
                        "Implicit step as multiple of the diffusive step"),
        "CONDOPT_DT_MULTIPLIER")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--kernel", cfg.kernel, "Kernel family (wendland_c2|cubic_spline)"),
        "CONDOPT_KERNEL")
        ->capture_default_str();

    opt(app->add_option("--beta0", cfg.beta0, "Initial target strength [K]"), "CONDOPT_BETA0")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    opt(app->add_option("--mu0", cfg.mu0, "Initial regularization coefficient"), "CONDOPT_MU0")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--tol-emax", cfg.tol_e_max, "Termination residual threshold [K/s]"),
        "CONDOPT_TOL_EMAX")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--tol-dtavg", cfg.tol_avg_dT,
                        "Termination per-loop average-temperature change [K]"),
        "CONDOPT_TOL_DTAVG")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--tol-dk", cfg.tol_dk, "Termination conductivity-change threshold"),
        "CONDOPT_TOL_DK")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--loop-cap", cfg.loop_cap, "Maximum optimization loops"),
        "CONDOPT_LOOP_CAP")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--relax-cap", cfg.relax_cap, "Maximum PDE sweeps per loop"),
        "CONDOPT_RELAX_CAP")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    opt(app->add_option("--steady-tol", cfg.steady_tol, "Steady-solve residual tolerance [K/s]"),
        "CONDOPT_STEADY_TOL")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--steady-max-steps", cfg.steady_max_steps, "Steady-solve sweep cap"),
        "CONDOPT_STEADY_MAX_STEPS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    opt(app->add_option("--seed", cfg.seed, "Seed for the initial temperature field"),
        "CONDOPT_SEED")
        ->capture_default_str();
    opt(app->add_option("--threads", cfg.threads, "Worker threads (1 = deterministic mode)"),
        "CONDOPT_THREADS")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    opt(app->add_option("--output-dir", cfg.output_dir, "Directory for emitted files"),
        "CONDOPT_OUTPUT_DIR")
        ->capture_default_str();

    opt(app->add_flag("--constant-init", cfg.constant_init,
                      "Symmetric constant initial temperature instead of seeded random"),
        "CONDOPT_CONSTANT_INIT");
    opt(app->add_flag("--presolve", cfg.presolve,
                      "Steady-solve the initial field before optimizing"),
        "CONDOPT_PRESOLVE");
    opt(app->add_flag("--literal-recovery-sign", cfg.literal_recovery_sign,
                      "Drive the shifted residual toward -e* instead of +e*"),
        "CONDOPT_LITERAL_RECOVERY_SIGN");
    opt(app->add_flag("--reg-shared-step", cfg.reg_shares_pde_step,
                      "Regularization pseudo-step equals the PDE step"),
        "CONDOPT_REG_SHARED_STEP");
    opt(app->add_flag("--neumann-zero-inner-normal", cfg.neumann_zero_inner_normal,
                      "Use n_i = 0 in the flux-to-volume sum"),
        "CONDOPT_NEUMANN_ZERO_INNER_NORMAL");

    app->add_subcommand("solve", "Steady heat-conduction solve at uniform budget conductivity");
    app->add_subcommand("optimize", "Target-driven conductivity-distribution optimization");
    app->require_subcommand(1);
    return app;
}

ProblemSpec resolve_problem(const RunConfig& cfg)
{
    ProblemSpec spec;
    const bool builtin = !cfg.problem.empty() &&
                         cfg.problem.find_first_not_of("0123456789") == std::string::npos;
    if (builtin) {
        spec = builtin_problem(std::stoi(cfg.problem));
    } else {
        spec = load_problem_file(cfg.problem);
    }
    spec.resolution = cfg.resolution;
    spec.dummy_layers = cfg.dummy_layers;
    spec.validate();
    return spec;
}

DomainOptions domain_options(const RunConfig& cfg)
{
    DomainOptions opts;
    opts.h_ratio = cfg.h_ratio;
    opts.kernel_family = kernel_family_from_name(cfg.kernel);
    opts.neumann_mirror_normal = !cfg.neumann_zero_inner_normal;
    return opts;
}

OptimizerOptions optimizer_options(const RunConfig& cfg)
{
    OptimizerOptions opts;
    opts.beta0 = cfg.beta0;
    opts.mu0 = cfg.mu0;
    opts.tol_e_max = cfg.tol_e_max;
    opts.tol_avg_dT = cfg.tol_avg_dT;
    opts.tol_dk = cfg.tol_dk;
    opts.loop_cap = cfg.loop_cap;
    opts.relax_cap = cfg.relax_cap;
    opts.seed = cfg.seed;
    opts.constant_init = cfg.constant_init;
    opts.presolve = cfg.presolve;
    opts.literal_recovery_sign = cfg.literal_recovery_sign;
    opts.reg_shares_pde_step = cfg.reg_shares_pde_step;
    opts.policy.dt_multiplier = cfg.dt_multiplier;
    opts.steady_tolerance = cfg.steady_tol;
    opts.steady_max_steps = cfg.steady_max_steps;
    return opts;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Reference steady solve at uniform budget conductivity; shared by both
/// commands (the optimizer reports its original average from here).
SteadySolveResult reference_steady(Domain& domain, const RunConfig& cfg, const Sweeper& sweeper)
{
    ParticleSystem& ps = domain.ps;
    std::fill(ps.conductivity.begin(), ps.conductivity.end(), domain.spec.k0);
    const Real base = domain.spec.min_sink_temperature();
    std::fill(ps.temperature.begin(), ps.temperature.end(), base);
    refresh_boundary_temperatures(ps);

    SteadySolveOptions options;
    options.policy.dt_multiplier = cfg.dt_multiplier;
    options.tolerance = cfg.steady_tol;
    options.max_steps = cfg.steady_max_steps;
    return solve_steady(domain, options, sweeper);
}

int run_solve(const RunConfig& cfg)
{
    Domain domain = make_domain(resolve_problem(cfg), domain_options(cfg));
    const Sweeper sweeper =
        cfg.threads > 1 ? Sweeper(domain, cfg.threads) : Sweeper{};

    const auto start = std::chrono::steady_clock::now();
    const SteadySolveResult result = reference_steady(domain, cfg, sweeper);
    const double elapsed = seconds_since(start);
    const Real avg = domain.ps.average_temperature();

    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    emit_fields(domain.ps, (dir / "fields.csv").string());
    emit_solve_summary(avg, result, elapsed, (dir / "summary.txt").string());

    std::printf("steady avg_T = %.4f K after %ld sweeps (%s, %.1f s)\n", avg, result.steps,
                result.converged ? "converged" : "NOT converged", elapsed);
    return result.converged ? 0 : 2;
}

int run_optimize(const RunConfig& cfg)
{
    const ProblemSpec spec = resolve_problem(cfg);
    const DomainOptions dom_opts = domain_options(cfg);

    RunTimings timings;
    {
        Domain reference = make_domain(spec, dom_opts);
        const Sweeper sweeper =
            cfg.threads > 1 ? Sweeper(reference, cfg.threads) : Sweeper{};
        const auto start = std::chrono::steady_clock::now();
        reference_steady(reference, cfg, sweeper);
        timings.steady_seconds = seconds_since(start);
        timings.reference_avg_T = reference.ps.average_temperature();
    }

    Domain domain = make_domain(spec, dom_opts);
    const Sweeper sweeper = cfg.threads > 1 ? Sweeper(domain, cfg.threads) : Sweeper{};
    const auto start = std::chrono::steady_clock::now();
    const OptimizationReport report = run_optimization(domain, optimizer_options(cfg), sweeper);
    timings.optimize_seconds = seconds_since(start);

    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    emit_fields(domain.ps, (dir / "fields.csv").string());
    emit_history(report, (dir / "history.csv").string());
    emit_summary(report, timings, (dir / "summary.txt").string());

    const Real reduction = (timings.reference_avg_T - report.final_avg_T) /
                           timings.reference_avg_T * 100.0;
    std::printf("optimized avg_T = %.4f K (original %.4f K, reduced %.2f%%) in %zu loops, "
                "%ld sweeps (%s)\n",
                report.final_avg_T, timings.reference_avg_T, reduction, report.history.size(),
                report.total_pde_steps, report.converged ? "converged" : "loop cap");
    return report.converged ? 0 : 2;
}

} // namespace

RunConfig parse_config(int argc, const char* const* argv)
{
    RunConfig cfg;
    auto app = build_app(cfg);
    try {
        app->parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app->help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    cfg.command = app->got_subcommand("optimize") ? RunConfig::Command::optimize
                                                  : RunConfig::Command::solve;
    return cfg;
}

int run_cli(int argc, const char* const* argv)
{
    RunConfig cfg;
    try {
        cfg = parse_config(argc, argv);
    } catch (const HelpRequested& help) {
        std::fputs(help.text.c_str(), stdout);
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    }
    try {
        return cfg.command == RunConfig::Command::solve ? run_solve(cfg) : run_optimize(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace condopt
