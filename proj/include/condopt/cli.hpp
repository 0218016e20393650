#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "condopt/geometry.hpp"

namespace condopt {

/// Fully resolved run configuration. Flag values override config-file values;
/// every flag also reads a CONDOPT_* environment variable.
struct RunConfig {
    enum class Command { solve, optimize };
    Command command = Command::solve;

    std::string problem;      // "1".."7" or a problem-spec file path
    int resolution = 100;
    int dummy_layers = 4;
    Real h_ratio = 1.3;
    Real dt_multiplier = 10.0;
    std::string kernel = "wendland_c2";

    Real beta0 = 0.75;
    Real mu0 = 1.5;
    Real tol_e_max = 1e-3;
    Real tol_avg_dT = 1e-3;
    Real tol_dk = 1e-4;
    int loop_cap = 500;
    int relax_cap = 2000;

    Real steady_tol = 1e-3;
    long steady_max_steps = 200000;

    std::uint64_t seed = 1;
    int threads = 1;
    std::string output_dir = ".";

    bool constant_init = false;
    bool presolve = false;
    bool literal_recovery_sign = false;
    bool reg_shares_pde_step = false;
    bool neumann_zero_inner_normal = false;
};

/// Parses argv (plus optional --config file and CONDOPT_* environment
/// variables) into a RunConfig. Throws ConfigError with a diagnostic naming
/// the offending key; --help is signalled via HelpRequested.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct HelpRequested {
    std::string text;
};

RunConfig parse_config(int argc, const char* const* argv);

/// Full command-line entry point: parse, run, emit, map outcomes to exit
/// codes (0 success, 1 configuration error, 2 non-convergence).
int run_cli(int argc, const char* const* argv);

} // namespace condopt
