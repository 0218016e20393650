#pragma once

#include <string>
#include <vector>

#include "condopt/optimizer.hpp"
#include "condopt/particle_system.hpp"
#include "condopt/problem.hpp"

namespace condopt {

/// Extra numbers the drivers attach to an optimization run for reporting.
struct RunTimings {
    Real reference_avg_T = 0.0; // uniform-k steady average
    Real steady_seconds = 0.0;
    Real optimize_seconds = 0.0;
};

/// fields.csv: header x,y,T,k,role, one row per particle in index order,
/// full double precision.
void emit_fields(const ParticleSystem& ps, const std::string& path);

struct FieldsData {
    std::vector<Real> x;
    std::vector<Real> y;
    std::vector<Real> temperature;
    std::vector<Real> conductivity;
    std::vector<std::string> role;
};

FieldsData load_fields(const std::string& path);

/// history.csv: loop,avg_T,e_max,e_ave,beta,mu,pde_steps.
void emit_history(const OptimizationReport& report, const std::string& path);

std::vector<LoopRecord> load_history(const std::string& path);

/// summary.txt for an optimization run: original and optimized averages,
/// reduction percent, loop/step counts, wall times and their ratio.
void emit_summary(const OptimizationReport& report, const RunTimings& timings,
                  const std::string& path);

/// summary.txt for a plain steady solve.
void emit_solve_summary(Real avg_T, const SteadySolveResult& result, Real seconds,
                        const std::string& path);

std::string role_label(Role role, int segment);

/// Flat key-value problem description (same syntax as the run config file).
ProblemSpec load_problem_file(const std::string& path);
void write_problem_file(const ProblemSpec& spec, const std::string& path);

} // namespace condopt
