#include "condopt/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace condopt {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw std::runtime_error(path + ": " + what);
}

std::FILE* open_for_write(const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) {
        fail(path, "cannot open for writing");
    }
    return f;
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) {
        out.push_back(field);
    }
    return out;
}

Real parse_real(const std::string& s, const std::string& path)
{
    try {
        std::size_t used = 0;
        const Real v = std::stod(s, &used);
        if (used != s.size()) {
            fail(path, "trailing characters in number '" + s + "'");
        }
        return v;
    } catch (const std::invalid_argument&) {
        fail(path, "not a number: '" + s + "'");
    }
}

} // namespace

std::string role_label(Role role, int segment)
{
    switch (role) {
    case Role::inner: return "inner";
    case Role::dirichlet_dummy: return "dirichlet:" + std::to_string(segment);
    case Role::neumann_dummy: return "neumann:" + std::to_string(segment);
    case Role::adiabatic_dummy: return "adiabatic:" + std::to_string(segment);
    }
    return "unknown";
}

void emit_fields(const ParticleSystem& ps, const std::string& path)
{
    std::FILE* f = open_for_write(path);
    std::fputs("x,y,T,k,role\n", f);
    for (std::uint32_t i = 0; i < ps.size(); ++i) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%s\n", ps.position[i].x, ps.position[i].y,
                     ps.temperature[i], ps.conductivity[i],
                     role_label(ps.role[i], ps.segment[i]).c_str());
    }
    std::fclose(f);
}

FieldsData load_fields(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(path, "cannot open");
    }
    std::string line;
    if (!std::getline(in, line) || line != "x,y,T,k,role") {
        fail(path, "unexpected fields header");
    }
    FieldsData data;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 5) {
            fail(path, "expected 5 columns, got: " + line);
        }
        data.x.push_back(parse_real(cols[0], path));
        data.y.push_back(parse_real(cols[1], path));
        data.temperature.push_back(parse_real(cols[2], path));
        data.conductivity.push_back(parse_real(cols[3], path));
        data.role.push_back(cols[4]);
    }
    return data;
}

void emit_history(const OptimizationReport& report, const std::string& path)
{
    std::FILE* f = open_for_write(path);
    std::fputs("loop,avg_T,e_max,e_ave,beta,mu,pde_steps\n", f);
    for (const LoopRecord& r : report.history) {
        std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%ld\n", r.loop, r.avg_T, r.e_max,
                     r.e_ave, r.beta, r.mu, r.pde_steps);
    }
    std::fclose(f);
}

std::vector<LoopRecord> load_history(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(path, "cannot open");
    }
    std::string line;
    if (!std::getline(in, line) || line != "loop,avg_T,e_max,e_ave,beta,mu,pde_steps") {
        fail(path, "unexpected history header");
    }
    std::vector<LoopRecord> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 7) {
            fail(path, "expected 7 columns, got: " + line);
        }
        LoopRecord r;
        r.loop = static_cast<int>(parse_real(cols[0], path));
        r.avg_T = parse_real(cols[1], path);
        r.e_max = parse_real(cols[2], path);
        r.e_ave = parse_real(cols[3], path);
        r.beta = parse_real(cols[4], path);
        r.mu = parse_real(cols[5], path);
        r.pde_steps = static_cast<long>(parse_real(cols[6], path));
        rows.push_back(r);
    }
    return rows;
}

void emit_summary(const OptimizationReport& report, const RunTimings& timings,
                  const std::string& path)
{
    const Real orig = timings.reference_avg_T;
    const Real opt = report.final_avg_T;
    const Real reduction = orig != 0.0 ? (orig - opt) / orig * 100.0 : 0.0;
    const Real ratio =
        timings.steady_seconds > 0.0 ? timings.optimize_seconds / timings.steady_seconds : 0.0;

    std::FILE* f = open_for_write(path);
    std::fprintf(f, "original_avg_T_K: %.6f\n", orig);
    std::fprintf(f, "optimized_avg_T_K: %.6f\n", opt);
    std::fprintf(f, "reduction_percent: %.2f\n", reduction);
    std::fprintf(f, "loops: %zu\n", report.history.size());
    std::fprintf(f, "pde_steps: %ld\n", report.total_pde_steps);
    std::fprintf(f, "steady_solve_seconds: %.3f\n", timings.steady_seconds);
    std::fprintf(f, "optimization_seconds: %.3f\n", timings.optimize_seconds);
    std::fprintf(f, "cost_ratio: %.3f\n", ratio);
    std::fprintf(f, "converged: %s\n", report.converged ? "yes" : "no");
    std::fprintf(f, "reason: %s\n", report.reason.c_str());
    std::fclose(f);
}

void emit_solve_summary(Real avg_T, const SteadySolveResult& result, Real seconds,
                        const std::string& path)
{
    std::FILE* f = open_for_write(path);
    std::fprintf(f, "avg_T_K: %.6f\n", avg_T);
    std::fprintf(f, "e_max: %.6g\n", result.stats.max_abs);
    std::fprintf(f, "e_ave: %.6g\n", result.stats.mean_abs);
    std::fprintf(f, "steps: %ld\n", result.steps);
    std::fprintf(f, "steady_solve_seconds: %.3f\n", seconds);
    std::fprintf(f, "converged: %s\n", result.converged ? "yes" : "no");
    std::fclose(f);
}

namespace {

BoundaryKind kind_from_name(const std::string& name, const std::string& path)
{
    if (name == "dirichlet") return BoundaryKind::dirichlet_temperature;
    if (name == "influx") return BoundaryKind::neumann_influx;
    if (name == "adiabatic") return BoundaryKind::adiabatic;
    fail(path, "unknown segment kind '" + name + "' (want dirichlet|influx|adiabatic)");
}

std::string kind_name(BoundaryKind kind)
{
    switch (kind) {
    case BoundaryKind::dirichlet_temperature: return "dirichlet";
    case BoundaryKind::neumann_influx: return "influx";
    case BoundaryKind::adiabatic: return "adiabatic";
    }
    return "unknown";
}

} // namespace

ProblemSpec load_problem_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail(path, "cannot open");
    }
    ProblemSpec spec;
    spec.source.uniform_rate = 0.0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) {
            continue;
        }
        std::string eq;
        if (!(ls >> eq) || eq != "=") {
            fail(path, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        auto want_real = [&](const char* what) {
            Real v;
            if (!(ls >> v)) {
                fail(path, "line " + std::to_string(line_no) + ": bad value for " + what);
            }
            return v;
        };
        if (key == "side_length") {
            spec.side_length = want_real("side_length");
        } else if (key == "resolution") {
            spec.resolution = static_cast<int>(want_real("resolution"));
        } else if (key == "dummy_layers") {
            spec.dummy_layers = static_cast<int>(want_real("dummy_layers"));
        } else if (key == "k0") {
            spec.k0 = want_real("k0");
        } else if (key == "source_rate") {
            spec.source.uniform_rate = want_real("source_rate");
        } else if (key == "gaussian") {
            GaussianSource g;
            g.center.x = want_real("gaussian x");
            g.center.y = want_real("gaussian y");
            g.intensity = want_real("gaussian intensity");
            spec.source.gaussians.push_back(g);
        } else if (key == "segment") {
            std::string edge, kind;
            BoundarySegment seg;
            if (!(ls >> edge)) {
                fail(path, "line " + std::to_string(line_no) + ": segment needs an edge");
            }
            seg.edge = edge_from_name(edge);
            seg.start = want_real("segment start");
            seg.end = want_real("segment end");
            if (!(ls >> kind)) {
                fail(path, "line " + std::to_string(line_no) + ": segment needs a kind");
            }
            seg.kind = kind_from_name(kind, path);
            if (seg.kind != BoundaryKind::adiabatic) {
                seg.value = want_real("segment value");
            }
            spec.segments.push_back(seg);
        } else {
            fail(path, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    spec.validate();
    return spec;
}

void write_problem_file(const ProblemSpec& spec, const std::string& path)
{
    std::FILE* f = open_for_write(path);
    std::fprintf(f, "side_length = %.17g\n", spec.side_length);
    std::fprintf(f, "resolution = %d\n", spec.resolution);
    std::fprintf(f, "dummy_layers = %d\n", spec.dummy_layers);
    std::fprintf(f, "k0 = %.17g\n", spec.k0);
    if (spec.source.is_uniform()) {
        std::fprintf(f, "source_rate = %.17g\n", spec.source.uniform_rate);
    } else {
        for (const auto& g : spec.source.gaussians) {
            std::fprintf(f, "gaussian = %.17g %.17g %.17g\n", g.center.x, g.center.y,
                         g.intensity);
        }
    }
    for (const auto& seg : spec.segments) {
        if (seg.kind == BoundaryKind::adiabatic) {
            std::fprintf(f, "segment = %s %.17g %.17g %s\n", edge_name(seg.edge).c_str(),
                         seg.start, seg.end, kind_name(seg.kind).c_str());
        } else {
            std::fprintf(f, "segment = %s %.17g %.17g %s %.17g\n", edge_name(seg.edge).c_str(),
                         seg.start, seg.end, kind_name(seg.kind).c_str(), seg.value);
        }
    }
    std::fclose(f);
}

} // namespace condopt
