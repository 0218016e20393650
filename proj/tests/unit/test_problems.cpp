#include <doctest.h>

#include <cmath>

#include "condopt/problem.hpp"

using namespace condopt;

TEST_CASE("built-in problems validate and cover ids 1..7")
{
    for (int id = 1; id <= 7; ++id) {
        CHECK_NOTHROW(builtin_problem(id));
    }
    CHECK_THROWS(builtin_problem(0));
    CHECK_THROWS(builtin_problem(8));
}

TEST_CASE("problem 1 sink interval is the centered fifth of the edge")
{
    const auto p = builtin_problem(1);
    REQUIRE(p.segments.size() == 2);
    CHECK(p.segments[0].edge == Edge::left);
    CHECK(p.segments[0].start == doctest::Approx(0.4));
    CHECK(p.segments[0].end == doctest::Approx(0.6));
    CHECK(p.segments[0].value == 300.0);
    CHECK(p.segments[1].edge == Edge::right);
    CHECK(p.k0 == 1.0);
    CHECK(p.source.uniform_rate == 1000.0);
}

TEST_CASE("problem parameters follow the benchmark table")
{
    CHECK(builtin_problem(2).segments[1].value == 350.0);
    const auto p3 = builtin_problem(3);
    CHECK(p3.k0 == 4.0);
    CHECK(p3.source.uniform_rate == 2000.0);
    CHECK(p3.segments[0].value == 280.0);
    CHECK(p3.segments[1].value == 280.0);
    const auto p4 = builtin_problem(4);
    CHECK(p4.segments[0].value == 280.0);
    CHECK(p4.segments[1].value == 350.0);
    const auto p5 = builtin_problem(5);
    CHECK(p5.source.gaussians.size() == 4);
    CHECK(p5.k0 == 4.0);
}

TEST_CASE("gaussian-sum source evaluates the cumulative intensity")
{
    const auto p = builtin_problem(5);
    // at a source center: C (1 + 2 exp(-2.5) + exp(-5))
    const Real expected_center = 3000.0 * (1.0 + 2.0 * std::exp(-2.5) + std::exp(-5.0));
    CHECK(source_at(p, {0.25, 0.25}) == doctest::Approx(expected_center).epsilon(1e-12));
    CHECK(expected_center == doctest::Approx(3512.72).epsilon(1e-4));
    // at the domain center all four centers are at squared distance 0.125
    const Real expected_middle = 4.0 * 3000.0 * std::exp(-1.25);
    CHECK(source_at(p, {0.5, 0.5}) == doctest::Approx(expected_middle).epsilon(1e-12));
}

TEST_CASE("uniform source is position independent")
{
    const auto p = builtin_problem(1);
    CHECK(source_at(p, {0.1, 0.9}) == 1000.0);
    CHECK(source_at(p, {0.5, 0.5}) == 1000.0);
}

TEST_CASE("gaussian field is symmetric under the square's reflections")
{
    const auto p = builtin_problem(5);
    const Vec2 samples[] = {{0.1, 0.2}, {0.33, 0.71}, {0.5, 0.05}, {0.62, 0.41}};
    for (const Vec2 s : samples) {
        const Real v = source_at(p, s);
        CHECK(source_at(p, {1.0 - s.x, s.y}) == doctest::Approx(v).epsilon(1e-12));
        CHECK(source_at(p, {s.x, 1.0 - s.y}) == doctest::Approx(v).epsilon(1e-12));
        CHECK(source_at(p, {s.y, s.x}) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("problem 7 heater carries 200 W per meter depth")
{
    const auto p = builtin_problem(7);
    const BoundarySegment* heater = nullptr;
    for (const auto& seg : p.segments) {
        if (seg.kind == BoundaryKind::neumann_influx) {
            heater = &seg;
        }
    }
    REQUIRE(heater != nullptr);
    CHECK(heater->edge == Edge::top);
    CHECK(heater->value * (heater->end - heater->start) == doctest::Approx(200.0));
    CHECK(p.source.uniform_rate == 0.0);
    CHECK(p.min_sink_temperature() == 300.0);
}

TEST_CASE("problem 6 uses the small calibrated sinks")
{
    const auto p = builtin_problem(6);
    REQUIRE(p.segments.size() == 2);
    CHECK(p.segments[0].edge == Edge::top);
    CHECK(p.segments[0].value == 350.0);
    CHECK(p.segments[0].end - p.segments[0].start == doctest::Approx(0.1));
    CHECK(p.segments[1].edge == Edge::bottom);
    CHECK(p.segments[1].value == 300.0);
}

TEST_CASE("spec validation rejects nonpositive gaussian intensity")
{
    auto p = builtin_problem(5);
    p.source.gaussians[0].intensity = -1.0;
    CHECK_THROWS(p.validate());
}
