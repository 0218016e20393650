#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "condopt/cell_grid.hpp"
#include "condopt/particle_system.hpp"

using namespace condopt;

namespace {

ProblemSpec plain_spec(int resolution, int layers)
{
    ProblemSpec spec;
    spec.side_length = 1.0;
    spec.resolution = resolution;
    spec.dummy_layers = layers;
    spec.k0 = 1.0;
    spec.source.uniform_rate = 0.0;
    return spec;
}

} // namespace

TEST_CASE("lattice particle counts")
{
    const auto ps = build_lattice(plain_spec(100, 4));
    CHECK(ps.inner.size() == 10000);
    CHECK(ps.size() == 108 * 108);
    CHECK(ps.dummies.size() == ps.size() - 10000);
}

TEST_CASE("small lattice geometry")
{
    // cell-center layout: particle (gi, gj) sits at ((gi+0.5) dx, (gj+0.5) dx);
    // at N=2 this would put the four inner particles on the quarter points.
    const auto ps = build_lattice(plain_spec(8, 1));
    const Real dx = 1.0 / 8.0;
    CHECK(ps.spacing == doctest::Approx(dx));
    for (int gj = 0; gj < 8; ++gj) {
        for (int gi = 0; gi < 8; ++gi) {
            const auto& p = ps.position[static_cast<std::uint32_t>(gj * 8 + gi)];
            CHECK(p.x == doctest::Approx((gi + 0.5) * dx));
            CHECK(p.y == doctest::Approx((gj + 0.5) * dx));
        }
    }
    for (std::uint32_t i = 0; i < ps.size(); ++i) {
        CHECK(ps.volume[i] == doctest::Approx(dx * dx));
    }
}

TEST_CASE("bottom-edge dummies carry the outward normal (0,-1)")
{
    const auto ps = build_lattice(plain_spec(10, 4));
    int checked = 0;
    for (std::uint32_t w : ps.dummies) {
        const Vec2 p = ps.position[w];
        if (p.y < 0.0 && p.x > 0.0 && p.x < 1.0) {
            CHECK(ps.normal[w].x == 0.0);
            CHECK(ps.normal[w].y == -1.0);
            ++checked;
        }
    }
    CHECK(checked == 40);
}

TEST_CASE("dummy normals are unit length and inner normals are zero")
{
    const auto ps = build_lattice(plain_spec(10, 4));
    for (std::uint32_t w : ps.dummies) {
        CHECK(ps.normal[w].norm() == doctest::Approx(1.0));
    }
    for (std::uint32_t i : ps.inner) {
        CHECK(ps.normal[i].norm() == 0.0);
    }
}

TEST_CASE("every dummy mirrors an inner particle by reflection")
{
    const auto ps = build_lattice(plain_spec(10, 4));
    auto reflect = [&](Real c) {
        if (c < 0.0) return -c;
        if (c > ps.side) return 2.0 * ps.side - c;
        return c;
    };
    for (std::uint32_t w : ps.dummies) {
        const std::uint32_t m = ps.mirror[w];
        CHECK(ps.role[m] == Role::inner);
        CHECK(ps.position[m].x == doctest::Approx(reflect(ps.position[w].x)));
        CHECK(ps.position[m].y == doctest::Approx(reflect(ps.position[w].y)));
    }
}

TEST_CASE("dummy layer count per edge matches the configuration")
{
    const int layers = 3;
    auto spec = plain_spec(12, layers);
    const auto ps = build_lattice(spec);
    // Count distinct dummy rows below the bottom edge at a fixed interior x.
    std::set<long> rows;
    for (std::uint32_t w : ps.dummies) {
        const Vec2 p = ps.position[w];
        if (p.y < 0.0 && std::abs(p.x - 0.5 - ps.spacing / 2.0) < 1e-9) {
            rows.insert(std::lround(std::floor(p.y / ps.spacing)));
        }
    }
    CHECK(rows.size() == static_cast<std::size_t>(layers));
}

TEST_CASE("construction rejects bad inputs")
{
    auto bad_side = plain_spec(10, 4);
    bad_side.side_length = 0.0;
    CHECK_THROWS(build_lattice(bad_side));

    auto bad_res = plain_spec(4, 1);
    CHECK_THROWS(build_lattice(bad_res));

    auto overlap = plain_spec(10, 4);
    overlap.segments = {{Edge::left, 0.2, 0.6, BoundaryKind::dirichlet_temperature, 300.0},
                        {Edge::left, 0.5, 0.8, BoundaryKind::dirichlet_temperature, 320.0}};
    CHECK_THROWS(build_lattice(overlap));

    auto outside = plain_spec(10, 4);
    outside.segments = {{Edge::top, 0.5, 1.2, BoundaryKind::dirichlet_temperature, 300.0}};
    CHECK_THROWS(build_lattice(outside));
}

TEST_CASE("inner volumes sum to the domain area")
{
    const auto ps = build_lattice(plain_spec(13, 4));
    Real total = 0.0;
    for (std::uint32_t i : ps.inner) {
        total += ps.volume[i];
    }
    CHECK(std::abs(total - ps.domain_area()) <= 1e-12 * ps.domain_area());
}

TEST_CASE("segment membership is half-open along the edge")
{
    auto spec = plain_spec(10, 2);
    spec.segments = {{Edge::left, 0.4, 0.6, BoundaryKind::dirichlet_temperature, 300.0}};
    const auto ps = build_lattice(spec);
    int members = 0;
    for (std::uint32_t w : ps.dummies) {
        if (ps.role[w] == Role::dirichlet_dummy) {
            CHECK(ps.position[w].y >= 0.4);
            CHECK(ps.position[w].y < 0.6);
            CHECK(ps.position[w].x < 0.0);
            ++members;
        }
    }
    CHECK(members == 2 * 2); // two rows in [0.4, 0.6) at N=10, two layers deep
}

TEST_CASE("grid neighbor lists equal brute force on small lattices")
{
    auto spec = plain_spec(10, 4);
    const auto ps = build_lattice(spec);
    const Real support = 2.6 * ps.spacing;
    const auto grid = build_cell_grid(ps, support);

    for (std::uint32_t i = 0; i < ps.size(); i += 7) {
        std::set<std::uint32_t> brute;
        for (std::uint32_t j = 0; j < ps.size(); ++j) {
            if (j != i && (ps.position[i] - ps.position[j]).norm() < support) {
                brute.insert(j);
            }
        }
        std::set<std::uint32_t> fast;
        for (const auto& nb : neighbors(ps, grid, i)) {
            fast.insert(nb.index);
        }
        REQUIRE(fast == brute);
    }
}

TEST_CASE("single particle occupies one cell and one color")
{
    ParticleSystem ps;
    ps.position = {{0.5, 0.5}};
    ps.temperature = {0.0};
    ps.conductivity = {1.0};
    ps.source_rate = {0.0};
    ps.volume = {1.0};
    ps.normal = {{}};
    ps.role = {Role::inner};
    ps.segment = {-1};
    ps.boundary_value = {0.0};
    ps.mirror = {0};
    ps.inner = {0};
    ps.spacing = 1.0;
    ps.side = 1.0;
    ps.resolution = 1;
    ps.layers = 0;

    const auto grid = build_cell_grid(ps, 0.3);
    std::size_t used_cells = 0;
    for (const auto& cell : grid.cells) {
        used_cells += cell.empty() ? 0 : 1;
    }
    CHECK(used_cells == 1);
    std::size_t used_colors = 0;
    for (const auto& batch : grid.color_batches) {
        used_colors += batch.empty() ? 0 : 1;
    }
    CHECK(used_colors == 1);
    CHECK(neighbors(ps, grid, 0).empty());
}

TEST_CASE("same-color cells are never adjacent")
{
    const auto ps = build_lattice(plain_spec(10, 4));
    const auto grid = build_cell_grid(ps, 2.6 * ps.spacing);
    for (const auto& batch : grid.color_batches) {
        for (std::size_t a = 0; a < batch.size(); ++a) {
            for (std::size_t b = a + 1; b < batch.size(); ++b) {
                const int ax = static_cast<int>(batch[a]) % grid.nx;
                const int ay = static_cast<int>(batch[a]) / grid.nx;
                const int bx = static_cast<int>(batch[b]) % grid.nx;
                const int by = static_cast<int>(batch[b]) / grid.nx;
                const bool adjacent = std::abs(ax - bx) <= 1 && std::abs(ay - by) <= 1;
                CHECK_FALSE(adjacent);
            }
        }
    }
}

TEST_CASE("same-color particles have disjoint write sets")
{
    // Sufficient condition: any two particles of one color batch sit farther
    // apart than twice the support radius, so no third particle neighbors both.
    const auto ps = build_lattice(plain_spec(10, 4));
    const Real support = 2.6 * ps.spacing;
    const auto grid = build_cell_grid(ps, support);
    for (const auto& batch : grid.color_batches) {
        std::vector<std::uint32_t> members;
        for (std::uint32_t cell : batch) {
            for (std::uint32_t p : grid.cells[cell]) {
                members.push_back(p);
            }
        }
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                const Real d = (ps.position[members[a]] - ps.position[members[b]]).norm();
                const bool same_cell =
                    grid.cell_index(ps.position[members[a]]) ==
                    grid.cell_index(ps.position[members[b]]);
                if (!same_cell) {
                    CHECK(d > 2.0 * support);
                }
            }
        }
    }
}

TEST_CASE("interior particle has 20 neighbors at support 2.6 dx")
{
    const auto ps = build_lattice(plain_spec(20, 4));
    const auto grid = build_cell_grid(ps, 2.6 * ps.spacing);
    const std::uint32_t center = 10 * 20 + 10;
    CHECK(neighbors(ps, grid, center).size() == 20);
}

TEST_CASE("corner-most inner particle sees dummy neighbors")
{
    const auto ps = build_lattice(plain_spec(20, 4));
    const auto grid = build_cell_grid(ps, 2.6 * ps.spacing);
    bool has_dummy = false;
    for (const auto& nb : neighbors(ps, grid, 0)) {
        if (ps.role[nb.index] != Role::inner) {
            has_dummy = true;
        }
    }
    CHECK(has_dummy);
}

TEST_CASE("neighbor direction vectors are antisymmetric")
{
    const auto ps = build_lattice(plain_spec(10, 2));
    const auto grid = build_cell_grid(ps, 2.6 * ps.spacing);
    const std::uint32_t i = 55;
    for (const auto& nb : neighbors(ps, grid, i)) {
        for (const auto& back : neighbors(ps, grid, nb.index)) {
            if (back.index == i) {
                CHECK(back.direction.x == doctest::Approx(-nb.direction.x).epsilon(1e-14));
                CHECK(back.direction.y == doctest::Approx(-nb.direction.y).epsilon(1e-14));
            }
        }
    }
}
