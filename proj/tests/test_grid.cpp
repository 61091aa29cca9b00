#include <doctest.h>

#include <map>
#include <set>

#include "dyadnum/common.hpp"
#include "dyadnum/grid.hpp"

using namespace dyadnum;

TEST_CASE("grid geometry") {
    Grid g(1, 4);
    CHECK(g.cells_per_side() == 16);
    CHECK(g.cell_count() == 16);
    CHECK(g.cell_size() == doctest::Approx(1.0 / 16));

    Grid g2(2, 3);
    CHECK(g2.cell_count() == 64);
    CHECK(g2.cell_id(2, 5) == 5 * 8 + 2);
    const auto c = g2.cell_coords(g2.cell_id(2, 5));
    CHECK(c[0] == 2);
    CHECK(c[1] == 5);
    CHECK_THROWS(Grid(3, 4));
}

TEST_CASE("children partition parents exactly") {
    Grid g(2, 4);
    for (int level = 0; level < g.J; ++level) {
        for_each_dyadic_cube(g, level, [&](const Cube& q) {
            const Box parent = cube_box(g, q);
            std::set<std::int64_t> covered;
            for (int which = 0; which < 4; ++which) {
                const Box child = cube_box(g, child_cube(q, which));
                for_each_cell(g, child, [&](std::int64_t id) {
                    CHECK(covered.insert(id).second);  // disjoint
                    CHECK(box_contains_cell(g, parent, id));
                });
            }
            CHECK(covered.size() == static_cast<std::size_t>(clip(g, parent).cell_count()));
        });
    }
}

TEST_CASE("one-third trick lattice count") {
    CHECK(shifted_lattices(Grid(1, 6)).size() == 3);
    CHECK(shifted_lattices(Grid(2, 4)).size() == 9);
}

TEST_CASE("3Q lands in exactly one shifted lattice") {
    // exhaustive membership scan at desk scale, then random draws
    for (Grid g : {Grid(1, 6), Grid(2, 4)}) {
        Rng rng(42);
        for (int trial = 0; trial < 1000; ++trial) {
            const int level = static_cast<int>(rng.below(g.J + 1));
            Cube q{kBaseLattice, level, {0, 0}};
            q.idx[0] = static_cast<int>(rng.below(1ULL << level));
            if (g.n == 2) q.idx[1] = static_cast<int>(rng.below(1ULL << level));

            const Cube t = triple_cube(g, q);
            CHECK(cube_box(g, t) == dilate3(g, cube_box(g, q)));

            // membership in exactly one lattice: scan all lattices at this level
            int hits = 0;
            for (int lat = 0; lat < lattice_count(g); ++lat) {
                for_each_lattice_cube(g, lat, level, [&](const Cube& cand) {
                    if (cube_box(g, cand) == dilate3(g, cube_box(g, q))) ++hits;
                });
            }
            CHECK(hits == 1);

            // r_q mapping: volume ratio 3^n and containment
            const Box b = cube_box(g, q), tb = cube_box(g, t);
            CHECK(box_volume(g, tb) == doctest::Approx(box_volume(g, b) * (g.n == 1 ? 3 : 9)));
            for_each_cell(g, b, [&](std::int64_t id) { CHECK(box_contains_cell(g, tb, id)); });
        }
    }
}

TEST_CASE("lattice_cube_at agrees with enumeration") {
    for (Grid g : {Grid(1, 5), Grid(2, 3)}) {
        for (int lat = 0; lat < lattice_count(g); ++lat) {
            for (int level = 0; level <= g.J; ++level) {
                // every cell is covered by exactly one cube of this lattice level
                std::map<std::int64_t, int> cover;
                for_each_lattice_cube(g, lat, level, [&](const Cube& q) {
                    for_each_cell(g, cube_box(g, q), [&](std::int64_t id) { cover[id]++; });
                });
                for (std::int64_t id = 0; id < g.cell_count(); ++id) {
                    CHECK(cover[id] == 1);
                    const Cube q = lattice_cube_at(g, lat, level, id);
                    CHECK(box_contains_cell(g, cube_box(g, q), id));
                }
            }
        }
    }
}

TEST_CASE("dilates and clipping") {
    Grid g(1, 4);
    const Box b{{4, 0}, 4};
    CHECK(dilate3(g, b) == Box{{0, 0}, 12});
    CHECK(dilate2(g, b) == Box{{2, 0}, 8});
    CHECK_THROWS(dilate2(g, Box{{3, 0}, 3}));

    const Box edge{{14, 0}, 4};
    const ClippedBox c = clip(g, edge);
    CHECK(c.x0 == 14);
    CHECK(c.x1 == 16);
    CHECK(c.cell_count() == 2);
    CHECK_FALSE(box_in_domain(g, edge));
    CHECK(box_in_domain(g, b));
}
