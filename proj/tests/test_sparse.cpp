#include <doctest.h>

#include <cmath>

#include "dyadnum/sparse.hpp"

using namespace dyadnum;

namespace {

ScalarField bump_in(const Grid& g, const Box& support) {
    ScalarField f(g, 0.0);
    const double h = g.cell_size();
    const double cx = (support.lo[0] + support.size / 2.0) * h;
    const double width = support.size * h / 4.0;
    for_each_cell(g, support, [&](std::int64_t i) {
        const double dx = g.cell_center(i)[0] - cx;
        f.at(i) = std::exp(-dx * dx / (width * width));
    });
    return f;
}

ScalarField log_symbol(const Grid& g) {
    ScalarField b(g);
    const double x0 = 0.5 * g.side();
    for (std::int64_t i = 0; i < b.size(); ++i)
        b.at(i) = std::log(std::fabs(g.cell_center(i)[0] - x0));
    return b;
}

}  // namespace

TEST_CASE("verify_sparse on constructed families") {
    Grid g(1, 4);
    SUBCASE("disjoint cubes with E_Q = Q pass at eta = 1") {
        SparseFamily fam{g, 1.0, {}};
        for (int i = 0; i < 4; ++i) {
            Cube q{kBaseLattice, 2, {i, 0}};
            CellSet e(g.cell_count());
            for_each_cell(g, cube_box(g, q), [&](std::int64_t id) { e.set(id); });
            fam.entries.push_back({q, cube_box(g, q), e});
        }
        CHECK(verify_sparse(fam, 1.0).pass);
    }
    SUBCASE("nested pair with greedy top-down assignment") {
        // root keeps its left half, child claims the right half: exact counts
        SparseFamily fam{g, 0.5, {}};
        Cube root{kBaseLattice, 0, {0, 0}};
        Cube child{kBaseLattice, 1, {1, 0}};
        CellSet eroot(g.cell_count()), echild(g.cell_count());
        for_each_cell(g, cube_box(g, child), [&](std::int64_t id) { echild.set(id); });
        for_each_cell(g, cube_box(g, root), [&](std::int64_t id) {
            if (!echild.test(id)) eroot.set(id);
        });
        fam.entries.push_back({root, cube_box(g, root), eroot});
        fam.entries.push_back({child, cube_box(g, child), echild});
        CHECK(verify_sparse(fam, 0.5).pass);
        CHECK_FALSE(verify_sparse(fam, 0.75).pass);  // root only owns half
    }
    SUBCASE("duplicate cube with overlapping sets fails with a witness") {
        SparseFamily fam{g, 0.5, {}};
        Cube q{kBaseLattice, 1, {0, 0}};
        CellSet e(g.cell_count());
        for_each_cell(g, cube_box(g, q), [&](std::int64_t id) { e.set(id); });
        fam.entries.push_back({q, cube_box(g, q), e});
        fam.entries.push_back({q, cube_box(g, q), e});
        const auto v = verify_sparse(fam, 0.5);
        CHECK_FALSE(v.pass);
        CHECK(v.witness.find("overlaps") != std::string::npos);
    }
}

TEST_CASE("cz stopping time") {
    Grid g(1, 5);
    const Cube root{kBaseLattice, 0, {0, 0}};
    SUBCASE("indicator of the left half at height 1/2") {
        ScalarField f(g, 0.0);
        for (int i = 0; i < g.cells_per_side() / 2; ++i) f.at(i) = 1.0;
        const auto cubes = cz_stopping(f, root, 0.5);
        REQUIRE(cubes.size() == 1);
        CHECK(cubes[0].level == 1);
        CHECK(cubes[0].idx[0] == 0);
    }
    SUBCASE("zero field selects nothing") {
        CHECK(cz_stopping(ScalarField(g, 0.0), root, 0.25).empty());
    }
    SUBCASE("average above height returns Q0 itself") {
        ScalarField f(g, 1.0);
        const auto cubes = cz_stopping(f, root, 0.5);
        REQUIRE(cubes.size() == 1);
        CHECK(cubes[0] == root);
    }
    SUBCASE("negative samples are rejected") {
        CHECK_THROWS(cz_stopping(ScalarField(g, -1.0), root, 0.5));
    }
    SUBCASE("random 0/1 field: measure bound and per-cube average bound") {
        Rng rng(12);
        for (int trial = 0; trial < 20; ++trial) {
            ScalarField f(g, 0.0);
            double total = 0.0;
            for (std::int64_t i = 0; i < f.size(); ++i) {
                f.at(i) = rng.uniform() < 0.2 ? 1.0 : 0.0;
                total += f[i] * g.cell_volume();
            }
            const double height = 0.25;
            DyadicSums sums(f);
            if (sums.avg(root) > height) continue;
            const auto cubes = cz_stopping(f, root, height);
            double selected = 0.0;
            for (const Cube& p : cubes) {
                const Box b = cube_box(g, p);
                selected += box_volume(g, b);
                const double avg = sums.avg(p);
                CHECK(avg > height);
                CHECK(avg <= 2.0 * height);  // 2^n height in 1D
                // maximality: oracle re-scan of every strict dyadic ancestor
                Cube anc = p;
                while (anc.level > 0) {
                    anc = Cube{kBaseLattice, anc.level - 1, {anc.idx[0] / 2, anc.idx[1] / 2}};
                    CHECK(sums.avg(anc) <= height);
                }
            }
            CHECK(selected <= total / height + 1e-12);
            // disjointness of the selection
            CellSet seen(g.cell_count());
            for (const Cube& p : cubes) {
                CellSet mask(g.cell_count());
                for_each_cell(g, cube_box(g, p), [&](std::int64_t id) { mask.set(id); });
                CHECK_FALSE(mask.intersects(seen));
                seen.or_with(mask);
            }
        }
    }
}

TEST_CASE("sparse build") {
    Grid g(1, 8);
    const Kernel k = hilbert_kernel();
    const Cube q0{kBaseLattice, 2, {1, 0}};  // [1/4, 1/2), 3Q0 = [0, 3/4)
    const Box support = cube_box(g, q0);
    const YoungFunction gauge = make_power(1.0);
    const auto cert = certify_y_class(gauge, 1.0, 1.0);
    REQUIRE(cert.has_value());

    SUBCASE("zero data produces the single-root family") {
        const auto rep =
            build_sparse_family(k, CommutatorSpec::none(), ScalarField(g, 0.0), q0, gauge, *cert);
        REQUIRE(rep.family.entries.size() == 1);
        CHECK(rep.family.entries[0].cube == q0);
        CHECK(verify_sparse(rep.family, 0.5).pass);
        CHECK(rep.max_depth == 0);
    }
    SUBCASE("m=0 bump: exact half-measure control at every node") {
        const ScalarField f = bump_in(g, support);
        const auto rep = build_sparse_family(k, CommutatorSpec::none(), f, q0, gauge, *cert);
        CHECK(verify_sparse(rep.family, 0.5).pass);
        for (const auto& node : rep.nodes) {
            CHECK(node.selected_cells * 2 <= node.box_cells);
            CHECK(static_cast<double>(node.exceptional_cells) <=
                  std::ldexp(static_cast<double>(node.box_cells), -3));  // 2^-(n+2)
        }
        CHECK(rep.c_t > 0.0);
        CHECK(std::isfinite(rep.h_abar));
    }
    SUBCASE("m=1 log symbol: terminates, half-sparse, bounded depth") {
        const ScalarField f = bump_in(g, support);
        const CommutatorSpec spec = CommutatorSpec::iterated(log_symbol(g), 1);
        const auto rep = build_sparse_family(k, spec, f, q0, gauge, *cert);
        CHECK(verify_sparse(rep.family, 0.5).pass);
        CHECK(rep.max_depth <= g.J);
        CHECK(rep.measured_eta_lattice > 0.0);
        for (const auto& node : rep.nodes)
            if (node.box_cells > 1) CHECK(node.selected_cells < node.box_cells);
    }
    SUBCASE("preconditions") {
        const ScalarField f = bump_in(g, support);
        CHECK_THROWS(build_sparse_family(k, CommutatorSpec::none(), f,
                                         Cube{kBaseLattice, 0, {0, 0}}, gauge, *cert));
        ScalarField outside(g, 0.0);
        outside.at(g.cell_count() - 1) = 1.0;
        CHECK_THROWS(build_sparse_family(k, CommutatorSpec::none(), outside, q0, gauge, *cert));
    }
}

TEST_CASE("sparse_eval") {
    Grid g(1, 6);
    const ScalarField f = bump_in(g, Box{{16, 0}, 16});
    const YoungFunction gauge = make_power(1.0);

    SUBCASE("empty family evaluates to zero") {
        SparseFamily fam{g, 0.5, {}};
        const ScalarField out = sparse_eval(fam, gauge, CommutatorSpec::none(), f, {});
        for (std::int64_t i = 0; i < out.size(); ++i) CHECK(out[i] == 0.0);
    }
    SUBCASE("single cube, m=0: the norm spread over the cube") {
        SparseFamily fam{g, 0.5, {}};
        Cube q{kBaseLattice, 1, {0, 0}};
        CellSet e(g.cell_count());
        fam.entries.push_back({q, cube_box(g, q), e});
        const ScalarField out = sparse_eval(fam, gauge, CommutatorSpec::none(), f, {});
        const double norm = luxemburg_norm(f, cube_box(g, q), gauge);
        for_each_cell(g, cube_box(g, q), [&](std::int64_t id) {
            CHECK(out[id] == doctest::Approx(norm).epsilon(1e-12));
        });
        CHECK(out[g.cell_count() - 1] == 0.0);
    }
    SUBCASE("m=1, gamma=1 matches the hand formula") {
        const ScalarField b = log_symbol(g);
        const CommutatorSpec spec = CommutatorSpec::iterated(b, 1);
        SparseFamily fam{g, 0.5, {}};
        Cube q{kBaseLattice, 1, {1, 0}};
        fam.entries.push_back({q, cube_box(g, q), CellSet(g.cell_count())});
        const ScalarField out = sparse_eval(fam, gauge, spec, f, {1});
        const double avg = average(b, cube_box(g, q));
        const double norm = luxemburg_norm(f, cube_box(g, q), gauge);
        for_each_cell(g, cube_box(g, q), [&](std::int64_t id) {
            CHECK(out[id] == doctest::Approx(std::fabs(b[id] - avg) * norm).epsilon(1e-10));
        });
    }
    SUBCASE("additive over disjoint subfamilies") {
        const ScalarField b = log_symbol(g);
        const CommutatorSpec spec = CommutatorSpec::iterated(b, 1);
        SparseFamily left{g, 0.5, {}}, right{g, 0.5, {}}, both{g, 0.5, {}};
        Cube ql{kBaseLattice, 1, {0, 0}}, qr{kBaseLattice, 1, {1, 0}};
        left.entries.push_back({ql, cube_box(g, ql), CellSet(g.cell_count())});
        right.entries.push_back({qr, cube_box(g, qr), CellSet(g.cell_count())});
        both.entries = {left.entries[0], right.entries[0]};
        const ScalarField a = sparse_eval(left, gauge, spec, f, {0});
        const ScalarField c = sparse_eval(right, gauge, spec, f, {0});
        const ScalarField ac = sparse_eval(both, gauge, spec, f, {0});
        for (std::int64_t i = 0; i < g.cell_count(); ++i)
            CHECK(ac[i] == doctest::Approx(a[i] + c[i]).epsilon(1e-12));
    }
}

TEST_CASE("domination constant") {
    Grid g(1, 8);
    const Kernel k = hilbert_kernel();
    const Cube q0{kBaseLattice, 2, {1, 0}};
    const Box support = cube_box(g, q0);
    const YoungFunction gauge = make_power(1.0);
    const auto cert = certify_y_class(gauge, 1.0, 1.0);
    REQUIRE(cert.has_value());

    SUBCASE("zero data dominates trivially") {
        const ScalarField f(g, 0.0);
        const auto rep = build_sparse_family(k, CommutatorSpec::none(), f, q0, gauge, *cert);
        const auto out = domination_report(k, CommutatorSpec::none(), f, gauge, rep);
        CHECK(out.constant == 0.0);
        CHECK_FALSE(out.violated);
    }
    SUBCASE("constant symbol collapses the commutator to zero") {
        const ScalarField f = bump_in(g, support);
        CommutatorSpec spec;
        spec.symbols = {ScalarField(g, 2.0)};
        const auto rep = build_sparse_family(k, spec, f, q0, gauge, *cert);
        const auto out = domination_report(k, spec, f, gauge, rep);
        CHECK(out.constant == 0.0);
        CHECK_FALSE(out.violated);
    }
    SUBCASE("m=0 bump: finite and stable across one refinement") {
        double constants[2];
        int idx = 0;
        for (int J : {7, 8}) {
            Grid gj(1, J);
            const Cube q{kBaseLattice, 2, {1, 0}};
            const ScalarField f = bump_in(gj, cube_box(gj, q));
            const auto rep = build_sparse_family(k, CommutatorSpec::none(), f, q, gauge, *cert);
            const auto out = domination_report(k, CommutatorSpec::none(), f, gauge, rep);
            CHECK_FALSE(out.violated);
            CHECK(std::isfinite(out.constant));
            CHECK(out.constant > 0.0);
            constants[idx++] = out.constant;
        }
        const double ratio = constants[1] / constants[0];
        CHECK(ratio < 2.0);
        CHECK(ratio > 0.5);
    }
}

TEST_CASE("two-dimensional build") {
    Grid g(2, 5);
    std::vector<double> omega(64);
    for (int i = 0; i < 64; ++i) omega[i] = std::sin(2.0 * M_PI * i / 64);
    const Kernel k = homogeneous_kernel(omega);
    const Cube q0{kBaseLattice, 2, {1, 1}};
    const YoungFunction gauge = make_power(1.0);
    const auto cert = certify_y_class(gauge, 1.0, 1.0);
    REQUIRE(cert.has_value());

    ScalarField f(g, 0.0);
    for_each_cell(g, cube_box(g, q0), [&](std::int64_t id) {
        const auto p = g.cell_center(id);
        const double dx = p[0] - 0.375, dy = p[1] - 0.375;
        f.at(id) = std::exp(-(dx * dx + dy * dy) / 0.004);
    });
    const CommutatorSpec spec = CommutatorSpec::iterated(log_symbol(g), 1);
    const auto rep = build_sparse_family(k, spec, f, q0, gauge, *cert);
    CHECK(verify_sparse(rep.family, 0.5).pass);
    CHECK(rep.max_depth <= g.J);
    for (const auto& node : rep.nodes) {
        CHECK(node.selected_cells * 2 <= node.box_cells);
        // the 2D exceptional-set budget is 2^-(n+2) = 1/16 of the node
        CHECK(static_cast<double>(node.exceptional_cells) <=
              std::ldexp(static_cast<double>(node.box_cells), -4));
    }
    const auto outcome = domination_report(k, spec, f, gauge, rep);
    CHECK_FALSE(outcome.violated);
    CHECK(std::isfinite(outcome.constant));
}
