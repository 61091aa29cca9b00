#include <doctest.h>

#include <cmath>

#include "dyadnum/weights.hpp"

using namespace dyadnum;

namespace {

Weight two_valued(const Grid& g, double a, double b) {
    ScalarField f(g);
    for (std::int64_t i = 0; i < g.cell_count(); ++i) f.at(i) = i < g.cell_count() / 2 ? a : b;
    return Weight(f);
}

Weight power_weight(const Grid& g, double exponent) {
    // |x - x0|^a in the first coordinate, x0 on a cell boundary so the
    // nearest centers sit h/2 away
    ScalarField f(g);
    const double x0 = 0.5 * g.side();
    for (std::int64_t i = 0; i < g.cell_count(); ++i)
        f.at(i) = std::pow(std::fabs(g.cell_center(i)[0] - x0), exponent);
    return Weight(f);
}

}  // namespace

TEST_CASE("unit weight") {
    Grid g(1, 5);
    Weight w(ScalarField(g, 1.0));
    for (double p : {1.5, 2.0, 4.0})
        CHECK(ap_constant(w, p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a1_constant(w, CubeFamily::dyadic) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fujii_wilson(w, CubeFamily::dyadic) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(ap_constant(w, 1.0));
}

TEST_CASE("two-valued weight closed form on the root") {
    Grid g(1, 6);
    const double a = 4.0, b = 0.25;
    Weight w = two_valued(g, a, b);
    const double p = 2.0;
    const double root_product =
        (0.5 * (a + b)) * (0.5 * (1.0 / a + 1.0 / b));  // p=2: dual exponent 1-p' = -1
    // scan oracle: the implementation takes a sup over many cubes, which can
    // only exceed the root value
    CHECK(ap_constant(w, p) >= root_product * (1.0 - 1e-12));
    double brute = 0.0;
    for_each_family_box(g, CubeFamily::shifted, [&](int, const Box& box) {
        const ClippedBox c = clip(g, box);
        if (c.empty()) return;
        double sw = 0.0, sd = 0.0;
        for_each_cell(g, box, [&](std::int64_t id) {
            sw += w[id];
            sd += 1.0 / w[id];
        });
        const double count = static_cast<double>(c.cell_count());
        brute = std::max(brute, (sw / count) * (sd / count));
    });
    CHECK(ap_constant(w, p) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("constants are scale invariant") {
    Grid g(1, 5);
    Weight w = power_weight(g, 0.5);
    ScalarField doubledf(g);
    for (std::int64_t i = 0; i < g.cell_count(); ++i) doubledf.at(i) = 2.0 * w[i];
    Weight doubled(doubledf);
    CHECK(ap_constant(doubled, 2.0) == doctest::Approx(ap_constant(w, 2.0)).epsilon(1e-13));
    CHECK(a1_constant(doubled) == doctest::Approx(a1_constant(w)).epsilon(1e-13));
    CHECK(fujii_wilson(doubled) == doctest::Approx(fujii_wilson(w)).epsilon(1e-13));
    CHECK(weak_ainfty(doubled) == doctest::Approx(weak_ainfty(w)).epsilon(1e-13));
}

TEST_CASE("a_p constants do not grow with p on the corpus") {
    Grid g(1, 5);
    for (const Weight& w : {power_weight(g, 0.5), power_weight(g, -0.5), two_valued(g, 3.0, 0.5)}) {
        double prev = kInf;
        for (double p : {1.5, 2.0, 3.0, 4.0}) {
            const double ap = ap_constant(w, p);
            CHECK(ap <= prev * (1.0 + 1e-10));
            CHECK(ap >= 1.0 - 1e-10);  // discrete Jensen
            prev = ap;
        }
    }
}

TEST_CASE("power weight constants are resolution stable") {
    const double a1_coarse = a1_constant(power_weight(Grid(1, 6), -0.5));
    const double a1_fine = a1_constant(power_weight(Grid(1, 7), -0.5));
    CHECK(std::isfinite(a1_coarse));
    // the regularized singular cell keeps the constant within +-20% per level
    CHECK(a1_fine == doctest::Approx(a1_coarse).epsilon(0.25));
}

TEST_CASE("subset decay fit") {
    Grid g(1, 6);
    SUBCASE("unit weight satisfies the bound with any exponent") {
        Weight w(ScalarField(g, 1.0));
        const CheckReport r = subset_decay_check(w, 400);
        CHECK(r.pass);
        // w(E)/w(Q) = |E|/|Q| <= 2 (|E|/|Q|)^s for s <= 1, so the fit stays small
        CHECK(r.empirical_constant <= 1.0 + 1e-9);
    }
    SUBCASE("power weight fit is finite over many trials") {
        Weight w = power_weight(g, -0.5);
        const CheckReport r = subset_decay_check(w, 10000);
        CHECK(r.pass);
        CHECK(std::isfinite(r.empirical_constant));
    }
}

TEST_CASE("reverse Holder inequality (weak A_inf exponent)") {
    SUBCASE("unit weight passes with ratio 1/2") {
        Grid g(1, 5);
        Weight w(ScalarField(g, 1.0));
        const CheckReport r = reverse_holder_check(w);
        CHECK(r.pass);
        CHECK(r.empirical_constant == doctest::Approx(0.5).epsilon(1e-9));
    }
    SUBCASE("two-valued weight passes") {
        Grid g(1, 6);
        const CheckReport r = reverse_holder_check(two_valued(g, 2.0, 0.5));
        CHECK(r.pass);
    }
    SUBCASE("spike weight is reported, not asserted") {
        Grid g(1, 6);
        ScalarField f(g, 1.0);
        f.at(5) = 1e4;
        const CheckReport r = reverse_holder_check(Weight(f));
        CHECK(std::isfinite(r.empirical_constant));  // diagnostic only
    }
}

TEST_CASE("weight constants bundle") {
    Grid g(1, 5);
    Weight w = power_weight(g, 0.5);
    const WeightConstants k = weight_constants(w);
    CHECK(k.a_p >= 1.0);
    CHECK(k.a_1 >= 1.0);
    CHECK(k.a_inf_fw >= 1.0 - 1e-12);
    CHECK(k.a_inf_weak > 0.0);
    CHECK(k.rh_exponent == doctest::Approx(1.0 + 1.0 / (2.0 * k.a_inf_weak)));
    CHECK(k.tau == 2.0);
}
