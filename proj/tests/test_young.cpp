#include <doctest.h>

#include <cmath>
#include <vector>

#include "dyadnum/young.hpp"

using namespace dyadnum;

namespace {

// Independent scalar bisection, kept separate from YoungFunction::inverse.
template <typename F>
double bisect_root(F&& f, double lo, double hi, double target, int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > target ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<YoungFunction> registered_gauges() {
    std::vector<YoungFunction> out;
    for (double r : {1.0, 1.5, 2.0, 4.0}) out.push_back(make_power(r));
    out.push_back(make_power(2.0, 0.5));
    for (double a : {0.5, 1.0, 2.0}) out.push_back(make_llog(a));
    out.push_back(make_llog_loglog(1.0, 1.5));
    out.push_back(make_exp_minus_one());
    out.push_back(make_exp_power(1.0));
    out.push_back(make_exp_power(2.0));
    return out;
}

}  // namespace

TEST_CASE("registry basics") {
    CHECK(make_power(2.0)(3.0) == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(make_llog(1.0)(0.0) == 0.0);
    CHECK_THROWS(make_power(0.5));
    CHECK_THROWS(make_llog(-1.0));
    CHECK_THROWS(make_exp_power(0.9));
    // alpha=0 degenerates to the identity gauge
    CHECK(make_llog(0.0)(7.5) == doctest::Approx(7.5).epsilon(1e-14));
}

TEST_CASE("llog inverse against scalar bisection oracle") {
    const YoungFunction A = make_llog(1.0);
    const double oracle =
        bisect_root([](double t) { return t * std::log(std::exp(1.0) + t); }, 0.0, 1.0, 1.0);
    CHECK(A.inverse(1.0) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("type invariants on the probe grid") {
    const auto probe = log_probe_grid();
    for (const auto& A : registered_gauges()) {
        CAPTURE(A.name());
        CHECK(A(0.0) == 0.0);
        // increasing and divergent on the sampled range (skip overflowed tail)
        double prev = 0.0;
        bool diverges = false;
        for (double t : probe) {
            const double v = A(t);
            if (!std::isfinite(v)) {
                diverges = true;
                break;
            }
            CHECK(v >= prev);
            if (t >= 1.0) CHECK(v > prev);
            prev = v;
        }
        CHECK((diverges || prev > 1e3));

        // convexity up to 1e-12 relative
        for (std::size_t i = 0; i + 1 < probe.size(); i += 7) {
            const double t1 = probe[i], t2 = probe[i + 1];
            for (double theta : {0.25, 0.5, 0.75}) {
                const double mixed = A(theta * t1 + (1.0 - theta) * t2);
                const double bound = theta * A(t1) + (1.0 - theta) * A(t2);
                if (!std::isfinite(bound)) continue;
                CHECK(mixed <= bound * (1.0 + 1e-12) + 1e-300);
            }
        }

        // inverse(eval(t)) = t within 1e-9 relative
        for (std::size_t i = 0; i < probe.size(); i += 5) {
            const double v = A(probe[i]);
            if (!std::isfinite(v) || v == 0.0) continue;
            CHECK(A.inverse(v) == doctest::Approx(probe[i]).epsilon(1e-9));
        }

        if (A.submultiplicative()) {
            for (double x : {0.3, 1.0, 2.5, 17.0})
                for (double y : {0.5, 4.0, 40.0})
                    CHECK(A(x * y) <= A(x) * A(y) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("closed-form conjugates") {
    // conjugate of t^2/2 is itself
    const YoungFunction half_square = make_power(2.0, 0.5);
    const YoungFunction conj = conjugate(half_square);
    for (double t : {0.1, 1.0, 3.0, 100.0})
        CHECK(conj(t) == doctest::Approx(0.5 * t * t).epsilon(1e-12));

    // conjugate of t is the two-valued limiting gauge
    const YoungFunction linf = conjugate(make_power(1.0));
    CHECK(linf(0.5) == 0.0);
    CHECK(linf(1.0) == 0.0);
    CHECK(linf(1.5) == kInf);
    CHECK_FALSE(linf.finite_valued());

    // generic pair: conjugate of t^p/p is t^p'/p'
    const double p = 3.0, pp = 1.5;
    const YoungFunction cp = conjugate(make_power(p, 1.0 / p));
    for (double t : {0.2, 1.0, 8.0})
        CHECK(cp(t) == doctest::Approx(std::pow(t, pp) / pp).epsilon(1e-12));
}

TEST_CASE("numeric conjugate matches Legendre mesh oracle") {
    const YoungFunction A = make_exp_minus_one();
    const YoungFunction Abar = conjugate(A);
    // oracle: dense mesh maximization of st - A(s)
    for (double t : {1.5, 2.0, 5.0}) {
        double best = 0.0;
        for (int i = 0; i <= 400000; ++i) {
            const double s = 40.0 * i / 400000.0;
            best = std::max(best, s * t - A(s));
        }
        CHECK(Abar(t) == doctest::Approx(best).epsilon(1e-6));
    }
    // known closed form: conj(e^t - 1)(t) = t log t - t + 1 for t > 1
    for (double t : {2.0, 10.0, 50.0})
        CHECK(Abar(t) == doctest::Approx(t * std::log(t) - t + 1.0).epsilon(1e-9));
}

TEST_CASE("conjugate duality t <= Ainv(t) Abarinv(t) <= 2t") {
    for (const auto& A : registered_gauges()) {
        CAPTURE(A.name());
        const YoungFunction Abar = conjugate(A);
        for (double t : log_probe_grid(64, 1e-3, 1e3)) {
            const double prod = A.inverse(t) * Abar.inverse(t);
            if (!std::isfinite(prod)) continue;
            CHECK(prod >= t * (1.0 - 1e-9));
            CHECK(prod <= 2.0 * t * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("numeric conjugate of llog(1) is exp-equivalent") {
    // Young-equivalence with dilation constants: E(t/c1) <= Abar(t) <= E(c2 t).
    // Below t ~ 3 the true conjugate vanishes identically, so the comparison
    // runs on [4, 600] (the upper cap keeps e^t inside double range).
    const YoungFunction A = make_llog(1.0);
    CHECK(A.equivalent_conjugate_name() == "exp_power(s=1)");
    const YoungFunction Abar = conjugate(A);
    const YoungFunction E = make_exp_power(1.0);
    double c_upper = 0.0, c_lower = 0.0;
    for (double t : log_probe_grid(60, 4.0, 600.0)) {
        const double v = Abar(t);
        REQUIRE(std::isfinite(v));
        REQUIRE(v > 0.0);
        const double einv = E.inverse(v);
        c_upper = std::max(c_upper, einv / t);
        c_lower = std::max(c_lower, t / einv);
    }
    CHECK(c_upper <= 4.0);
    CHECK(c_lower <= 4.0);
    CHECK(c_upper > 0.25);
    CHECK(c_lower > 0.25);
}

TEST_CASE("growth class certificates") {
    SUBCASE("power r lies in Y(r,r) with constant 1") {
        for (double r : {1.0, 2.0, 4.0}) {
            const auto cert = certify_y_class(make_power(r), r, r);
            REQUIRE(cert.has_value());
            CHECK(cert->c_p0 == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(cert->c_p1 == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(cert->t_cross == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("llog(alpha) lies in Y(1,1)") {
        for (double a : {0.5, 1.0, 2.0}) {
            const auto cert = certify_y_class(make_llog(a), 1.0, 1.0);
            REQUIRE(cert.has_value());
            CHECK(std::isfinite(cert->max_constant()));
        }
    }
    SUBCASE("t^2 is not in Y(3,3)") {
        CHECK_FALSE(certify_y_class(make_power(2.0), 3.0, 3.0).has_value());
    }
    SUBCASE("invalid exponent order is rejected") {
        CHECK_THROWS(certify_y_class(make_power(2.0), 3.0, 2.0));
    }
}
