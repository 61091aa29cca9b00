#include <doctest.h>

#include <cmath>

#include "dyadnum/quadrature.hpp"

using namespace dyadnum;

namespace {

// Independent long-double composite Simpson over the same u-range; a
// different code path from the adaptive quadrature under test.
long double oracle_integral(const YoungFunction& phi, const YoungFunction& gauge, int m, int l1,
                            int l2, double u_max = 690.0) {
    const int steps_per_unit = 64;
    long double total = 0.0L;
    double prev = 0.0, edge = 1.0;
    while (prev < u_max) {
        const double hi = std::min(edge, u_max);
        const int steps = steps_per_unit;
        const long double h = (static_cast<long double>(hi) - prev) / (2 * steps);
        long double acc = detail::k_phi_integrand_u(phi, gauge, m, l1, l2, prev);
        for (int i = 1; i < 2 * steps; ++i) {
            const double u = prev + static_cast<double>(h * i);
            acc += detail::k_phi_integrand_u(phi, gauge, m, l1, l2, u) * ((i % 2) ? 4.0L : 2.0L);
        }
        acc += detail::k_phi_integrand_u(phi, gauge, m, l1, l2, hi);
        total += acc * h / 3.0L;
        prev = hi;
        edge *= 2.0;
    }
    return total;
}

}  // namespace

TEST_CASE("k_phi diagonal branch") {
    SUBCASE("finite for the loglog family and eps-uniform") {
        const int m = 1;
        double prev_scaled = -1.0;
        for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
            const YoungFunction phi = make_llog_loglog(m, 1.0 + eps);
            const YoungFunction gauge = make_phi(m);
            const QuadratureResult q = k_phi(phi, gauge, m, m, m);
            REQUIRE_FALSE(q.divergent);
            CHECK(std::isfinite(q.value));
            CHECK(q.value > 0.0);
            // diagonal family: the integral is O(1/eps), so value*eps stays bounded
            const double scaled = q.value * eps;
            CHECK(scaled < 10.0);
            if (prev_scaled > 0.0) CHECK(scaled < prev_scaled * 4.0);
            prev_scaled = scaled;
        }
    }
    SUBCASE("agrees with the long-double oracle") {
        const YoungFunction phi = make_llog_loglog(1.0, 1.5);
        const YoungFunction gauge = make_phi(1);
        const QuadratureResult q = k_phi(phi, gauge, 1, 1, 1);
        const long double oracle = oracle_integral(phi, gauge, 1, 1, 1);
        CHECK(q.value == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-6));
    }
    SUBCASE("detects the divergent identity case") {
        // phi(t)=t, m=0, A_0(t)=t: integrand ~ 1/(t log(e+t)), divergent
        const QuadratureResult q = k_phi(make_power(1.0), make_power(1.0), 0, 0, 0);
        CHECK(q.divergent);
        CHECK(q.value == 0.0);
    }
    SUBCASE("integrand is non-negative wherever sampled") {
        const YoungFunction phi = make_llog_loglog(2.0, 1.25);
        const YoungFunction gauge = make_phi(2);
        for (double u : {0.0, 0.5, 1.0, 4.0, 16.0, 100.0, 600.0})
            CHECK(detail::k_phi_integrand_u(phi, gauge, 2, 2, 2, u) >= 0.0);
    }
}

TEST_CASE("k_phi off-diagonal branch") {
    // m=2, l1=1, l2=0 with the loglog family choice of phi
    const double eps = 0.5;
    const YoungFunction phi = make_llog_loglog(2.0 - 1.0 + 0.0, 1.0 + eps);
    const YoungFunction gauge = make_phi(1);  // A_{m-l1} = Phi_1
    const QuadratureResult q = k_phi(phi, gauge, 2, 1, 0);
    REQUIRE_FALSE(q.divergent);
    CHECK(std::isfinite(q.value));
    const long double oracle = oracle_integral(phi, gauge, 2, 1, 0);
    CHECK(q.value == doctest::Approx(static_cast<double>(oracle)).epsilon(1e-6));
    CHECK_THROWS(k_phi(phi, gauge, 2, 1, 1));  // l1 == l2 != m is not a branch
}

TEST_CASE("c_eps closed form") {
    SUBCASE("reference value at eps just below 1") {
        // e log^2(e+log 2e) + 4 * 2^2 at eps = 1 (limit of the formula)
        const double e = std::exp(1.0);
        const double limit = e * std::pow(std::log(e + std::log(2.0 * e)), 2.0) + 16.0;
        CHECK(c_eps(0.999999999) == doctest::Approx(limit).epsilon(1e-6));
    }
    SUBCASE("matches long-double re-evaluation to 1e-12") {
        for (double eps : {0.5, 0.25, 0.125}) {
            const long double e = expl(1.0L);
            const long double expect =
                e * powl(logl(e + logl(2.0L * e)), 1.0L + static_cast<long double>(eps)) +
                powl(2.0L, 1.0L + static_cast<long double>(eps)) *
                    powl(1.0L + 1.0L / static_cast<long double>(eps),
                         1.0L + static_cast<long double>(eps));
            CHECK(c_eps(eps) == doctest::Approx(static_cast<double>(expect)).epsilon(1e-12));
        }
    }
    SUBCASE("eps^(1+eps)-scaled values stay bounded toward 0") {
        double prev = kInf;
        for (double eps : {0.5, 0.25, 0.125}) {
            const double scaled = c_eps(eps) * std::pow(eps, 1.0 + eps);
            CHECK(scaled < 20.0);
            CHECK(scaled > 0.0);
            prev = scaled;
        }
        (void)prev;
    }
    SUBCASE("domain validation") {
        CHECK_THROWS(c_eps(0.0));
        CHECK_THROWS(c_eps(1.5));
    }
    SUBCASE("m-weighted variant grows with m") {
        CHECK(c_eps_m(0, 0.5) < c_eps_m(1, 0.5));
        CHECK(c_eps_m(1, 0.5) < c_eps_m(2, 0.5));
    }
}

TEST_CASE("beta constants") {
    SUBCASE("admissible ratio windows") {
        // l1=1: r^2 < 4 <= r^3; l1=2: r^4 < 4 <= r^5
        CHECK(beta_default_ratio(1) > std::pow(4.0, 1.0 / 3.0));
        CHECK(beta_default_ratio(1) < 2.0);
        CHECK(beta_default_ratio(2) > std::pow(4.0, 0.2));
        CHECK(beta_default_ratio(2) < std::pow(4.0, 0.25));
        CHECK_THROWS(beta_const(2, 1, 0, 2.5, make_phi(1), make_llog_loglog(1, 1.5)));
    }
    SUBCASE("empty sum is zero") {
        CHECK(detail::beta_sum(0, 1, 1.7, make_phi(1), make_llog_loglog(1, 1.5), 1, 0) == 0.0);
    }
    SUBCASE("matches a long-double term-by-term oracle") {
        const int m = 2, l1 = 1, l2 = 0, n = 1;
        const double r = 8.0 / 5.0;  // a concrete admissible ratio for l1=1
        const YoungFunction gauge = make_phi(m - l1);
        const YoungFunction phi = make_llog_loglog(m - l1 + l2, 1.5);
        const YoungFunction big_phi = make_phi(l1 - l2);
        const int terms = beta_term_count(n, r);
        long double expect = 0.0L;
        for (int k = 1; k <= terms; ++k) {
            const long double rk = powl(static_cast<long double>(r), k);
            const long double alpha =
                std::min(1.0L, expl(-rk / (2.0L * expl(1.0L)) + 1.0L));
            const double phinv = big_phi.inverse(static_cast<double>(1.0L / alpha));
            expect += powl(static_cast<long double>(r), static_cast<long double>(l2) * k) *
                      static_cast<long double>(gauge(std::pow(4.0, k))) *
                      static_cast<long double>(phi.inverse(phinv)) /
                      (powl(4.0L, k) * static_cast<long double>(phinv));
        }
        const double got = beta_const(m, l1, l2, r, gauge, phi, n);
        CHECK(got == doctest::Approx(static_cast<double>(expect)).epsilon(1e-9));
        CHECK(std::isfinite(got));
        CHECK(got > 0.0);
    }
    SUBCASE("term count matches its defining inequality") {
        for (double r : {1.6, 4.0 / 3.0}) {
            for (int n : {1, 2}) {
                const int a = beta_term_count(n, r);
                const double e = std::exp(1.0);
                // for k > a the tail condition e^{r^{k-1}/(2^n e) - 1} >= e^2 holds
                CHECK(std::exp(std::pow(r, a) / (std::ldexp(1.0, n) * e) - 1.0) >=
                      e * e * (1.0 - 1e-12));
                if (a > 0)
                    CHECK(std::exp(std::pow(r, a - 1) / (std::ldexp(1.0, n) * e) - 1.0) <
                          e * e);
            }
        }
    }
}
