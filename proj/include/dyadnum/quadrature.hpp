#pragma once

// Explicit constants of the weak type estimates: the K_phi integrals, the
// epsilon constant C_eps, and the finite sums beta_{m,l1,l2}.
//
// The K_phi integrands live on [1, inf) with log-scale structure, so the
// quadrature substitutes u = log t and works through doubling u-segments up
// to t ~ 1e299 (the representable range). Slowly divergent integrands are
// detected by non-decaying segment contributions rather than by running out
// of range.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dyadnum/young.hpp"

namespace dyadnum {

struct QuadratureResult {
    double value = 0.0;
    double t_max = 0.0;          // truncation point in the original variable
    double tail_estimate = 0.0;  // geometric extrapolation of the remainder
    bool converged = false;      // tail_estimate <= 1e-6 * value
    bool divergent = false;      // no value reported
};

namespace detail {

// Adaptive Simpson with Richardson acceptance.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate_segment(F&& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return adaptive_simpson(f, a, b, fa, fm, fb, tol, 40);
}

// Integrand of K_phi in the variable u = log t (already multiplied by the
// Jacobian e^u). Both branches of the constant are covered:
//   l1 = l2 = m:  phi^{-1}(t) A(log^2(e+t)) / (t^2 log^3(e+t))
//   otherwise:    phi^{-1}(Phi_{l1-l2}^{-1}(t)) A(log^{2l1+1}(e+t)) / (t^2 log^{l1+2}(e+t))
// Evaluated as ratios so nothing overflows before t ~ 1e299.
inline double k_phi_integrand_u(const YoungFunction& phi, const YoungFunction& gauge, int m,
                                int l1, int l2, double u) {
    const double t = std::exp(u);
    const double L = std::log(std::exp(1.0) + t);
    if (l1 == m && l2 == m) {
        const double ratio = phi.inverse(t) / t;
        return ratio * gauge(L * L) / (L * L * L);
    }
    const YoungFunction big_phi = make_phi(l1 - l2);
    const double s = big_phi.inverse(t);
    const double ratio = phi.inverse(s) / t;
    return ratio * gauge(std::pow(L, 2.0 * l1 + 1.0)) / std::pow(L, l1 + 2.0);
}

}  // namespace detail

// K_phi integral of the weak type constant, without the dimensional offset
// c_n (reported separately as "not computed") and without beta (see
// beta_const). phi is the Young function of the family; gauge is A_m in the
// diagonal branch and A_{m-l1} otherwise.
inline QuadratureResult k_phi(const YoungFunction& phi, const YoungFunction& gauge, int m,
                              int l1, int l2) {
    const bool diagonal = (l1 == m && l2 == m);
    if (!diagonal && !(0 <= l2 && l2 < l1 && l1 <= m))
        throw std::invalid_argument("k_phi: branch must be (m,m) or 0 <= l2 < l1 <= m");

    const YoungFunction big_phi = diagonal ? make_power(1.0) : make_phi(l1 - l2);
    auto f = [&](double u) {
        const double t = std::exp(u);
        const double L = std::log(std::exp(1.0) + t);
        if (diagonal) return phi.inverse(t) / t * gauge(L * L) / (L * L * L);
        const double s = big_phi.inverse(t);
        return phi.inverse(s) / t * gauge(std::pow(L, 2.0 * l1 + 1.0)) /
               std::pow(L, l1 + 2.0);
    };

    QuadratureResult out;
    const double u_cap = 690.0;  // t = e^u stays inside double range
    std::vector<double> doubling_segments;
    double total = 0.0;
    double prev_edge = 0.0, edge = 1.0;
    while (prev_edge < u_cap) {
        const double hi = std::min(edge, u_cap);
        const double seg = detail::integrate_segment(f, prev_edge, hi, 1e-12 + 1e-9 * total);
        total += seg;
        if (prev_edge >= 1.0 && hi == edge) doubling_segments.push_back(seg);  // full segments only
        prev_edge = hi;
        edge *= 2.0;
    }
    out.t_max = std::exp(u_cap);

    // divergence: the last doubling segments refuse to decay
    const std::size_t ns = doubling_segments.size();
    if (ns >= 3) {
        int sticky = 0;
        for (std::size_t i = ns - 3; i < ns; ++i) {
            const double prev = doubling_segments[i - 1];
            if (prev > 0.0 && doubling_segments[i] / prev >= 0.95) ++sticky;
        }
        if (sticky == 3) {
            out.divergent = true;
            return out;
        }
    }
    out.value = total;
    if (ns >= 2 && doubling_segments[ns - 2] > 0.0) {
        const double r = doubling_segments[ns - 1] / doubling_segments[ns - 2];
        out.tail_estimate =
            r < 1.0 ? doubling_segments[ns - 1] * r / (1.0 - r) : kInf;
    }
    out.converged = out.tail_estimate <= 1e-6 * out.value;
    return out;
}

// C_eps = e log^{1+eps}(e+log(2e)) + 2^{1+eps} (1+1/eps)^{1+eps}, 0 < eps < 1.
inline double c_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("c_eps: eps must be in (0,1)");
    const double e = std::exp(1.0);
    return e * std::pow(std::log(e + std::log(2.0 * e)), 1.0 + eps) +
           std::pow(2.0, 1.0 + eps) * std::pow(1.0 + 1.0 / eps, 1.0 + eps);
}

// Variant carrying the log^m(2e) factor from the pointwise comparison of
// M_{L(logL)^m(loglogL)^{1+eps}} against M_{L(logL)^{m+eps}}.
inline double c_eps_m(int m, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("c_eps_m: eps must be in (0,1)");
    const double e = std::exp(1.0);
    return e * std::pow(std::log(2.0 * e), static_cast<double>(m)) *
               std::pow(std::log(e + std::log(2.0 * e)), 1.0 + eps) +
           std::pow(2.0, 1.0 + eps) * std::pow(1.0 + 1.0 / eps, 1.0 + eps);
}

// Admissible ratio range 1 < r^{2 l1} < 4 <= r^{2 l1 + 1}; the default sits at
// the geometric mean of the endpoints.
inline double beta_default_ratio(int l1) {
    if (l1 < 1) throw std::invalid_argument("beta_default_ratio: l1 must be >= 1");
    const double lo = std::pow(4.0, 1.0 / (2.0 * l1 + 1.0));
    const double hi = std::pow(4.0, 1.0 / (2.0 * l1));
    return std::sqrt(lo * hi);
}

// Number of summands: smallest a with e^{r^{k-1}/(2^n e) - 1} >= e^2 for all
// k > a, i.e. r^a >= 3 * 2^n * e.
inline int beta_term_count(int n, double r) {
    if (!(r > 1.0)) throw std::invalid_argument("beta_term_count: r must exceed 1");
    const double target = 3.0 * std::ldexp(1.0, n) * std::exp(1.0);
    return static_cast<int>(std::ceil(std::log(target) / std::log(r)));
}

namespace detail {

inline double beta_sum(int l2, int l1, double r, const YoungFunction& gauge,
                       const YoungFunction& phi, int n, int terms) {
    const YoungFunction big_phi = make_phi(l1 - l2);
    const double e = std::exp(1.0);
    double total = 0.0;
    double rk = 1.0;
    for (int k = 1; k <= terms; ++k) {
        rk *= r;
        const double alpha = std::min(1.0, std::exp(-rk / (std::ldexp(1.0, n) * e) + 1.0));
        const double inv_alpha = 1.0 / alpha;
        const double phi_inv = big_phi.inverse(inv_alpha);
        total += std::pow(r, static_cast<double>(l2) * k) * gauge(std::pow(4.0, k)) *
                 phi.inverse(phi_inv) / (std::pow(4.0, k) * phi_inv);
    }
    return total;
}

}  // namespace detail

// beta_{m,l1,l2} as printed: finite sum over k = 1..a_{n,l1} of
//   r^{l2 k} A_{m-l1}(4^k) phi^{-1}(Phi_{l1-l2}^{-1}(1/alpha_{r,k}))
//   / (4^k Phi_{l1-l2}^{-1}(1/alpha_{r,k})),
// alpha_{r,k} = min{1, e^{-r^k/(2^n e) + 1}}.
inline double beta_const(int m, int l1, int l2, double r, const YoungFunction& gauge,
                         const YoungFunction& phi, int n = 1) {
    if (!(0 <= l2 && l2 < l1 && l1 <= m))
        throw std::invalid_argument("beta_const: need 0 <= l2 < l1 <= m");
    const double r2l1 = std::pow(r, 2.0 * l1);
    if (!(1.0 < r2l1 && r2l1 < 4.0 && 4.0 <= r2l1 * r))
        throw std::invalid_argument("beta_const: ratio outside the admissible range");
    return detail::beta_sum(l2, l1, r, gauge, phi, n, beta_term_count(n, r));
}

}  // namespace dyadnum
