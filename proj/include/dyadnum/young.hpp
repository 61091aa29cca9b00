#pragma once

// Young function calculus: evaluation, inversion, conjugation and growth
// class certification. Everything here is scalar; Luxemburg norms over cubes
// live in orlicz.hpp.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadnum/common.hpp"

namespace dyadnum {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A convex increasing gauge A:[0,inf)->[0,inf] with A(0)=0 and A(t)->inf.
// Values are immutable after construction; all members are pure.
class YoungFunction {
public:
    using Eval = std::function<double(double)>;

    YoungFunction() = default;
    YoungFunction(std::string name, Eval eval) : name_(std::move(name)), eval_(std::move(eval)) {}

    const std::string& name() const { return name_; }
    double operator()(double t) const { return eval_(t); }

    // inf{y >= 0 : A(y) > x}. Uses the closed form when registered, otherwise
    // monotone bisection with a doubling bracket.
    double inverse(double x) const {
        if (inverse_) return inverse_(x);
        if (!(x >= 0.0)) throw std::invalid_argument("YoungFunction::inverse: negative argument");
        if (x == 0.0) {
            // left edge of {A > 0}
            double lo = 0.0, hi = 1.0;
            while (eval_(hi) <= 0.0 && hi < 1e300) hi *= 2.0;
            if (eval_(hi) <= 0.0) return kInf;
            for (int i = 0; i < 200; ++i) {
                const double mid = 0.5 * (lo + hi);
                (eval_(mid) > 0.0 ? hi : lo) = mid;
            }
            return hi;
        }
        double hi = 1.0;
        while (eval_(hi) <= x && hi < 1e300) hi *= 2.0;
        if (eval_(hi) <= x) return kInf;
        double lo = 0.0;
        for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
            const double mid = lo + 0.5 * (hi - lo);
            (eval_(mid) > x ? hi : lo) = mid;
        }
        return hi;
    }

    bool submultiplicative() const { return submultiplicative_; }
    bool finite_valued() const { return finite_valued_; }

    // Builds the exact closed-form conjugate partner, when one is registered.
    // Lazy so that mutually conjugate registrations do not recurse.
    bool has_exact_conjugate() const { return static_cast<bool>(conjugate_factory_); }
    YoungFunction exact_conjugate() const { return conjugate_factory_(); }

    // Conjugate known only up to Young-equivalence (dilation constants), e.g.
    // the complement of t log^a(e+t) versus exp(t^(1/a))-1.
    const std::string& equivalent_conjugate_name() const { return equivalent_conjugate_; }

    struct Builder;

private:
    std::string name_ = "unset";
    Eval eval_;
    Eval inverse_;
    std::function<YoungFunction()> conjugate_factory_;
    std::string equivalent_conjugate_;
    bool submultiplicative_ = false;
    bool finite_valued_ = true;
    friend struct Builder;
};

struct YoungFunction::Builder {
    YoungFunction f;
    Builder(std::string name, Eval eval) { f = YoungFunction(std::move(name), std::move(eval)); }
    Builder& inverse(Eval inv) {
        f.inverse_ = std::move(inv);
        return *this;
    }
    Builder& conjugate(std::function<YoungFunction()> factory) {
        f.conjugate_factory_ = std::move(factory);
        return *this;
    }
    Builder& equivalent_conjugate(std::string n) {
        f.equivalent_conjugate_ = std::move(n);
        return *this;
    }
    Builder& submultiplicative(bool v) {
        f.submultiplicative_ = v;
        return *this;
    }
    Builder& finite_valued(bool v) {
        f.finite_valued_ = v;
        return *this;
    }
    YoungFunction build() { return f; }
};

// ---------------------------------------------------------------------------
// Registry of named gauges.
// ---------------------------------------------------------------------------

// Limiting conjugate of A(t)=t: 0 on [0,1], +inf beyond. Its Luxemburg norm
// is the grid sup norm.
inline YoungFunction make_linf_gauge() {
    return YoungFunction::Builder(
               "linf_gauge", [](double t) { return t <= 1.0 ? 0.0 : kInf; })
        .inverse([](double) { return 1.0; })
        .finite_valued(false)
        .build();
}

YoungFunction make_power(double r, double scale = 1.0);

namespace detail {
inline std::function<YoungFunction()> power_conjugate(double r, double scale) {
    if (r == 1.0 && scale == 1.0) return [] { return make_linf_gauge(); };
    if (r <= 1.0) return {};
    // conjugate of a t^r is c t^r' with c = (a r)^(-1/(r-1)) (1 - 1/r)
    const double rp = r / (r - 1.0);
    const double c = std::pow(scale * r, -1.0 / (r - 1.0)) * (1.0 - 1.0 / r);
    return [rp, c] { return make_power(rp, c); };
}
}  // namespace detail

inline YoungFunction make_power(double r, double scale) {
    if (r < 1.0) throw std::invalid_argument("make_power: exponent must satisfy r >= 1");
    if (!(scale > 0.0)) throw std::invalid_argument("make_power: scale must be positive");
    std::string name = "power(r=" + format_double(r) +
                       (scale != 1.0 ? ",scale=" + format_double(scale) : "") + ")";
    return YoungFunction::Builder(
               std::move(name), [r, scale](double t) { return scale * std::pow(t, r); })
        .inverse([r, scale](double x) { return std::pow(x / scale, 1.0 / r); })
        .conjugate(detail::power_conjugate(r, scale))
        .submultiplicative(scale == 1.0)
        .build();
}

// t log^a(e+t); a=0 falls back to power(1).
inline YoungFunction make_llog(double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("make_llog: alpha must be non-negative");
    if (alpha == 0.0) return make_power(1.0);
    std::string conj_hint = "exp_power(s=" + format_double(1.0 / alpha) + ")";
    return YoungFunction::Builder(
               "llog(alpha=" + format_double(alpha) + ")",
               [alpha](double t) { return t * std::pow(std::log(std::exp(1.0) + t), alpha); })
        .equivalent_conjugate(std::move(conj_hint))
        .submultiplicative(true)
        .build();
}

// t log^a(e+t) log^b(e+log(e+t)).
inline YoungFunction make_llog_loglog(double alpha, double beta) {
    if (alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("make_llog_loglog: exponents must be non-negative");
    if (beta == 0.0) return make_llog(alpha);
    return YoungFunction::Builder(
               "llog_loglog(alpha=" + format_double(alpha) + ",beta=" + format_double(beta) + ")",
               [alpha, beta](double t) {
                   const double e = std::exp(1.0);
                   const double l = std::log(e + t);
                   return t * std::pow(l, alpha) * std::pow(std::log(e + l), beta);
               })
        .submultiplicative(true)
        .build();
}

// Phi_m(t) = t log^m(e+t), the scale of the weak type estimates.
inline YoungFunction make_phi(int m) { return make_llog(static_cast<double>(m)); }

// C(t) = e^t - 1. Not submultiplicative (super-exponential in products).
inline YoungFunction make_exp_minus_one() {
    return YoungFunction::Builder("exp_minus_one", [](double t) { return std::expm1(t); })
        .inverse([](double x) { return std::log1p(x); })
        .build();
}

// e^(t^s) - 1, s >= 1.
inline YoungFunction make_exp_power(double s) {
    if (s < 1.0) throw std::invalid_argument("make_exp_power: s must satisfy s >= 1");
    return YoungFunction::Builder(
               "exp_power(s=" + format_double(s) + ")",
               [s](double t) { return std::expm1(std::pow(t, s)); })
        .inverse([s](double x) { return std::pow(std::log1p(x), 1.0 / s); })
        .build();
}

inline YoungFunction make_custom(std::string name, YoungFunction::Eval eval) {
    return YoungFunction::Builder(std::move(name), std::move(eval)).build();
}

// ---------------------------------------------------------------------------
// Conjugation.
// ---------------------------------------------------------------------------

namespace detail {

// sup_{s>0} (s t - A(s)) for one t. g is concave in s, so a doubling bracket
// followed by golden-section refinement is exact up to roundoff.
inline double legendre_transform(const YoungFunction::Eval& A, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("legendre_transform: negative argument");
    if (t == 0.0) return 0.0;
    auto g = [&](double s) { return s * t - A(s); };
    double hi = 1.0;
    double prev = g(hi);
    double best = std::max(0.0, prev);
    // grow until g decreases; the maximizer then lies in [0, hi]
    bool bracketed = false;
    while (hi < 1e280) {
        hi *= 2.0;
        const double gn = g(hi);
        best = std::max(best, gn);
        if (!(gn >= prev)) {
            bracketed = true;
            break;
        }
        prev = gn;
    }
    if (!bracketed) return kInf;
    double lo = 0.0;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double g1 = g(x1), g2 = g(x2);
    for (int i = 0; i < 160 && hi - lo > 1e-14 * hi; ++i) {
        if (g1 < g2) {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + phi * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - phi * (hi - lo);
            g1 = g(x1);
        }
        best = std::max(best, std::max(g1, g2));
    }
    return std::max(0.0, best);
}

}  // namespace detail

// Complementary function conj_A(t) = sup_s (st - A(s)). Returns the registered
// closed form when available, otherwise a numeric Legendre transform.
inline YoungFunction conjugate(const YoungFunction& A) {
    if (A.has_exact_conjugate()) return A.exact_conjugate();
    auto eval = A;  // capture by value; YoungFunction is immutable
    return YoungFunction::Builder(
               "conj(" + A.name() + ")",
               [eval](double t) { return detail::legendre_transform(
                                      [&eval](double s) { return eval(s); }, t); })
        .build();
}

// ---------------------------------------------------------------------------
// Probe grids and growth class certification.
// ---------------------------------------------------------------------------

inline std::vector<double> log_probe_grid(int points = 512, double lo = 1e-6, double hi = 1e6) {
    std::vector<double> grid(points);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points; ++i)
        grid[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
    return grid;
}

// Certificate that A lies in the growth class Y(p0,p1):
//   t^p0 <= c_p0 A(t) for t > t_A   and   t^p1 <= c_p1 A(t) for t <= t_A.
struct YClassCertificate {
    double p0 = 1.0, p1 = 1.0;
    double c_p0 = 1.0, c_p1 = 1.0;
    double t_cross = 1.0;
    double max_constant() const { return std::max(c_p0, c_p1); }
};

namespace detail {

// true when the ratio sequence keeps growing toward the end of the probe
// range, i.e. no finite constant exists in the limit
inline bool diverges_at_end(const std::vector<double>& ratio) {
    const std::size_t n = ratio.size();
    if (n < 16) return false;
    const double tail = ratio[n - 1];
    const double mid = ratio[n - 1 - n / 8];
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (ratio[i] > ratio[argmax]) argmax = i;
    return argmax == n - 1 && tail > 1.2 * mid;
}

}  // namespace detail

// Searches crossover points on a log grid and returns the certificate with
// minimal max(c_p0, c_p1), or nullopt when the growth comparison diverges.
inline std::optional<YClassCertificate> certify_y_class(const YoungFunction& A, double p0,
                                                        double p1, int probe_budget = 512) {
    if (!(1.0 <= p0 && p0 <= p1)) throw std::invalid_argument("certify_y_class: need 1<=p0<=p1");
    std::vector<double> ts = log_probe_grid(probe_budget);
    ts.push_back(1.0);
    std::sort(ts.begin(), ts.end());
    const std::size_t n = ts.size();
    std::vector<double> r0(n), r1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = A(ts[i]);
        if (!(a > 0.0)) {
            r0[i] = r1[i] = kInf;
            continue;
        }
        r0[i] = std::pow(ts[i], p0) / a;
        r1[i] = std::pow(ts[i], p1) / a;
    }
    // divergence at the top kills the p0 branch, at the bottom the p1 branch
    if (detail::diverges_at_end(r0)) return std::nullopt;
    std::vector<double> r1rev(r1.rbegin(), r1.rend());
    if (detail::diverges_at_end(r1rev)) return std::nullopt;

    std::optional<YClassCertificate> best;
    for (std::size_t cut = 0; cut < n; ++cut) {
        if (ts[cut] < 1.0) continue;  // t_A >= 1 by definition
        double c0 = 0.0, c1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (ts[i] > ts[cut])
                c0 = std::max(c0, r0[i]);
            else
                c1 = std::max(c1, r1[i]);
        }
        if (!std::isfinite(c0) || !std::isfinite(c1)) continue;
        if (!best || std::max(c0, c1) < best->max_constant() * (1.0 - 1e-12)) {
            YClassCertificate cert;
            cert.p0 = p0;
            cert.p1 = p1;
            cert.c_p0 = c0;
            cert.c_p1 = c1;
            cert.t_cross = ts[cut];
            best = cert;
        }
    }
    return best;
}

// sup over a probe grid of prod_i A_i^{-1}(t) / A_0^{-1}(t); the D of the
// multilinear Holder inequality.
inline double holder_product_constant(const std::vector<const YoungFunction*>& factors,
                                      const YoungFunction& target,
                                      const std::vector<double>& probe) {
    double d = 0.0;
    for (double t : probe) {
        double prod = 1.0;
        for (const auto* f : factors) prod *= f->inverse(t);
        const double denom = target.inverse(t);
        if (denom > 0.0 && std::isfinite(prod)) d = std::max(d, prod / denom);
    }
    return d;
}

}  // namespace dyadnum
