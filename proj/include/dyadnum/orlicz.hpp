#pragma once

// Localized, normalized Luxemburg norms over cubes, with respect to Lebesgue
// measure or a weight.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dyadnum/field.hpp"
#include "dyadnum/young.hpp"

namespace dyadnum {

namespace detail {

// inf{lambda>0 : sum_i A(|v_i|/lambda) mu_i / sum_i mu_i <= 1}.
// The average is non-increasing in lambda, so a bracketed bisection in log
// space converges; the returned value is the feasible end of the bracket.
// Infinite A-values inside the bracket just read as "average above 1".
template <typename Values, typename Mus>
double luxemburg_core(const Values& value_at, const Mus& mu_at, std::int64_t count,
                      const YoungFunction& A) {
    double total_mu = 0.0, vmax = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
        const double mu = mu_at(i);
        if (!(mu >= 0.0)) throw std::invalid_argument("luxemburg: negative measure");
        total_mu += mu;
        const double v = std::fabs(value_at(i));
        if (!std::isfinite(v)) throw std::invalid_argument("luxemburg: non-finite sample");
        if (mu > 0.0) vmax = std::max(vmax, v);
    }
    if (!(total_mu > 0.0)) throw std::invalid_argument("luxemburg: cube has zero measure");
    if (vmax == 0.0) return 0.0;

    auto avg_le_one = [&](double lambda) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < count; ++i) {
            const double mu = mu_at(i);
            if (mu == 0.0) continue;
            const double a = A(std::fabs(value_at(i)) / lambda);
            if (a == kInf) return false;
            acc += a * mu;
            if (!(acc <= total_mu)) return false;
        }
        return acc <= total_mu;
    };

    const double ainv1 = A.inverse(1.0);
    double hi = (std::isfinite(ainv1) && ainv1 > 0.0) ? vmax / ainv1 : vmax;
    for (int guard = 0; guard < 1200 && !avg_le_one(hi); ++guard) hi *= 2.0;
    double lo = hi * 1e-18;
    while (lo > 5e-308 && avg_le_one(lo)) lo *= 1e-18;
    for (int i = 0; i < 80 && hi - lo > 1e-10 * hi; ++i) {
        const double mid = std::sqrt(lo * hi);
        (avg_le_one(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace detail

// ||f||_{A(mu),Q} over the in-domain cells of Q. Relative tolerance 1e-10;
// repeated calls on identical inputs are bit-identical.
inline double luxemburg_norm(const ScalarField& f, const Box& q, const YoungFunction& A,
                             Measure mu = {}) {
    const Grid& g = f.grid();
    const ClippedBox c = clip(g, q);
    if (c.empty()) throw std::invalid_argument("luxemburg_norm: cube misses the domain");
    std::vector<std::int64_t> ids;
    ids.reserve(static_cast<std::size_t>(c.cell_count()));
    for_each_cell(g, q, [&](std::int64_t id) { ids.push_back(id); });
    const double vol = g.cell_volume();
    return detail::luxemburg_core([&](std::int64_t i) { return f[ids[i]]; },
                                  [&](std::int64_t i) { return mu.density(ids[i]) * vol; },
                                  static_cast<std::int64_t>(ids.size()), A);
}

// Same, with the values of f multiplied cellwise by a factor field (used for
// the commutator thresholds || prod (b_s - <b_s>) f ||_{A,3Q}).
inline double luxemburg_norm_scaled(const ScalarField& f, const std::vector<double>& factor,
                                    const Box& q, const YoungFunction& A, Measure mu = {}) {
    const Grid& g = f.grid();
    std::vector<std::int64_t> ids;
    for_each_cell(g, q, [&](std::int64_t id) { ids.push_back(id); });
    if (ids.empty()) throw std::invalid_argument("luxemburg_norm_scaled: cube misses the domain");
    const double vol = g.cell_volume();
    return detail::luxemburg_core(
        [&](std::int64_t i) { return f[ids[i]] * factor[static_cast<std::size_t>(ids[i])]; },
        [&](std::int64_t i) { return mu.density(ids[i]) * vol; },
        static_cast<std::int64_t>(ids.size()), A);
}

// Luxemburg norm of a plain sample vector under normalized counting measure
// (used on the sphere discretization).
inline double luxemburg_norm_samples(const std::vector<double>& v, const YoungFunction& A) {
    if (v.empty()) throw std::invalid_argument("luxemburg_norm_samples: empty sample set");
    return detail::luxemburg_core([&](std::int64_t i) { return v[static_cast<std::size_t>(i)]; },
                                  [](std::int64_t) { return 1.0; },
                                  static_cast<std::int64_t>(v.size()), A);
}

}  // namespace dyadnum
