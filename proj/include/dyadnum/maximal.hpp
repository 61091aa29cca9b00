#pragma once

// Hardy-Littlewood, delta, sharp, and Orlicz maximal operators. All variants
// take the supremum over the base dyadic cubes (CubeFamily::dyadic) or over
// those plus the 3^n shifted lattices (CubeFamily::shifted), which is the
// artifact's stand-in for "all cubes". Averages are over the in-domain part
// of each cube.

#include <cmath>
#include <cstdint>
#include <vector>

#include "dyadnum/field.hpp"
#include "dyadnum/orlicz.hpp"

namespace dyadnum {

namespace detail {

// Sweeps every family box once, computes score(box) and spreads it to the
// covered cells as a running max. O(N * levels * lattices) cell visits.
template <typename Score>
ScalarField box_max_sweep(const Grid& g, CubeFamily family, Score&& score) {
    ScalarField out(g, 0.0);
    for_each_family_box(g, family, [&](int, const Box& box) {
        const ClippedBox c = clip(g, box);
        if (c.empty()) return;
        const double v = score(box, c);
        for_each_cell(g, box, [&](std::int64_t id) {
            if (v > out[id]) out.at(id) = v;
        });
    });
    return out;
}

}  // namespace detail

// M f: per-cell sup of averages of |f| over cubes containing the cell.
inline ScalarField maximal(const ScalarField& f, CubeFamily family = CubeFamily::shifted) {
    const Grid& g = f.grid();
    return detail::box_max_sweep(g, family, [&](const Box&, const ClippedBox& c) {
        double s = 0.0;
        if (g.n == 1) {
            for (int x = c.x0; x < c.x1; ++x) s += std::fabs(f[x]);
        } else {
            const int N = g.cells_per_side();
            for (int y = c.y0; y < c.y1; ++y)
                for (int x = c.x0; x < c.x1; ++x)
                    s += std::fabs(f[static_cast<std::int64_t>(y) * N + x]);
        }
        return s / static_cast<double>(c.cell_count());
    });
}

// M_delta f = (M |f|^delta)^(1/delta).
inline ScalarField m_delta(const ScalarField& f, double delta,
                           CubeFamily family = CubeFamily::shifted) {
    if (!(delta > 0.0)) throw std::invalid_argument("m_delta: delta must be positive");
    const Grid& g = f.grid();
    if (delta == 1.0) return maximal(f, family);
    ScalarField powed(g);
    for (std::int64_t i = 0; i < f.size(); ++i)
        powed.at(i) = std::pow(std::fabs(f[i]), delta);
    ScalarField m = maximal(powed, family);
    ScalarField out(g);
    for (std::int64_t i = 0; i < m.size(); ++i) out.at(i) = std::pow(m[i], 1.0 / delta);
    return out;
}

// Sharp maximal function in the oscillation-about-the-mean form. Samples are
// anchored at the first cell so constant fields map to exactly zero.
inline ScalarField m_sharp(const ScalarField& f, CubeFamily family = CubeFamily::shifted) {
    const Grid& g = f.grid();
    return detail::box_max_sweep(g, family, [&](const Box&, const ClippedBox& c) {
        auto scan = [&](auto&& fn) {
            if (g.n == 1) {
                for (int x = c.x0; x < c.x1; ++x) fn(static_cast<std::int64_t>(x));
            } else {
                const int N = g.cells_per_side();
                for (int y = c.y0; y < c.y1; ++y)
                    for (int x = c.x0; x < c.x1; ++x) fn(static_cast<std::int64_t>(y) * N + x);
            }
        };
        const double anchor = f[g.cell_id(c.x0, c.y0)];
        double s = 0.0;
        scan([&](std::int64_t id) { s += f[id] - anchor; });
        const double mean = s / static_cast<double>(c.cell_count());
        double osc = 0.0;
        scan([&](std::int64_t id) { osc += std::fabs(f[id] - anchor - mean); });
        return osc / static_cast<double>(c.cell_count());
    });
}

// M^#_delta f = (M^# |f|^delta)^(1/delta), used with 0 < delta < 1.
inline ScalarField m_sharp_delta(const ScalarField& f, double delta,
                                 CubeFamily family = CubeFamily::shifted) {
    if (!(delta > 0.0)) throw std::invalid_argument("m_sharp_delta: delta must be positive");
    const Grid& g = f.grid();
    ScalarField powed(g);
    for (std::int64_t i = 0; i < f.size(); ++i)
        powed.at(i) = delta == 1.0 ? std::fabs(f[i]) : std::pow(std::fabs(f[i]), delta);
    ScalarField m = m_sharp(powed, family);
    ScalarField out(g);
    for (std::int64_t i = 0; i < m.size(); ++i)
        out.at(i) = delta == 1.0 ? m[i] : std::pow(m[i], 1.0 / delta);
    return out;
}

// Orlicz maximal M_A f: per-cell sup of Luxemburg norms. Each cube's norm is
// computed once per sweep.
inline ScalarField orlicz_maximal(const ScalarField& f, const YoungFunction& A,
                                  CubeFamily family = CubeFamily::shifted) {
    const Grid& g = f.grid();
    return detail::box_max_sweep(
        g, family, [&](const Box& box, const ClippedBox&) { return luxemburg_norm(f, box, A); });
}

// M iterated k times.
inline ScalarField maximal_iterated(const ScalarField& f, int k,
                                    CubeFamily family = CubeFamily::shifted) {
    if (k < 1) throw std::invalid_argument("maximal_iterated: k must be >= 1");
    ScalarField out = maximal(f, family);
    for (int i = 1; i < k; ++i) out = maximal(out, family);
    return out;
}

}  // namespace dyadnum
