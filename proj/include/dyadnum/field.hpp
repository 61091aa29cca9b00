#pragma once

// Cell-averaged scalar fields, weights, quadrature, distribution functions
// and BMO norms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dyadnum/grid.hpp"

namespace dyadnum {

class ScalarField {
public:
    ScalarField() = default;
    ScalarField(const Grid& g, double fill = 0.0)
        : grid_(g), values_(static_cast<std::size_t>(g.cell_count()), fill) {}
    ScalarField(const Grid& g, std::vector<double> values) : grid_(g), values_(std::move(values)) {
        if (static_cast<std::int64_t>(values_.size()) != g.cell_count())
            throw std::invalid_argument("ScalarField: value count does not match grid");
        for (double v : values_)
            if (!std::isfinite(v)) throw std::invalid_argument("ScalarField: non-finite sample");
    }

    const Grid& grid() const { return grid_; }
    std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
    double operator[](std::int64_t i) const { return values_[static_cast<std::size_t>(i)]; }
    double& at(std::int64_t i) { return values_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return values_; }

    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::fabs(v));
        return m;
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

// Strictly positive field. Positivity makes w(Q) > 0 for every cube.
class Weight {
public:
    explicit Weight(ScalarField f) : field_(std::move(f)) {
        for (std::int64_t i = 0; i < field_.size(); ++i)
            if (!(field_[i] > 0.0))
                throw std::invalid_argument("Weight: samples must be strictly positive");
    }

    const Grid& grid() const { return field_.grid(); }
    const ScalarField& field() const { return field_; }
    double operator[](std::int64_t i) const { return field_[i]; }

private:
    ScalarField field_;
};

// Lebesgue measure by default; dmu = w dx when a weight is attached.
struct Measure {
    const Weight* weight = nullptr;
    double density(std::int64_t cell) const { return weight ? (*weight)[cell] : 1.0; }
};

namespace detail {

// Canonical pairwise reduction over the in-domain cells of a box: the box is
// split along its longest axis at the largest power-of-two offset, so for a
// dyadic cube the two halves are exactly its dyadic children and the parent
// sum equals the sum of the child sums bit for bit.
template <typename Term>
double box_reduce(const Grid& g, int x0, int x1, int y0, int y1, Term&& term) {
    const std::int64_t nx = x1 - x0, ny = y1 - y0;
    if (nx <= 0 || ny <= 0) return 0.0;
    if (nx == 1 && ny == 1) return term(g.cell_id(x0, y0));
    auto half = [](std::int64_t len) {
        std::int64_t p = 1;
        while (p * 2 < len) p *= 2;
        return p;
    };
    if (nx >= ny) {
        const int mid = x0 + static_cast<int>(half(nx));
        return box_reduce(g, x0, mid, y0, y1, term) + box_reduce(g, mid, x1, y0, y1, term);
    }
    const int mid = y0 + static_cast<int>(half(ny));
    return box_reduce(g, x0, x1, y0, mid, term) + box_reduce(g, x0, x1, mid, y1, term);
}

}  // namespace detail

// Cell-sum quadrature of f over the in-domain part of Q against dmu.
inline double integrate(const ScalarField& f, const Box& q, Measure mu = {}) {
    const Grid& g = f.grid();
    const ClippedBox c = clip(g, q);
    if (c.empty()) return 0.0;
    const double vol = g.cell_volume();
    return detail::box_reduce(g, c.x0, c.x1, c.y0, c.y1,
                              [&](std::int64_t id) { return f[id] * mu.density(id) * vol; });
}

inline double measure_of(const Grid& g, const Box& q, Measure mu = {}) {
    const ClippedBox c = clip(g, q);
    if (c.empty()) return 0.0;
    if (!mu.weight) return static_cast<double>(c.cell_count()) * g.cell_volume();
    const double vol = g.cell_volume();
    return detail::box_reduce(g, c.x0, c.x1, c.y0, c.y1,
                              [&](std::int64_t id) { return mu.density(id) * vol; });
}

// Average of f over the in-domain cells of Q.
inline double average(const ScalarField& f, const Box& q, Measure mu = {}) {
    const double m = measure_of(f.grid(), q, mu);
    if (m <= 0.0) throw std::invalid_argument("average: cube has no in-domain mass");
    return integrate(f, q, mu) / m;
}

// Per-level integrals of a field over the base dyadic cubes, built bottom-up
// so that a parent entry is bit-exactly the sum of its children's entries.
class DyadicSums {
public:
    explicit DyadicSums(const ScalarField& f) : grid_(f.grid()) {
        levels_.resize(grid_.J + 1);
        const int N = grid_.cells_per_side();
        const double vol = grid_.cell_volume();
        auto& leaf = levels_[grid_.J];
        leaf.resize(static_cast<std::size_t>(grid_.cell_count()));
        for (std::int64_t i = 0; i < grid_.cell_count(); ++i)
            leaf[static_cast<std::size_t>(i)] = f[i] * vol;
        (void)N;
        for (int level = grid_.J - 1; level >= 0; --level) {
            const int count = 1 << level;
            auto& cur = levels_[level];
            const auto& fine = levels_[level + 1];
            if (grid_.n == 1) {
                cur.resize(count);
                for (int i = 0; i < count; ++i) cur[i] = fine[2 * i] + fine[2 * i + 1];
            } else {
                cur.resize(static_cast<std::size_t>(count) * count);
                const int fineCount = count * 2;
                for (int j = 0; j < count; ++j)
                    for (int i = 0; i < count; ++i) {
                        const auto at = [&](int x, int y) {
                            return fine[static_cast<std::size_t>(y) * fineCount + x];
                        };
                        cur[static_cast<std::size_t>(j) * count + i] =
                            (at(2 * i, 2 * j) + at(2 * i, 2 * j + 1)) +
                            (at(2 * i + 1, 2 * j) + at(2 * i + 1, 2 * j + 1));
                    }
            }
        }
    }

    double sum(const Cube& q) const {
        const int count = 1 << q.level;
        return levels_[q.level][static_cast<std::size_t>(q.idx[1]) * (grid_.n == 2 ? count : 1) +
                                q.idx[0]];
    }

    double avg(const Cube& q) const {
        return sum(q) / box_volume(grid_, cube_box(grid_, q));
    }

    const Grid& grid() const { return grid_; }

private:
    Grid grid_;
    std::vector<std::vector<double>> levels_;
};

// w-measure of the superlevel set {|g| > lambda}; right-continuous and
// non-increasing in lambda.
inline double distribution(const ScalarField& g, Measure mu, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("distribution: lambda must be positive");
    const double vol = g.grid().cell_volume();
    double total = 0.0;
    for (std::int64_t i = 0; i < g.size(); ++i)
        if (std::fabs(g[i]) > lambda) total += mu.density(i) * vol;
    return total;
}

// Mean oscillation of b over one box (in-domain part). Samples are anchored
// at the first cell before averaging, so constant fields give exactly zero.
inline double mean_oscillation(const ScalarField& b, const Box& q) {
    const Grid& g = b.grid();
    const ClippedBox c = clip(g, q);
    if (c.empty()) return 0.0;
    const double anchor = b[g.cell_id(c.x0, c.y0)];
    const double count = static_cast<double>(c.cell_count());
    const double m = detail::box_reduce(g, c.x0, c.x1, c.y0, c.y1,
                                        [&](std::int64_t id) { return b[id] - anchor; }) /
                     count;
    const double osc = detail::box_reduce(
        g, c.x0, c.x1, c.y0, c.y1,
        [&](std::int64_t id) { return std::fabs(b[id] - anchor - m); });
    return osc / count;
}

// Grid BMO norm: sup of the mean oscillation over the base dyadic cubes and
// every shifted-lattice cube (clipped to the domain).
inline double bmo_norm(const ScalarField& b) {
    double sup = 0.0;
    for_each_family_box(b.grid(), CubeFamily::shifted, [&](int, const Box& box) {
        const ClippedBox c = clip(b.grid(), box);
        if (c.empty()) return;
        sup = std::max(sup, mean_oscillation(b, box));
    });
    return sup;
}

}  // namespace dyadnum
