#pragma once

// Dyadic geometry on a finite grid.
//
// The computational domain is the root cube [0, 2^L)^n split into 2^(J*n)
// cells of side h = 2^(L-J). A Box is an axis-aligned cube measured in whole
// cells; it may extend outside the domain (dilates of boundary cubes do), and
// iteration clips to in-domain cells. The base dyadic lattice is the usual
// subdivision of the root; the 3^n shifted lattices are the one-third-trick
// families: lattice u in {0,1,2}^n at level l holds cubes of side 3*2^(J-l)
// cells whose corners are congruent to u*2^(J-l) modulo the side. The triple
// 3Q of a base cube lands in exactly one of them.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadnum/common.hpp"

namespace dyadnum {

struct Grid {
    int n = 1;  // dimension, 1 or 2
    int J = 8;  // depth: 2^J cells per side
    int L = 0;  // root side is 2^L abstract units

    Grid() = default;
    Grid(int n_, int J_, int L_ = 0) : n(n_), J(J_), L(L_) {
        if (n != 1 && n != 2) throw std::invalid_argument("Grid: dimension must be 1 or 2");
        if (J < 1 || J > 20) throw std::invalid_argument("Grid: depth J out of range");
    }

    int cells_per_side() const { return 1 << J; }
    std::int64_t cell_count() const {
        const std::int64_t N = cells_per_side();
        return n == 1 ? N : N * N;
    }
    double cell_size() const { return std::ldexp(1.0, L - J); }
    double cell_volume() const { return n == 1 ? cell_size() : cell_size() * cell_size(); }
    double side() const { return std::ldexp(1.0, L); }

    std::int64_t cell_id(int x, int y = 0) const {
        return n == 1 ? x : static_cast<std::int64_t>(y) * cells_per_side() + x;
    }
    std::array<int, 2> cell_coords(std::int64_t id) const {
        if (n == 1) return {static_cast<int>(id), 0};
        const int N = cells_per_side();
        return {static_cast<int>(id % N), static_cast<int>(id / N)};
    }
    std::array<double, 2> cell_center(std::int64_t id) const {
        const auto c = cell_coords(id);
        const double h = cell_size();
        return {(c[0] + 0.5) * h, n == 2 ? (c[1] + 0.5) * h : 0.0};
    }

    bool operator==(const Grid& o) const { return n == o.n && J == o.J && L == o.L; }
};

// Axis-aligned cube in cell units. lo may be negative and lo+size may exceed
// the per-side cell count.
struct Box {
    std::array<int, 2> lo{0, 0};
    int size = 1;

    bool operator==(const Box& o) const { return lo == o.lo && size == o.size; }
};

inline Box dilate3(const Grid& g, const Box& b) {
    return Box{{b.lo[0] - b.size, g.n == 2 ? b.lo[1] - b.size : 0}, 3 * b.size};
}

inline Box dilate2(const Grid& g, const Box& b) {
    if (b.size % 2 != 0) throw std::invalid_argument("dilate2: box side must be even");
    return Box{{b.lo[0] - b.size / 2, g.n == 2 ? b.lo[1] - b.size / 2 : 0}, 2 * b.size};
}

inline double box_volume(const Grid& g, const Box& b) {
    const double s = b.size * g.cell_size();
    return g.n == 1 ? s : s * s;
}

// Intersection of the box with the domain, as half-open coordinate ranges.
struct ClippedBox {
    int x0 = 0, x1 = 0, y0 = 0, y1 = 1;
    bool empty() const { return x0 >= x1 || y0 >= y1; }
    std::int64_t cell_count() const {
        return static_cast<std::int64_t>(x1 - x0) * (y1 - y0);
    }
};

inline ClippedBox clip(const Grid& g, const Box& b) {
    const int N = g.cells_per_side();
    ClippedBox c;
    c.x0 = std::max(b.lo[0], 0);
    c.x1 = std::min(b.lo[0] + b.size, N);
    if (g.n == 2) {
        c.y0 = std::max(b.lo[1], 0);
        c.y1 = std::min(b.lo[1] + b.size, N);
    }
    if (c.x0 > c.x1) c.x1 = c.x0;
    if (c.y0 > c.y1) c.y1 = c.y0;
    return c;
}

inline bool box_in_domain(const Grid& g, const Box& b) {
    const int N = g.cells_per_side();
    if (b.lo[0] < 0 || b.lo[0] + b.size > N) return false;
    if (g.n == 2 && (b.lo[1] < 0 || b.lo[1] + b.size > N)) return false;
    return true;
}

inline bool box_contains_cell(const Grid& g, const Box& b, std::int64_t cell) {
    const auto c = g.cell_coords(cell);
    if (c[0] < b.lo[0] || c[0] >= b.lo[0] + b.size) return false;
    if (g.n == 2 && (c[1] < b.lo[1] || c[1] >= b.lo[1] + b.size)) return false;
    return true;
}

template <typename Fn>
void for_each_cell(const Grid& g, const Box& b, Fn&& fn) {
    const ClippedBox c = clip(g, b);
    if (c.empty()) return;
    if (g.n == 1) {
        for (int x = c.x0; x < c.x1; ++x) fn(static_cast<std::int64_t>(x));
    } else {
        const int N = g.cells_per_side();
        for (int y = c.y0; y < c.y1; ++y)
            for (int x = c.x0; x < c.x1; ++x) fn(static_cast<std::int64_t>(y) * N + x);
    }
}

// ---------------------------------------------------------------------------
// Lattice-addressed cubes.
// ---------------------------------------------------------------------------

inline constexpr int kBaseLattice = -1;

struct Cube {
    int lattice = kBaseLattice;  // kBaseLattice, or 0..3^n-1 encoding the shift
    int level = 0;
    std::array<int, 2> idx{0, 0};

    bool operator==(const Cube& o) const {
        return lattice == o.lattice && level == o.level && idx == o.idx;
    }
};

inline int lattice_count(const Grid& g) { return g.n == 1 ? 3 : 9; }

inline std::array<int, 2> lattice_shift(const Grid& g, int lattice) {
    if (g.n == 1) return {lattice, 0};
    return {lattice % 3, lattice / 3};
}

inline Box cube_box(const Grid& g, const Cube& q) {
    const int w = 1 << (g.J - q.level);
    if (q.lattice == kBaseLattice)
        return Box{{q.idx[0] * w, q.idx[1] * w}, w};
    const auto u = lattice_shift(g, q.lattice);
    return Box{{(3 * q.idx[0] + u[0]) * w, (3 * q.idx[1] + u[1]) * w}, 3 * w};
}

inline Cube root_cube() { return Cube{kBaseLattice, 0, {0, 0}}; }

inline Cube child_cube(const Cube& q, int which) {
    Cube c = q;
    c.level = q.level + 1;
    c.idx[0] = 2 * q.idx[0] + (which & 1);
    c.idx[1] = 2 * q.idx[1] + ((which >> 1) & 1);
    return c;
}

// The lattice cube that 3Q occupies (one-third-trick membership): per axis
// i-1 = 3k+u with u in {0,1,2} determines shift u and index k. The result has
// the same level and side 3*side(Q).
inline Cube triple_cube(const Grid& g, const Cube& q) {
    if (q.lattice != kBaseLattice)
        throw std::invalid_argument("triple_cube: expects a base-lattice cube");
    auto split = [](int i) {
        int u = (i - 1) % 3;
        if (u < 0) u += 3;
        return std::array<int, 2>{(i - 1 - u) / 3, u};
    };
    const auto sx = split(q.idx[0]);
    Cube t;
    t.level = q.level;
    if (g.n == 1) {
        t.lattice = sx[1];
        t.idx = {sx[0], 0};
    } else {
        const auto sy = split(q.idx[1]);
        t.lattice = sy[1] * 3 + sx[1];
        t.idx = {sx[0], sy[0]};
    }
    return t;
}

// Enumerates base-lattice cubes of one level.
template <typename Fn>
void for_each_dyadic_cube(const Grid& g, int level, Fn&& fn) {
    const int count = 1 << level;
    if (g.n == 1) {
        for (int i = 0; i < count; ++i) fn(Cube{kBaseLattice, level, {i, 0}});
    } else {
        for (int j = 0; j < count; ++j)
            for (int i = 0; i < count; ++i) fn(Cube{kBaseLattice, level, {i, j}});
    }
}

// Enumerates the cubes of one shifted lattice at one level that meet the
// domain. Index range per axis: lo=(3k+u)*w must satisfy lo < N and lo+3w > 0.
template <typename Fn>
void for_each_lattice_cube(const Grid& g, int lattice, int level, Fn&& fn) {
    const int w = 1 << (g.J - level);
    const auto u = lattice_shift(g, lattice);
    auto k_range = [&](int axis) {
        const int kmin = u[axis] > 0 ? -1 : 0;
        const int kmax = ((g.cells_per_side() / w) - u[axis] - 1 + 3) / 3 - 1;
        return std::array<int, 2>{kmin, kmax};
    };
    const auto rx = k_range(0);
    if (g.n == 1) {
        for (int k = rx[0]; k <= rx[1]; ++k) fn(Cube{lattice, level, {k, 0}});
    } else {
        const auto ry = k_range(1);
        for (int ky = ry[0]; ky <= ry[1]; ++ky)
            for (int kx = rx[0]; kx <= rx[1]; ++kx) fn(Cube{lattice, level, {kx, ky}});
    }
}

// The unique cube of (lattice, level) containing a given cell.
inline Cube lattice_cube_at(const Grid& g, int lattice, int level, std::int64_t cell) {
    const int w = 1 << (g.J - level);
    const auto u = lattice_shift(g, lattice);
    const auto c = g.cell_coords(cell);
    auto k_of = [&](int coord, int shift) {
        // floor((coord - shift*w) / (3w)) with correct negative rounding
        int num = coord - shift * w;
        int den = 3 * w;
        int k = num / den;
        if (num % den != 0 && ((num < 0) != (den < 0))) --k;
        return k;
    };
    return Cube{lattice, level, {k_of(c[0], u[0]), g.n == 2 ? k_of(c[1], u[1]) : 0}};
}

struct LatticeInfo {
    int id;
    std::array<int, 2> shift;
};

// The 3^n shifted lattices of the one-third trick.
inline std::vector<LatticeInfo> shifted_lattices(const Grid& g) {
    std::vector<LatticeInfo> out;
    const int count = lattice_count(g);
    out.reserve(count);
    for (int id = 0; id < count; ++id) out.push_back({id, lattice_shift(g, id)});
    return out;
}

// Walks every cube used as a stand-in for "all cubes": the base dyadic cubes
// of every level plus the cubes of every shifted lattice. fn(level, Box).
enum class CubeFamily { dyadic, shifted };

template <typename Fn>
void for_each_family_box(const Grid& g, CubeFamily family, Fn&& fn) {
    for (int level = 0; level <= g.J; ++level) {
        for_each_dyadic_cube(g, level, [&](const Cube& q) { fn(level, cube_box(g, q)); });
        if (family == CubeFamily::shifted) {
            for (int lat = 0; lat < lattice_count(g); ++lat)
                for_each_lattice_cube(g, lat, level,
                                      [&](const Cube& q) { fn(level, cube_box(g, q)); });
        }
    }
}

}  // namespace dyadnum
