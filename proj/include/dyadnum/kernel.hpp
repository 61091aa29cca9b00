#pragma once

// Singular kernels and the operators built from them: Hormander constants of
// Young type, T and its general commutators, grand maximal truncated
// operators, and the modulus of continuity of homogeneous kernels.
//
// The principal value is discretized by dropping the diagonal cell; for
// antisymmetric one-dimensional kernels this matches the symmetric-truncation
// limit and the O(h) error is reported by the tests, never assumed away.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadnum/field.hpp"
#include "dyadnum/maximal.hpp"
#include "dyadnum/orlicz.hpp"

namespace dyadnum {

using Point = std::array<double, 2>;

struct Kernel {
    std::string name;
    std::function<double(const Point&, const Point&)> eval;  // K(x,y) for x != y
    double size_constant = 1.0;  // C_K with |K(x,y)| <= C_K |x-y|^{-n}

    double operator()(const Point& x, const Point& y) const { return eval(x, y); }
};

inline double point_distance(const Grid& g, const Point& a, const Point& b) {
    const double dx = a[0] - b[0];
    if (g.n == 1) return std::fabs(dx);
    const double dy = a[1] - b[1];
    return std::hypot(dx, dy);
}

// 1D Hilbert-type kernel 1/(x-y).
inline Kernel hilbert_kernel() {
    return {"hilbert", [](const Point& x, const Point& y) { return 1.0 / (x[0] - y[0]); }, 1.0};
}

// 1D perturbed kernel (1 + eps cos(log|x-y|)) / (x-y); smooth log-periodic
// modulation keeps the size bound with C_K = 1+eps.
inline Kernel perturbed_hilbert_kernel(double eps = 0.5) {
    return {"perturbed_hilbert",
            [eps](const Point& x, const Point& y) {
                const double d = x[0] - y[0];
                return (1.0 + eps * std::cos(std::log(std::fabs(d)))) / d;
            },
            1.0 + eps};
}

// K(x,y) = g(y), independent of x; kernel differences vanish identically.
inline Kernel x_independent_kernel() {
    return {"x_independent",
            [](const Point&, const Point& y) { return std::cos(3.0 * y[0]); }, 1e9};
}

// 2D homogeneous kernel Omega((x-y)/|x-y|)/|x-y|^2 with Omega sampled on a
// uniform circle mesh (linear interpolation in angle).
inline Kernel homogeneous_kernel(std::vector<double> omega_samples) {
    if (omega_samples.size() < 4)
        throw std::invalid_argument("homogeneous_kernel: mesh too small");
    double cmax = 0.0;
    for (double v : omega_samples) cmax = std::max(cmax, std::fabs(v));
    auto omega = [samples = std::move(omega_samples)](double theta) {
        const double two_pi = 2.0 * M_PI;
        double u = theta / two_pi * static_cast<double>(samples.size());
        u -= std::floor(u / static_cast<double>(samples.size())) * samples.size();
        const std::size_t i = static_cast<std::size_t>(u) % samples.size();
        const std::size_t j = (i + 1) % samples.size();
        const double frac = u - std::floor(u);
        return samples[i] * (1.0 - frac) + samples[j] * frac;
    };
    return {"homogeneous",
            [omega](const Point& x, const Point& y) {
                const double dx = x[0] - y[0], dy = x[1] - y[1];
                const double r2 = dx * dx + dy * dy;
                return omega(std::atan2(dy, dx)) / r2;
            },
            cmax};
}

// Kernel tabulated as a dense cell-by-cell matrix (row = x cell, col = y cell).
inline Kernel tabulated_kernel(const Grid& g, std::vector<double> matrix, double size_constant) {
    const std::int64_t n = g.cell_count();
    if (static_cast<std::int64_t>(matrix.size()) != n * n)
        throw std::invalid_argument("tabulated_kernel: matrix size mismatch");
    const double h = g.cell_size();
    const int N = g.cells_per_side();
    auto cell_of = [h, N, nn = g.n](const Point& p) {
        auto clamp = [N](int v) { return std::min(std::max(v, 0), N - 1); };
        const int cx = clamp(static_cast<int>(p[0] / h));
        const int cy = nn == 2 ? clamp(static_cast<int>(p[1] / h)) : 0;
        return static_cast<std::int64_t>(cy) * N + cx;
    };
    return {"tabulated",
            [m = std::move(matrix), cell_of, n](const Point& x, const Point& y) {
                return m[static_cast<std::size_t>(cell_of(x) * n + cell_of(y))];
            },
            size_constant};
}

// Checks |K(x,y)| <= C_K |x-y|^{-n} on random off-diagonal cell pairs.
inline bool kernel_size_bound_holds(const Kernel& k, const Grid& g, int samples = 10000,
                                    std::uint64_t seed = 5) {
    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        const std::int64_t a = static_cast<std::int64_t>(rng.below(g.cell_count()));
        const std::int64_t b = static_cast<std::int64_t>(rng.below(g.cell_count()));
        if (a == b) continue;
        const Point pa = g.cell_center(a), pb = g.cell_center(b);
        const double d = point_distance(g, pa, pb);
        const double bound = k.size_constant * (g.n == 1 ? 1.0 / d : 1.0 / (d * d));
        if (std::fabs(k(pa, pb)) > bound * (1.0 + 1e-9)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Operator application.
// ---------------------------------------------------------------------------

// Tf(x) = sum_{y != x} K(x,y) f(y) |cell|, in parallel over output cells with
// a fixed-order inner sum.
inline ScalarField apply(const Kernel& k, const ScalarField& f) {
    const Grid& g = f.grid();
    const double vol = g.cell_volume();
    ScalarField out(g);
    parallel_for(g.cell_count(), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t x = b; x < e; ++x) {
            const Point px = g.cell_center(x);
            double acc = 0.0;
            for (std::int64_t y = 0; y < g.cell_count(); ++y) {
                if (y == x || f[y] == 0.0) continue;
                acc += k(px, g.cell_center(y)) * f[y];
            }
            out.at(x) = acc * vol;
        }
    });
    return out;
}

// The vector of symbols b and the subset/exponent selectors of the general
// commutator T_b.
struct CommutatorSpec {
    std::vector<ScalarField> symbols;

    int order() const { return static_cast<int>(symbols.size()); }

    static CommutatorSpec none() { return {}; }
    static CommutatorSpec iterated(const ScalarField& b, int m) {
        CommutatorSpec s;
        for (int i = 0; i < m; ++i) s.symbols.push_back(b);
        return s;
    }
    CommutatorSpec subset(const std::vector<int>& sigma) const {
        CommutatorSpec s;
        for (int i : sigma) s.symbols.push_back(symbols.at(static_cast<std::size_t>(i)));
        return s;
    }
};

// T_b f(x) = sum_y prod_j (b_j(x)-b_j(y)) K(x,y) f(y) |cell|.
inline ScalarField commutator_apply(const Kernel& k, const CommutatorSpec& spec,
                                    const ScalarField& f) {
    const Grid& g = f.grid();
    for (const auto& b : spec.symbols)
        if (!(b.grid() == g))
            throw std::invalid_argument("commutator_apply: symbol grid mismatch");
    if (spec.order() == 0) return apply(k, f);
    const double vol = g.cell_volume();
    ScalarField out(g);
    parallel_for(g.cell_count(), [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t x = lo; x < hi; ++x) {
            const Point px = g.cell_center(x);
            double acc = 0.0;
            for (std::int64_t y = 0; y < g.cell_count(); ++y) {
                if (y == x || f[y] == 0.0) continue;
                double prod = 1.0;
                for (const auto& b : spec.symbols) prod *= b[x] - b[y];
                if (prod == 0.0) continue;
                acc += prod * k(px, g.cell_center(y)) * f[y];
            }
            out.at(x) = acc * vol;
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Hormander constants of Young type.
// ---------------------------------------------------------------------------

struct HormanderConstants {
    double h1 = 0.0;  // differences in the first argument
    double h2 = 0.0;  // differences in the second argument
    double max() const { return std::max(h1, h2); }
};

struct HormanderOptions {
    int pairs_per_cube = 6;
    int min_annuli = 3;
    std::uint64_t seed = 11;
};

// sup_Q sup_{x,z in Q/2} sum_k |2^k Q| m^k || (K(x,.)-K(z,.)) chi_ann ||_{A, 2^k Q},
// truncated when 2^k Q leaves the root domain; m = 1 recovers the plain
// condition, m > 1 the geometrically weighted one.
inline HormanderConstants hormander_constant(const Kernel& k, const Grid& g,
                                             const YoungFunction& A, double m = 1.0,
                                             HormanderOptions opts = {}) {
    if (m < 1.0) throw std::invalid_argument("hormander_constant: weight base must be >= 1");
    // probed cubes: one centered cube per dyadic size with >= min_annuli
    // doubles inside the domain, plus off-center copies
    std::vector<Box> probes;
    const int N = g.cells_per_side();
    for (int w = 2; w * (1 << opts.min_annuli) <= N; w *= 2) {
        const int centered = N / 2 - w / 2;
        probes.push_back(Box{{centered, g.n == 2 ? centered : 0}, w});
        probes.push_back(Box{{N / 2 - w, g.n == 2 ? centered : 0}, w});
        if (g.n == 2) probes.push_back(Box{{centered, N / 2 - w}, w});
    }
    if (probes.empty())
        throw std::invalid_argument("hormander_constant: grid too small for the annuli");

    Rng rng(opts.seed);
    HormanderConstants out;
    std::vector<std::int64_t> annulus;
    for (const Box& q : probes) {
        // sample pairs in the concentric half cube
        const int hw = std::max(1, q.size / 2);
        Box half{{q.lo[0] + (q.size - hw) / 2, q.lo[1] + (q.size - hw) / 2}, hw};
        if (g.n == 1) half.lo[1] = 0;
        std::vector<std::int64_t> half_cells;
        for_each_cell(g, half, [&](std::int64_t id) { half_cells.push_back(id); });
        if (half_cells.size() < 2) continue;
        for (int p = 0; p < opts.pairs_per_cube; ++p) {
            std::int64_t xc, zc;
            if (p == 0) {
                xc = half_cells.front();
                zc = half_cells.back();
            } else {
                xc = half_cells[rng.below(half_cells.size())];
                zc = half_cells[rng.below(half_cells.size())];
            }
            if (xc == zc) continue;
            const Point px = g.cell_center(xc), pz = g.cell_center(zc);
            double sum1 = 0.0, sum2 = 0.0;
            double weight = 1.0;
            Box outer = q;
            for (int kk = 1;; ++kk) {
                const Box next = dilate2(g, outer);
                if (!box_in_domain(g, next)) break;  // truncate at the root
                weight *= m;
                annulus.clear();
                const Box inner = outer;
                for_each_cell(g, next, [&](std::int64_t id) {
                    if (!box_contains_cell(g, inner, id) && id != xc && id != zc)
                        annulus.push_back(id);
                });
                outer = next;
                if (annulus.empty()) continue;
                const double full = box_volume(g, next);
                const std::int64_t total = clip(g, next).cell_count();
                auto norm_of = [&](auto&& diff) {
                    // Luxemburg norm over 2^k Q of the difference restricted
                    // to the annulus (zero elsewhere)
                    return detail::luxemburg_core(
                        [&](std::int64_t i) {
                            return i < static_cast<std::int64_t>(annulus.size()) ? diff(annulus[i])
                                                                                 : 0.0;
                        },
                        [&](std::int64_t) { return 1.0; }, total, A);
                };
                sum1 += full * weight *
                        norm_of([&](std::int64_t id) {
                            const Point py = g.cell_center(id);
                            return k(px, py) - k(pz, py);
                        });
                sum2 += full * weight *
                        norm_of([&](std::int64_t id) {
                            const Point py = g.cell_center(id);
                            return k(py, px) - k(py, pz);
                        });
            }
            out.h1 = std::max(out.h1, sum1);
            out.h2 = std::max(out.h2, sum2);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grand maximal truncated operators.
// ---------------------------------------------------------------------------

namespace detail {

// Prefix table of K(center(xi), y) f(y) |cell| over a window, diagonal cell
// zeroed; box sums of T(f chi_B)(xi) become O(1) lookups (1D) or O(4) (2D).
class KernelRowSums {
public:
    KernelRowSums(const Kernel& k, const ScalarField& f, const Box& window, std::int64_t xi)
        : grid_(f.grid()), win_(clip(grid_, window)) {
        const double vol = grid_.cell_volume();
        const Point px = grid_.cell_center(xi);
        nx_ = win_.x1 - win_.x0;
        ny_ = win_.y1 - win_.y0;
        table_.assign(static_cast<std::size_t>((nx_ + 1) * (ny_ + 1)), 0.0);
        for (int y = 0; y < ny_; ++y) {
            for (int x = 0; x < nx_; ++x) {
                const std::int64_t id = grid_.cell_id(win_.x0 + x, win_.y0 + y);
                double v = 0.0;
                if (id != xi && f[id] != 0.0) v = k(px, grid_.cell_center(id)) * f[id] * vol;
                at(x + 1, y + 1) = v + at(x, y + 1) + at(x + 1, y) - at(x, y);
            }
        }
    }

    // T(f chi_B)(xi) for B intersected with the window
    double box_sum(const Box& b) const {
        const ClippedBox c = clip(grid_, b);
        const int x0 = std::max(c.x0, win_.x0) - win_.x0;
        const int x1 = std::min(c.x1, win_.x1) - win_.x0;
        const int y0 = std::max(c.y0, win_.y0) - win_.y0;
        const int y1 = std::min(c.y1, win_.y1) - win_.y0;
        if (x0 >= x1 || y0 >= y1) return 0.0;
        return at(x1, y1) - at(x0, y1) - at(x1, y0) + at(x0, y0);
    }

private:
    double& at(int x, int y) { return table_[static_cast<std::size_t>(y) * (nx_ + 1) + x]; }
    double at(int x, int y) const { return table_[static_cast<std::size_t>(y) * (nx_ + 1) + x]; }
    Grid grid_;
    ClippedBox win_;
    int nx_ = 0, ny_ = 0;
    std::vector<double> table_;
};

}  // namespace detail

// Local grand maximal truncated operator on Q0:
//   M_{T,Q0} f(x) = sup_{x in Q, Q subset Q0 dyadic} max_{xi in Q} |T(f chi_{3Q0 \ 3Q})(xi)|.
// Returned field is zero outside Q0.
inline ScalarField grand_maximal_local(const Kernel& k, const ScalarField& f, const Box& q0) {
    const Grid& g = f.grid();
    const Box q3 = dilate3(g, q0);
    if (!box_in_domain(g, q3))
        throw std::invalid_argument("grand_maximal_local: 3Q0 leaves the root domain");
    // Q0 must be dyadic-aligned so that its dyadic descendants are grid cubes
    int level = -1;
    for (int l = 0; l <= g.J; ++l) {
        const int w = 1 << (g.J - l);
        if (w == q0.size && q0.lo[0] % w == 0 && q0.lo[1] % w == 0) level = l;
    }
    if (level < 0) throw std::invalid_argument("grand_maximal_local: Q0 is not dyadic");

    // per dyadic Q in D(Q0): vmax(Q) = max_{xi in Q} |U(xi) - T(f chi_{3Q})(xi)|
    const int depth = g.J - level;
    std::vector<std::vector<double>> vmax(static_cast<std::size_t>(depth) + 1);
    const int qcells = q0.size;
    for (int d = 0; d <= depth; ++d) {
        const int per_axis = 1 << d;
        vmax[d].assign(static_cast<std::size_t>(g.n == 1 ? per_axis : per_axis * per_axis), 0.0);
    }
    std::vector<std::int64_t> cells;
    for_each_cell(g, q0, [&](std::int64_t id) { cells.push_back(id); });
    // per-cell values first (parallel), sequential max-merge after
    std::vector<std::vector<double>> per_cell(cells.size());
    parallel_for(static_cast<std::int64_t>(cells.size()), [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
            const std::int64_t xi = cells[static_cast<std::size_t>(i)];
            detail::KernelRowSums rows(k, f, q3, xi);
            const double u = rows.box_sum(q3);
            const auto c = g.cell_coords(xi);
            auto& vals = per_cell[static_cast<std::size_t>(i)];
            vals.resize(static_cast<std::size_t>(depth) + 1);
            for (int d = 0; d <= depth; ++d) {
                const int w = qcells >> d;
                const int bx = (c[0] - q0.lo[0]) / w;
                const int by = g.n == 2 ? (c[1] - q0.lo[1]) / w : 0;
                const Box sub{{q0.lo[0] + bx * w, q0.lo[1] + by * w}, w};
                vals[static_cast<std::size_t>(d)] = std::fabs(u - rows.box_sum(dilate3(g, sub)));
            }
        }
    });
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const auto c = g.cell_coords(cells[i]);
        for (int d = 0; d <= depth; ++d) {
            const int w = qcells >> d;
            const int bx = (c[0] - q0.lo[0]) / w;
            const int by = g.n == 2 ? (c[1] - q0.lo[1]) / w : 0;
            auto& slot = vmax[d][static_cast<std::size_t>(by) * (1 << d) + bx];
            slot = std::max(slot, per_cell[i][static_cast<std::size_t>(d)]);
        }
    }
    // spread: out(x) = max over ancestors Q of vmax(Q)
    ScalarField out(g, 0.0);
    for (std::int64_t xi : cells) {
        const auto c = g.cell_coords(xi);
        double best = 0.0;
        for (int d = 0; d <= depth; ++d) {
            const int w = qcells >> d;
            const int bx = (c[0] - q0.lo[0]) / w;
            const int by = g.n == 2 ? (c[1] - q0.lo[1]) / w : 0;
            best = std::max(best, vmax[d][static_cast<std::size_t>(by) * (1 << d) + bx]);
        }
        out.at(xi) = best;
    }
    return out;
}

// Global variant: sup over all family cubes Q containing x of
// max_{xi in Q} |T(f chi_{complement of 3Q})(xi)|.
inline ScalarField grand_maximal(const Kernel& k, const ScalarField& f,
                                 CubeFamily family = CubeFamily::shifted) {
    const Grid& g = f.grid();
    const Box domain{{0, 0}, g.cells_per_side()};
    const ScalarField tf = apply(k, f);

    // collect family boxes and an id for each
    std::vector<Box> boxes;
    for_each_family_box(g, family, [&](int, const Box& b) { boxes.push_back(b); });
    std::vector<double> vmax(boxes.size(), 0.0);

    // per cell xi: one prefix table, then every covering box costs O(1)
    std::vector<std::vector<std::size_t>> covering(static_cast<std::size_t>(g.cell_count()));
    for (std::size_t bi = 0; bi < boxes.size(); ++bi)
        for_each_cell(g, boxes[bi], [&](std::int64_t id) {
            covering[static_cast<std::size_t>(id)].push_back(bi);
        });

    std::vector<std::vector<double>> per_cell(static_cast<std::size_t>(g.cell_count()));
    parallel_for(g.cell_count(), [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t xi = lo; xi < hi; ++xi) {
            detail::KernelRowSums rows(k, f, domain, xi);
            auto& vals = per_cell[static_cast<std::size_t>(xi)];
            vals.resize(covering[static_cast<std::size_t>(xi)].size());
            for (std::size_t j = 0; j < vals.size(); ++j) {
                const Box& b = boxes[covering[static_cast<std::size_t>(xi)][j]];
                vals[j] = std::fabs(tf[xi] - rows.box_sum(dilate3(g, b)));
            }
        }
    });
    for (std::int64_t xi = 0; xi < g.cell_count(); ++xi) {
        const auto& cov = covering[static_cast<std::size_t>(xi)];
        for (std::size_t j = 0; j < cov.size(); ++j)
            vmax[cov[j]] = std::max(vmax[cov[j]], per_cell[static_cast<std::size_t>(xi)][j]);
    }
    ScalarField out(g, 0.0);
    for (std::int64_t xi = 0; xi < g.cell_count(); ++xi) {
        double best = 0.0;
        for (std::size_t bi : covering[static_cast<std::size_t>(xi)])
            best = std::max(best, vmax[bi]);
        out.at(xi) = best;
    }
    return out;
}

// ||T||_{L2 -> L2} estimated by power iteration on T^t T with a fixed seed
// and iteration count.
inline double operator_l2_norm(const Kernel& k, const Grid& g, int iterations = 12,
                               std::uint64_t seed = 3) {
    Rng rng(seed);
    ScalarField v(g);
    for (std::int64_t i = 0; i < g.cell_count(); ++i) v.at(i) = rng.uniform(-1.0, 1.0);
    const double vol = g.cell_volume();
    auto l2 = [&](const ScalarField& x) {
        double s = 0.0;
        for (std::int64_t i = 0; i < x.size(); ++i) s += x[i] * x[i] * vol;
        return std::sqrt(s);
    };
    auto apply_adjoint = [&](const ScalarField& x) {
        ScalarField out(g);
        parallel_for(g.cell_count(), [&](std::int64_t lo, std::int64_t hi) {
            for (std::int64_t yy = lo; yy < hi; ++yy) {
                const Point py = g.cell_center(yy);
                double acc = 0.0;
                for (std::int64_t xx = 0; xx < g.cell_count(); ++xx) {
                    if (xx == yy || x[xx] == 0.0) continue;
                    acc += k(g.cell_center(xx), py) * x[xx];
                }
                out.at(yy) = acc * vol;
            }
        });
        return out;
    };
    double sigma = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double nv = l2(v);
        if (nv == 0.0) return 0.0;
        for (std::int64_t i = 0; i < v.size(); ++i) v.at(i) /= nv;
        const ScalarField tv = apply(k, v);
        sigma = l2(tv);
        v = apply_adjoint(tv);
    }
    return sigma;
}

// ---------------------------------------------------------------------------
// Modulus of continuity of a homogeneous kernel's angular part (n = 2).
// ---------------------------------------------------------------------------

inline double omega_mean(const std::vector<double>& omega) {
    double s = 0.0;
    for (double v : omega) s += v;
    return s / static_cast<double>(omega.size());
}

// sup over rotations |theta| <= t of || Omega(.+theta) - Omega ||_{A, S^1},
// rotations discretized to whole mesh steps.
inline double omega_modulus(const std::vector<double>& omega, const YoungFunction& A, double t) {
    if (omega.size() < 4) throw std::invalid_argument("omega_modulus: mesh too small");
    if (!(t >= 0.0)) throw std::invalid_argument("omega_modulus: t must be non-negative");
    const std::size_t mesh = omega.size();
    const double step = 2.0 * M_PI / static_cast<double>(mesh);
    const int max_shift = static_cast<int>(std::min(t / step, static_cast<double>(mesh)));
    double sup = 0.0;
    std::vector<double> diff(mesh);
    for (int s = 1; s <= max_shift; ++s) {
        for (std::size_t i = 0; i < mesh; ++i) diff[i] = omega[(i + s) % mesh] - omega[i];
        bool nonzero = false;
        for (double d : diff) nonzero |= d != 0.0;
        if (nonzero) sup = std::max(sup, luxemburg_norm_samples(diff, A));
    }
    return sup;
}

}  // namespace dyadnum
