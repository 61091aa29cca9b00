#pragma once

// Muckenhoupt-type weight constants (A_p, A_1, Fujii-Wilson A_inf, weak
// A_inf) and the weight lemmas as numeric checks.

#include <cmath>
#include <cstdint>
#include <vector>

#include "dyadnum/field.hpp"
#include "dyadnum/maximal.hpp"
#include "dyadnum/report.hpp"

namespace dyadnum {

inline double tau_n(const Grid& g) { return std::ldexp(1.0, g.n); }  // 2^n

// sup_Q <w>_Q <w^{1-p'}>_Q^{p-1}, over the full cube family.
inline double ap_constant(const Weight& w, double p, CubeFamily family = CubeFamily::shifted) {
    if (!(p > 1.0)) throw std::invalid_argument("ap_constant: requires p > 1 (use a1_constant)");
    const Grid& g = w.grid();
    const double pp = p / (p - 1.0);
    ScalarField dual(g);
    for (std::int64_t i = 0; i < g.cell_count(); ++i)
        dual.at(i) = std::pow(w[i], 1.0 - pp);
    double sup = 0.0;
    for_each_family_box(g, family, [&](int, const Box& box) {
        const ClippedBox c = clip(g, box);
        if (c.empty()) return;
        const double prod =
            average(w.field(), box) * std::pow(average(dual, box), p - 1.0);
        sup = std::max(sup, prod);
    });
    return sup;
}

// Smallest constant with Mw <= c w on the grid: sup_Q <w>_Q / min_Q w.
inline double a1_constant(const Weight& w, CubeFamily family = CubeFamily::shifted) {
    const Grid& g = w.grid();
    double sup = 0.0;
    for_each_family_box(g, family, [&](int, const Box& box) {
        const ClippedBox c = clip(g, box);
        if (c.empty()) return;
        double sum = 0.0, mn = kInf;
        for_each_cell(g, box, [&](std::int64_t id) {
            sum += w[id];
            mn = std::min(mn, w[id]);
        });
        sup = std::max(sup, sum / (static_cast<double>(c.cell_count()) * mn));
    });
    return sup;
}

namespace detail {

// integral over Q of M(w chi_Q): only mass inside Q counts in the numerator,
// while each covering cube is normalized by its in-domain cell count.
inline double local_maximal_integral(const Weight& w, const Box& q, CubeFamily family) {
    const Grid& g = w.grid();
    const ClippedBox qc = clip(g, q);
    if (qc.empty()) return 0.0;
    std::vector<std::int64_t> cells;
    cells.reserve(static_cast<std::size_t>(qc.cell_count()));
    for_each_cell(g, q, [&](std::int64_t id) { cells.push_back(id); });
    std::vector<double> best(cells.size(), 0.0);
    std::vector<int> gx(cells.size()), gy(cells.size());

    auto consider_partition = [&](int level, int lattice) {
        // cells of Q grouped by their covering cube; per cell the group index
        // is arithmetic, so one linear pass accumulates, one spreads
        auto key_of = [&](std::int64_t cell, int axis) {
            const auto c = g.cell_coords(cell);
            if (lattice == kBaseLattice) return c[axis] >> (g.J - level);
            const int wc = 1 << (g.J - level);
            const int u = lattice_shift(g, lattice)[axis];
            int num = c[axis] - u * wc, den = 3 * wc;
            int k = num / den;
            if (num % den != 0 && num < 0) --k;
            return k;
        };
        int kx0 = key_of(cells.front(), 0), kx1 = kx0, ky0 = 0, ky1 = 0;
        if (g.n == 2) ky0 = ky1 = key_of(cells.front(), 1);
        for (std::size_t i = 0; i < cells.size(); ++i) {
            gx[i] = key_of(cells[i], 0);
            kx0 = std::min(kx0, gx[i]);
            kx1 = std::max(kx1, gx[i]);
            if (g.n == 2) {
                gy[i] = key_of(cells[i], 1);
                ky0 = std::min(ky0, gy[i]);
                ky1 = std::max(ky1, gy[i]);
            } else {
                gy[i] = 0;
            }
        }
        const int nkx = kx1 - kx0 + 1, nky = ky1 - ky0 + 1;
        std::vector<double> sum(static_cast<std::size_t>(nkx) * nky, 0.0);
        for (std::size_t i = 0; i < cells.size(); ++i)
            sum[static_cast<std::size_t>(gy[i] - ky0) * nkx + (gx[i] - kx0)] += w[cells[i]];
        std::vector<double> score(sum.size(), 0.0);
        for (int ky = ky0; ky <= ky1; ++ky)
            for (int kx = kx0; kx <= kx1; ++kx) {
                const Cube cube{lattice, level, {kx, ky}};
                const ClippedBox cb = clip(g, cube_box(g, cube));
                const std::size_t slot =
                    static_cast<std::size_t>(ky - ky0) * nkx + (kx - kx0);
                score[slot] = cb.cell_count() > 0
                                   ? sum[slot] / static_cast<double>(cb.cell_count())
                                   : 0.0;
            }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const std::size_t slot = static_cast<std::size_t>(gy[i] - ky0) * nkx + (gx[i] - kx0);
            best[i] = std::max(best[i], score[slot]);
        }
    };

    for (int level = 0; level <= g.J; ++level) {
        consider_partition(level, kBaseLattice);
        if (family == CubeFamily::shifted)
            for (int lat = 0; lat < lattice_count(g); ++lat) consider_partition(level, lat);
    }
    double total = 0.0;
    for (double v : best) total += v;
    return total * g.cell_volume();
}

}  // namespace detail

// Fujii-Wilson constant sup_Q (1/w(Q)) int_Q M(w chi_Q). The outer sup runs
// over the same cube family as the inner maximal operator.
inline double fujii_wilson(const Weight& w, CubeFamily family = CubeFamily::shifted) {
    const Grid& g = w.grid();
    double sup = 0.0;
    for_each_family_box(g, family, [&](int, const Box& box) {
        const ClippedBox c = clip(g, box);
        if (c.empty()) return;
        const double wq = integrate(w.field(), box);
        sup = std::max(sup, detail::local_maximal_integral(w, box, family) / wq);
    });
    return sup;
}

// Weak A_inf constant sup_Q (1/w(2Q)) int_Q M(w chi_Q). 2Q is clipped to the
// root domain; cubes whose doubled copy loses more than half its volume to
// clipping are excluded from the sup.
inline double weak_ainfty(const Weight& w, CubeFamily family = CubeFamily::shifted) {
    const Grid& g = w.grid();
    double sup = 0.0;
    for_each_family_box(g, family, [&](int, const Box& box) {
        if (box.size % 2 != 0) return;  // need an even side to double
        if (clip(g, box).empty()) return;
        const Box box2 = dilate2(g, box);
        const ClippedBox c2 = clip(g, box2);
        const double full = static_cast<double>(box2.size) * box2.size;
        const double kept = g.n == 1 ? (c2.x1 - c2.x0) : static_cast<double>(c2.cell_count());
        const double frac = g.n == 1 ? kept / box2.size : kept / full;
        if (frac < 0.5) return;
        const double w2q = integrate(w.field(), box2);
        sup = std::max(sup, detail::local_maximal_integral(w, box, family) / w2q);
    });
    return sup;
}

inline double reverse_holder_exponent(const Weight& w, double weak_constant) {
    return 1.0 + 1.0 / (tau_n(w.grid()) * weak_constant);
}

struct WeightConstants {
    double a_p = 1.0;
    double p = 2.0;
    double a_1 = 1.0;
    double a_inf_fw = 1.0;
    double a_inf_weak = 1.0;
    double rh_exponent = 2.0;
    double tau = 2.0;
};

inline WeightConstants weight_constants(const Weight& w, double p = 2.0,
                                        CubeFamily family = CubeFamily::shifted) {
    WeightConstants k;
    k.p = p;
    k.a_p = ap_constant(w, p, family);
    k.a_1 = a1_constant(w, family);
    k.a_inf_fw = fujii_wilson(w, family);
    k.a_inf_weak = weak_ainfty(w, family);
    k.tau = tau_n(w.grid());
    k.rh_exponent = reverse_holder_exponent(w, k.a_inf_weak);
    return k;
}

// Subset decay of A_inf weights: fits the smallest c with
//   w(E)/w(Q) <= 2 (|E|/|Q|)^(1/(c [w]_FW))
// over random (Q, E) pairs. Reported, not asserted: the dimensional
// constant is implicit.
inline CheckReport subset_decay_check(const Weight& w, int trials, std::uint64_t seed = 1) {
    const Grid& g = w.grid();
    const double afw = fujii_wilson(w, CubeFamily::dyadic);
    Rng rng(seed);
    CheckReport report("subset_decay");
    double fitted = 0.0;
    for (int t = 0; t < trials; ++t) {
        const int level = static_cast<int>(rng.below(static_cast<std::uint64_t>(g.J)));
        Cube q{kBaseLattice, level, {0, 0}};
        q.idx[0] = static_cast<int>(rng.below(1ULL << level));
        if (g.n == 2) q.idx[1] = static_cast<int>(rng.below(1ULL << level));
        const Box box = cube_box(g, q);
        std::vector<std::int64_t> cells;
        for_each_cell(g, box, [&](std::int64_t id) { cells.push_back(id); });
        const std::size_t keep = 1 + rng.below(cells.size());
        double we = 0.0, wq = 0.0;
        std::int64_t ne = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            wq += w[cells[i]];
            if (rng.below(cells.size()) < keep) {
                we += w[cells[i]];
                ++ne;
            }
        }
        if (ne == 0 || ne == static_cast<std::int64_t>(cells.size())) continue;
        const double rho = we / wq;
        const double sigma = static_cast<double>(ne) / static_cast<double>(cells.size());
        // rho <= 2 sigma^(1/(c a)) <=> c >= ln sigma / (a ln(rho/2))
        const double need = std::log(sigma) / (afw * std::log(rho / 2.0));
        if (need > fitted) {
            fitted = need;
            report.witness = "level=" + std::to_string(level);
        }
        report.samples.push_back({sigma, rho, 2.0 * sigma});
    }
    report.empirical_constant = fitted;
    report.pass = std::isfinite(fitted);
    return report;
}

// Reverse Holder inequality at the weak-A_inf exponent r(w) = 1 + 1/(tau_n [w]_weak):
//   (<w^r>_Q)^(1/r) <= 2 <w>_{2Q}
// evaluated on every cube whose double stays inside the root domain. The 5%
// tolerance absorbs discretization of the sharp exponent.
inline CheckReport reverse_holder_check(const Weight& w, double tolerance = 0.05) {
    const Grid& g = w.grid();
    const double weak = weak_ainfty(w);
    const double r = reverse_holder_exponent(w, weak);
    ScalarField wr(g);
    for (std::int64_t i = 0; i < g.cell_count(); ++i) wr.at(i) = std::pow(w[i], r);
    CheckReport report("reverse_holder");
    report.declared_bound = 1.0 + tolerance;
    double worst = 0.0;
    for (int level = 0; level < g.J; ++level)
        for_each_dyadic_cube(g, level, [&](const Cube& q) {
            const Box box = cube_box(g, q);
            const Box box2 = dilate2(g, box);
            if (!box_in_domain(g, box2)) return;
            const double lhs = std::pow(average(wr, box), 1.0 / r);
            const double rhs = 2.0 * average(w.field(), box2);
            const double ratio = lhs / rhs;
            if (ratio > worst) {
                worst = ratio;
                report.witness = "level=" + std::to_string(level) + ",i=" +
                                 std::to_string(q.idx[0]);
            }
            report.samples.push_back({static_cast<double>(level), lhs, rhs});
        });
    report.empirical_constant = worst;
    report.pass = worst <= report.declared_bound;
    return report;
}

}  // namespace dyadnum
