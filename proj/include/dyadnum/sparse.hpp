#pragma once

// Sparse families, the Calderon-Zygmund stopping time, and the recursive
// sparse-domination construction for general commutators.
//
// The build follows the recursion of the pointwise domination proof: at each
// dyadic node Q it forms, for every subset pattern of the symbols, the
// Luxemburg threshold of the pattern-weighted data on 3Q, collects the
// exceptional set where either the pointwise product or the local grand
// maximal operator exceeds its (adaptively scaled) threshold, shrinks it
// below 2^-(n+2)|Q|, selects the maximal dyadic subcubes of the exceptional
// set at height 2^-(n+1) and recurses into them. E_Q = Q minus the selected
// cubes makes the family exactly 1/2-sparse by integer cell counts.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadnum/field.hpp"
#include "dyadnum/kernel.hpp"
#include "dyadnum/orlicz.hpp"

namespace dyadnum {

// ---------------------------------------------------------------------------
// Sparse family bookkeeping.
// ---------------------------------------------------------------------------

struct SparseEntry {
    Cube cube;
    Box box;
    CellSet own;  // E_Q as an exact cell set
};

struct SparseFamily {
    Grid grid;
    double eta = 0.5;
    std::vector<SparseEntry> entries;
};

struct SparseVerification {
    bool pass = true;
    std::string witness;
};

// Exact verification on cell sets: E_Q inside Q, |E_Q| >= eta |Q|, pairwise
// disjointness. Returns the violating cube or pair on failure.
inline SparseVerification verify_sparse(const SparseFamily& fam, double eta) {
    SparseVerification v;
    CellSet seen(fam.grid.cell_count());
    for (std::size_t i = 0; i < fam.entries.size(); ++i) {
        const auto& e = fam.entries[i];
        CellSet inside(fam.grid.cell_count());
        for_each_cell(fam.grid, e.box, [&](std::int64_t id) { inside.set(id); });
        if (!e.own.subset_of(inside)) {
            v.pass = false;
            v.witness = "entry " + std::to_string(i) + ": E_Q not inside Q";
            return v;
        }
        const double need = eta * static_cast<double>(inside.count());
        if (static_cast<double>(e.own.count()) < need) {
            v.pass = false;
            v.witness = "entry " + std::to_string(i) + ": |E_Q| below eta|Q|";
            return v;
        }
        if (e.own.intersects(seen)) {
            v.pass = false;
            v.witness = "entry " + std::to_string(i) + ": E_Q overlaps an earlier set";
            return v;
        }
        seen.or_with(e.own);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Calderon-Zygmund stopping time.
// ---------------------------------------------------------------------------

// Maximal dyadic subcubes P of Q0 with <g>_P > height. If the average over
// Q0 itself already exceeds the height, Q0 is returned. Selected cubes then
// satisfy <g>_P <= 2^n height by maximality. Canonical level-then-index order.
inline std::vector<Cube> cz_stopping(const ScalarField& g, const Cube& q0, double height) {
    const Grid& grid = g.grid();
    for (std::int64_t i = 0; i < g.size(); ++i)
        if (g[i] < 0.0) throw std::invalid_argument("cz_stopping: negative samples");
    DyadicSums sums(g);
    std::vector<Cube> out;
    if (sums.avg(q0) > height) {
        out.push_back(q0);
        return out;
    }
    std::vector<Cube> frontier{q0};
    std::vector<Cube> next;
    while (!frontier.empty()) {
        next.clear();
        for (const Cube& q : frontier) {
            if (q.level == grid.J) continue;
            const int nc = grid.n == 1 ? 2 : 4;
            for (int c = 0; c < nc; ++c) {
                const Cube child = child_cube(q, c);
                if (sums.avg(child) > height)
                    out.push_back(child);
                else
                    next.push_back(child);
            }
        }
        frontier.swap(next);
    }
    // canonical order: level, then index
    std::sort(out.begin(), out.end(), [](const Cube& a, const Cube& b) {
        if (a.level != b.level) return a.level < b.level;
        if (a.idx[1] != b.idx[1]) return a.idx[1] < b.idx[1];
        return a.idx[0] < b.idx[0];
    });
    return out;
}

// ---------------------------------------------------------------------------
// Sparse domination build.
// ---------------------------------------------------------------------------

struct SparseNodeRecord {
    Box box;
    int depth = 0;
    double alpha = 1.0;
    std::int64_t box_cells = 0;
    std::int64_t exceptional_cells = 0;
    std::int64_t selected_cells = 0;  // total size of the chosen P_j
};

struct SparseBuildOptions {
    double alpha_cap = 1048576.0;  // 2^20
    double c_t_override = 0.0;     // > 0 replaces the computed C_T
    double h_abar = 0.0;           // > 0 skips the Hormander sweep
    double t_l2 = 0.0;             // > 0 skips the power iteration
};

struct SparseDominationReport {
    SparseFamily family;                          // F with eta = 1/2
    std::vector<SparseFamily> lattice_families;   // S_j = {3Q : Q in F} by lattice
    std::vector<SparseNodeRecord> nodes;
    Cube root;
    int max_depth = 0;
    double max_alpha = 1.0;
    double h_abar = 0.0;
    double t_l2 = 0.0;
    double c_t = 0.0;
    double measured_eta_lattice = 0.0;  // smallest |E|/|Q| over the S_j
};

namespace detail {

struct SparseBuildContext {
    const Kernel& kernel;
    const CommutatorSpec& spec;
    const ScalarField& f;
    const YoungFunction& gauge;
    double c_t;
    double alpha_cap;
    SparseDominationReport* report;
};

inline void sparse_build_node(SparseBuildContext& ctx, const Cube& q, int depth) {
    const Grid& g = ctx.f.grid();
    ctx.report->max_depth = std::max(ctx.report->max_depth, depth);
    const Box box = cube_box(g, q);
    std::vector<std::int64_t> qcells;
    for_each_cell(g, box, [&](std::int64_t id) { qcells.push_back(id); });

    auto push_entry = [&](const CellSet& own) {
        ctx.report->family.entries.push_back({q, box, own});
    };

    if (box.size == 1) {
        CellSet own(g.cell_count());
        for (std::int64_t id : qcells) own.set(id);
        push_entry(own);
        SparseNodeRecord rec;
        rec.box = box;
        rec.depth = depth;
        rec.box_cells = static_cast<std::int64_t>(qcells.size());
        ctx.report->nodes.push_back(rec);
        return;
    }

    const Box box3 = dilate3(g, box);
    const int m = ctx.spec.order();

    // reference averages over R_Q = 3Q
    std::vector<double> refs(static_cast<std::size_t>(m));
    for (int s = 0; s < m; ++s)
        refs[static_cast<std::size_t>(s)] = average(ctx.spec.symbols[static_cast<std::size_t>(s)], box3);

    // per subset pattern: threshold, pointwise product, local grand maximal
    const int patterns = 1 << m;
    std::vector<double> thresholds(static_cast<std::size_t>(patterns), 0.0);
    std::vector<std::vector<double>> pointwise(static_cast<std::size_t>(patterns));
    std::vector<ScalarField> mloc(static_cast<std::size_t>(patterns));
    std::vector<double> factor(static_cast<std::size_t>(g.cell_count()));
    for (int pat = 0; pat < patterns; ++pat) {
        for (std::int64_t i = 0; i < g.cell_count(); ++i) {
            double prod = 1.0;
            for (int s = 0; s < m; ++s)
                if (pat & (1 << s))
                    prod *= std::fabs(ctx.spec.symbols[static_cast<std::size_t>(s)][i] -
                                      refs[static_cast<std::size_t>(s)]);
            factor[static_cast<std::size_t>(i)] = prod;
        }
        thresholds[static_cast<std::size_t>(pat)] =
            luxemburg_norm_scaled(ctx.f, factor, box3, ctx.gauge);
        auto& pw = pointwise[static_cast<std::size_t>(pat)];
        pw.resize(qcells.size());
        for (std::size_t i = 0; i < qcells.size(); ++i)
            pw[i] = std::fabs(ctx.f[qcells[i]]) * factor[static_cast<std::size_t>(qcells[i])];
        ScalarField weighted(g);
        for (std::int64_t i = 0; i < g.cell_count(); ++i)
            weighted.at(i) = ctx.f[i] * factor[static_cast<std::size_t>(i)];
        mloc[static_cast<std::size_t>(pat)] = grand_maximal_local(ctx.kernel, weighted, box);
    }

    // adaptive alpha: double until |E| <= 2^-(n+2) |Q|
    const double target = std::ldexp(static_cast<double>(qcells.size()), -(g.n + 2));
    double alpha = 1.0;
    std::vector<char> in_e(qcells.size(), 0);
    std::int64_t e_count = 0;
    for (;; alpha *= 2.0) {
        if (alpha > ctx.alpha_cap)
            throw std::runtime_error(
                "build_sparse_family: alpha cap exceeded; kernel/corpus mismatch");
        e_count = 0;
        for (std::size_t i = 0; i < qcells.size(); ++i) {
            bool bad = false;
            for (int pat = 0; pat < patterns && !bad; ++pat) {
                const double thr = thresholds[static_cast<std::size_t>(pat)];
                bad = pointwise[static_cast<std::size_t>(pat)][i] > alpha * thr ||
                      mloc[static_cast<std::size_t>(pat)][qcells[i]] > alpha * ctx.c_t * thr;
            }
            in_e[i] = bad ? 1 : 0;
            e_count += bad;
        }
        if (static_cast<double>(e_count) <= target) break;
    }
    ctx.report->max_alpha = std::max(ctx.report->max_alpha, alpha);

    // stopping cubes of the exceptional set at height 2^-(n+1)
    ScalarField chi(g, 0.0);
    for (std::size_t i = 0; i < qcells.size(); ++i)
        if (in_e[i]) chi.at(qcells[i]) = 1.0;
    const std::vector<Cube> selected = cz_stopping(chi, q, std::ldexp(1.0, -(g.n + 1)));

    std::int64_t selected_cells = 0;
    std::vector<CellSet> masks;
    for (const Cube& p : selected) {
        CellSet mask(g.cell_count());
        for_each_cell(g, cube_box(g, p), [&](std::int64_t id) { mask.set(id); });
        selected_cells += mask.count();
        masks.push_back(mask);
    }
    // E_Q = Q minus the union of the selected cubes
    CellSet eq(g.cell_count());
    for (std::int64_t id : qcells) {
        bool keep = true;
        for (const auto& mask : masks)
            if (mask.test(id)) {
                keep = false;
                break;
            }
        if (keep) eq.set(id);
    }
    push_entry(eq);

    SparseNodeRecord rec;
    rec.box = box;
    rec.depth = depth;
    rec.alpha = alpha;
    rec.box_cells = static_cast<std::int64_t>(qcells.size());
    rec.exceptional_cells = e_count;
    rec.selected_cells = selected_cells;
    ctx.report->nodes.push_back(rec);

    for (const Cube& p : selected) sparse_build_node(ctx, p, depth + 1);
}

}  // namespace detail

// Runs the full recursive construction from Q0. Preconditions: 3Q0 inside the
// root domain, supp f inside 3Q0, A certified in some growth class. Returns
// the 1/2-sparse family F together with the lattice-grouped families
// S_j = {3Q : Q in F} carrying E_{3Q} = E_Q.
inline SparseDominationReport build_sparse_family(const Kernel& kernel,
                                                  const CommutatorSpec& spec,
                                                  const ScalarField& f, const Cube& q0,
                                                  const YoungFunction& gauge,
                                                  const YClassCertificate& cert,
                                                  SparseBuildOptions opts = {}) {
    const Grid& g = f.grid();
    const Box box0 = cube_box(g, q0);
    const Box box3 = dilate3(g, box0);
    if (q0.lattice != kBaseLattice)
        throw std::invalid_argument("build_sparse_family: Q0 must be a base dyadic cube");
    if (!box_in_domain(g, box3))
        throw std::invalid_argument("build_sparse_family: 3Q0 leaves the root domain");
    for (std::int64_t i = 0; i < g.cell_count(); ++i)
        if (f[i] != 0.0 && !box_contains_cell(g, box3, i))
            throw std::invalid_argument("build_sparse_family: supp f must lie in 3Q0");

    SparseDominationReport report;
    report.family.grid = g;
    report.family.eta = 0.5;
    report.root = q0;

    const YoungFunction gauge_conj = conjugate(gauge);
    report.h_abar =
        opts.h_abar > 0.0 ? opts.h_abar : hormander_constant(kernel, g, gauge_conj).max();
    report.t_l2 = opts.t_l2 > 0.0 ? opts.t_l2 : operator_l2_norm(kernel, g);
    report.c_t = opts.c_t_override > 0.0
                     ? opts.c_t_override
                     : cert.max_constant() * (report.h_abar + report.t_l2);

    detail::SparseBuildContext ctx{kernel, spec, f, gauge, report.c_t, opts.alpha_cap, &report};
    detail::sparse_build_node(ctx, q0, 0);

    // regroup as S_j with R_Q = 3Q (one admissible one-third-trick choice)
    report.lattice_families.assign(static_cast<std::size_t>(lattice_count(g)),
                                   SparseFamily{g, 0.0, {}});
    double min_eta = 1.0;
    for (const auto& entry : report.family.entries) {
        const Cube t = triple_cube(g, entry.cube);
        const Box tb = cube_box(g, t);
        auto& fam = report.lattice_families[static_cast<std::size_t>(t.lattice)];
        fam.entries.push_back({t, tb, entry.own});
        const double eta = static_cast<double>(entry.own.count()) /
                           static_cast<double>(clip(g, tb).cell_count());
        min_eta = std::min(min_eta, eta);
    }
    report.measured_eta_lattice = min_eta;
    for (auto& fam : report.lattice_families) fam.eta = min_eta;
    return report;
}

// ---------------------------------------------------------------------------
// Sparse operator evaluation and the domination constant.
// ---------------------------------------------------------------------------

// A^gamma_{A,S}(b, f)(x) =
//   sum_{Q in S} prod_{s: gamma_s=1} |b_s(x) - <b_s>_Q|
//                * || prod_{s: gamma_s=0} (b_s - <b_s>_Q) f ||_{A,Q} chi_Q(x).
inline ScalarField sparse_eval(const SparseFamily& fam, const YoungFunction& gauge,
                               const CommutatorSpec& spec, const ScalarField& f,
                               const std::vector<int>& gamma) {
    const Grid& g = f.grid();
    const int m = spec.order();
    if (static_cast<int>(gamma.size()) != m)
        throw std::invalid_argument("sparse_eval: gamma length must match the symbol count");
    ScalarField out(g, 0.0);
    std::vector<double> factor(static_cast<std::size_t>(g.cell_count()));
    for (const auto& entry : fam.entries) {
        std::vector<double> avgs(static_cast<std::size_t>(m));
        for (int s = 0; s < m; ++s)
            avgs[static_cast<std::size_t>(s)] =
                average(spec.symbols[static_cast<std::size_t>(s)], entry.box);
        for (std::int64_t i = 0; i < g.cell_count(); ++i) {
            double prod = 1.0;
            for (int s = 0; s < m; ++s)
                if (gamma[static_cast<std::size_t>(s)] == 0)
                    prod *= spec.symbols[static_cast<std::size_t>(s)][i] -
                            avgs[static_cast<std::size_t>(s)];
            factor[static_cast<std::size_t>(i)] = prod;
        }
        const double norm = luxemburg_norm_scaled(f, factor, entry.box, gauge);
        if (norm == 0.0) continue;
        for_each_cell(g, entry.box, [&](std::int64_t id) {
            double prod = 1.0;
            for (int s = 0; s < m; ++s)
                if (gamma[static_cast<std::size_t>(s)] == 1)
                    prod *= std::fabs(spec.symbols[static_cast<std::size_t>(s)][id] -
                                      avgs[static_cast<std::size_t>(s)]);
            out.at(id) += prod * norm;
        });
    }
    return out;
}

struct DominationOutcome {
    double constant = 0.0;
    bool violated = false;  // numerator without denominator: hard failure
    std::int64_t witness_cell = -1;
};

// sup over the cells of Q0 of |T_b f| / (sum_j sum_gamma A^gamma_{A,S_j}),
// with 0/0 counting as satisfied. The build restricts f to 3Q0, so the claim
// being checked is the local domination on Q0.
inline DominationOutcome domination_report(const Kernel& kernel, const CommutatorSpec& spec,
                                           const ScalarField& f, const YoungFunction& gauge,
                                           const SparseDominationReport& build) {
    const Grid& g = f.grid();
    const ScalarField num = commutator_apply(kernel, spec, f);
    ScalarField den(g, 0.0);
    const int m = spec.order();
    for (const auto& fam : build.lattice_families) {
        if (fam.entries.empty()) continue;
        for (int bits = 0; bits < (1 << m); ++bits) {
            std::vector<int> gamma(static_cast<std::size_t>(m));
            for (int s = 0; s < m; ++s) gamma[static_cast<std::size_t>(s)] = (bits >> s) & 1;
            const ScalarField term = sparse_eval(fam, gauge, spec, f, gamma);
            for (std::int64_t i = 0; i < g.cell_count(); ++i) den.at(i) += term[i];
        }
    }
    DominationOutcome out;
    for_each_cell(g, cube_box(g, build.root), [&](std::int64_t id) {
        const double n = std::fabs(num[id]);
        if (den[id] > 0.0) {
            const double ratio = n / den[id];
            if (ratio > out.constant) {
                out.constant = ratio;
                out.witness_cell = id;
            }
        } else if (n > 1e-12) {
            out.violated = true;
            out.witness_cell = id;
        }
    });
    return out;
}

}  // namespace dyadnum
