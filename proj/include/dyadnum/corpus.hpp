#pragma once

// Built-in test corpus: canonical fields, weights, kernels and Young
// functions, nameable from CLI configs as "name:key=value,key=value".

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dyadnum/field.hpp"
#include "dyadnum/kernel.hpp"
#include "dyadnum/young.hpp"

namespace dyadnum {

struct NamedSpec {
    std::string name;
    std::map<std::string, double> params;

    double get(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
};

// "llog:alpha=1.0" -> {name="llog", params={alpha:1.0}}
inline NamedSpec parse_spec(const std::string& text) {
    NamedSpec spec;
    const auto colon = text.find(':');
    spec.name = text.substr(0, colon);
    if (colon == std::string::npos) return spec;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("parse_spec: expected key=value in '" + item + "'");
        spec.params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return spec;
}

inline YoungFunction make_young(const NamedSpec& spec) {
    if (spec.name == "power") return make_power(spec.get("r", 2.0), spec.get("scale", 1.0));
    if (spec.name == "llog") return make_llog(spec.get("alpha", 1.0));
    if (spec.name == "llog_loglog")
        return make_llog_loglog(spec.get("alpha", 1.0), spec.get("beta", 1.0));
    if (spec.name == "exp_minus_one") return make_exp_minus_one();
    if (spec.name == "exp_power") return make_exp_power(spec.get("s", 1.0));
    if (spec.name == "power_log") {
        // t^r log^a(e+t), the gauge of the r'-embedding bounds
        const double r = spec.get("r", 2.0), a = spec.get("a", 1.0);
        if (r < 1.0 || a < 0.0) throw std::invalid_argument("power_log: bad parameters");
        return make_custom("power_log(r=" + format_double(r) + ",a=" + format_double(a) + ")",
                           [r, a](double t) {
                               return std::pow(t, r) *
                                      std::pow(std::log(std::exp(1.0) + t), a);
                           });
    }
    throw std::invalid_argument("make_young: unknown gauge '" + spec.name + "'");
}

inline YoungFunction make_young(const std::string& text) { return make_young(parse_spec(text)); }

// ---------------------------------------------------------------------------
// Fields.
// ---------------------------------------------------------------------------

// x0 sits on a cell boundary, so centers stay h/2 away from the singularity.
inline double singular_anchor(const Grid& g) { return 0.5 * g.side(); }

inline ScalarField make_field(const Grid& g, const NamedSpec& spec, std::uint64_t seed = 1) {
    ScalarField f(g);
    const double side = g.side();
    if (spec.name == "constant") {
        for (std::int64_t i = 0; i < g.cell_count(); ++i) f.at(i) = spec.get("value", 1.0);
    } else if (spec.name == "indicator_half") {
        for (std::int64_t i = 0; i < g.cell_count(); ++i)
            f.at(i) = g.cell_center(i)[0] < 0.5 * side ? 1.0 : 0.0;
    } else if (spec.name == "bump") {
        const double cx = spec.get("center", 0.375) * side;
        const double w = spec.get("width", 0.04) * side;
        for (std::int64_t i = 0; i < g.cell_count(); ++i) {
            const auto p = g.cell_center(i);
            const double dy = g.n == 2 ? p[1] - cx : 0.0;
            const double d2 = (p[0] - cx) * (p[0] - cx) + dy * dy;
            f.at(i) = std::exp(-d2 / (w * w));
        }
    } else if (spec.name == "log_singularity") {
        const double x0 = singular_anchor(g);
        for (std::int64_t i = 0; i < g.cell_count(); ++i)
            f.at(i) = std::log(std::fabs(g.cell_center(i)[0] - x0));
    } else if (spec.name == "alternating") {
        for (std::int64_t i = 0; i < g.cell_count(); ++i)
            f.at(i) = g.cell_center(i)[0] < 0.5 * side ? 1.0 : -1.0;
    } else if (spec.name == "sin") {
        const double k = spec.get("k", 2.0);
        for (std::int64_t i = 0; i < g.cell_count(); ++i)
            f.at(i) = std::sin(2.0 * M_PI * k * g.cell_center(i)[0] / side);
    } else if (spec.name == "random") {
        Rng rng(seed);
        const double lo = spec.get("lo", -1.0), hi = spec.get("hi", 1.0);
        for (std::int64_t i = 0; i < g.cell_count(); ++i) f.at(i) = rng.uniform(lo, hi);
    } else {
        throw std::invalid_argument("make_field: unknown field '" + spec.name + "'");
    }
    return f;
}

inline ScalarField make_field(const Grid& g, const std::string& text, std::uint64_t seed = 1) {
    return make_field(g, parse_spec(text), seed);
}

// ---------------------------------------------------------------------------
// Weights.
// ---------------------------------------------------------------------------

// Power weight |x1 - x0|^a in the first coordinate. The cells adjacent to the
// singularity are regularized by the exact cell average of |u|^a over the
// cell, h^a/(a+1) for a > -1.
inline Weight make_weight(const Grid& g, const NamedSpec& spec, std::uint64_t seed = 2) {
    ScalarField f(g);
    if (spec.name == "one") {
        for (std::int64_t i = 0; i < g.cell_count(); ++i) f.at(i) = 1.0;
    } else if (spec.name == "power") {
        const double a = spec.get("a", 0.5);
        if (a <= -1.0) throw std::invalid_argument("make_weight: power exponent must be > -1");
        const double x0 = singular_anchor(g);
        const double h = g.cell_size();
        for (std::int64_t i = 0; i < g.cell_count(); ++i) {
            const double d = std::fabs(g.cell_center(i)[0] - x0);
            f.at(i) = d <= 0.5 * h ? std::pow(h, a) / (a + 1.0) : std::pow(d, a);
        }
    } else if (spec.name == "two_valued") {
        const double a = spec.get("a", 4.0), b = spec.get("b", 0.25);
        for (std::int64_t i = 0; i < g.cell_count(); ++i)
            f.at(i) = g.cell_center(i)[0] < 0.5 * g.side() ? a : b;
    } else if (spec.name == "random") {
        Rng rng(seed);
        const double spread = spec.get("spread", 1.5);
        for (std::int64_t i = 0; i < g.cell_count(); ++i)
            f.at(i) = std::exp(spread * rng.uniform(-1.0, 1.0));
    } else {
        throw std::invalid_argument("make_weight: unknown weight '" + spec.name + "'");
    }
    return Weight(std::move(f));
}

inline Weight make_weight(const Grid& g, const std::string& text, std::uint64_t seed = 2) {
    return make_weight(g, parse_spec(text), seed);
}

// ---------------------------------------------------------------------------
// Kernels.
// ---------------------------------------------------------------------------

inline std::vector<double> omega_profile(const std::string& name, int mesh) {
    std::vector<double> omega(static_cast<std::size_t>(mesh));
    for (int i = 0; i < mesh; ++i) {
        const double theta = 2.0 * M_PI * i / mesh;
        if (name == "sin")
            omega[static_cast<std::size_t>(i)] = std::sin(theta);
        else if (name == "sin2")
            omega[static_cast<std::size_t>(i)] = std::sin(2.0 * theta) + 0.3 * std::sin(theta);
        else
            throw std::invalid_argument("omega_profile: unknown profile '" + name + "'");
    }
    return omega;
}

inline Kernel make_kernel(const Grid& g, const NamedSpec& spec) {
    if (spec.name == "hilbert") {
        if (g.n != 1) throw std::invalid_argument("hilbert kernel is one-dimensional");
        return hilbert_kernel();
    }
    if (spec.name == "perturbed_hilbert") {
        if (g.n != 1) throw std::invalid_argument("perturbed_hilbert kernel is one-dimensional");
        return perturbed_hilbert_kernel(spec.get("eps", 0.5));
    }
    if (spec.name == "homogeneous") {
        if (g.n != 2) throw std::invalid_argument("homogeneous kernel is two-dimensional");
        const int mesh = static_cast<int>(spec.get("mesh", 64.0));
        return homogeneous_kernel(omega_profile("sin", mesh));
    }
    throw std::invalid_argument("make_kernel: unknown kernel '" + spec.name + "'");
}

inline Kernel make_kernel(const Grid& g, const std::string& text) {
    return make_kernel(g, parse_spec(text));
}

// ---------------------------------------------------------------------------
// Default corpus for the verification harness.
// ---------------------------------------------------------------------------

struct Corpus {
    Grid grid;
    Kernel kernel;
    Cube q0;       // 3Q0 stays inside the root domain
    ScalarField f;  // supported in Q0
    std::vector<ScalarField> symbols;
    std::vector<std::pair<std::string, Weight>> weights;
    std::uint64_t seed = 1;
};

inline Cube default_root(const Grid& g) {
    // [1/4, 1/2): dyadic with 3Q0 = [0, 3/4) inside the domain (per axis)
    return Cube{kBaseLattice, 2, {1, g.n == 2 ? 1 : 0}};
}

inline ScalarField bump_in_cube(const Grid& g, const Cube& q) {
    const Box box = cube_box(g, q);
    ScalarField f(g, 0.0);
    const double h = g.cell_size();
    const double cx = (box.lo[0] + box.size / 2.0) * h;
    const double cy = (box.lo[1] + box.size / 2.0) * h;
    const double w = box.size * h / 4.0;
    for_each_cell(g, box, [&](std::int64_t i) {
        const auto p = g.cell_center(i);
        const double dy = g.n == 2 ? p[1] - cy : 0.0;
        f.at(i) = std::exp(-((p[0] - cx) * (p[0] - cx) + dy * dy) / (w * w));
    });
    return f;
}

// Gaussian bulk plus a lacunary tower: the dyadic cubes containing an
// off-center anchor cell, weighted 2^{(l - l0)/2} per level. The tower's
// max-to-mean ratio is the same at every scale, so the stopping-time
// recursion keeps selecting cubes down to the cell level; a plain bump is
// too flat for the doubling threshold search and closes at the root.
inline ScalarField singular_bump_in_cube(const Grid& g, const Cube& q) {
    ScalarField f = bump_in_cube(g, q);
    const Box box = cube_box(g, q);
    // anchor cell at the first quarter of q (per axis)
    const int ax = box.lo[0] + box.size / 4;
    const int ay = g.n == 2 ? box.lo[1] + box.size / 4 : 0;
    for_each_cell(g, box, [&](std::int64_t i) {
        const auto c = g.cell_coords(i);
        // deepest level whose dyadic cube contains both this cell and the anchor
        int shared = g.J;
        while (shared > 0 && ((c[0] >> (g.J - shared)) != (ax >> (g.J - shared)) ||
                              (g.n == 2 && (c[1] >> (g.J - shared)) != (ay >> (g.J - shared)))))
            --shared;
        double tower = 0.0, weight = 1.0;
        for (int level = 0; level <= shared; ++level, weight *= std::sqrt(2.0)) tower += weight;
        f.at(i) += 0.25 * tower;
    });
    return f;
}

inline Corpus default_corpus(int n, int J, std::uint64_t seed = 1) {
    Grid g(n, J);
    Corpus c{g,
             n == 1 ? hilbert_kernel() : make_kernel(g, "homogeneous"),
             default_root(g),
             ScalarField(g),
             {},
             {},
             seed};
    c.f = singular_bump_in_cube(g, c.q0);
    c.symbols.push_back(make_field(g, "log_singularity"));
    c.symbols.push_back(make_field(g, "sin:k=3"));
    c.weights.emplace_back("one", make_weight(g, "one"));
    c.weights.emplace_back("power_half", make_weight(g, "power:a=0.5"));
    c.weights.emplace_back("power_neg_half", make_weight(g, "power:a=-0.5"));
    return c;
}

}  // namespace dyadnum
