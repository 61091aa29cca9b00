#pragma once

// Batch experiment runner: JSON config -> corpus -> checks -> CSV artifacts.
// (config, seed) determines every output byte: all randomness flows through
// the seeded Rng and all numbers are printed with a fixed format.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyadnum/checks.hpp"
#include "dyadnum/corpus.hpp"
#include "dyadnum/io.hpp"
#include "dyadnum/quadrature.hpp"
#include "dyadnum/sparse.hpp"

namespace dyadnum {

struct CheckSpec {
    std::string name;
    std::map<std::string, double> params;
    std::vector<std::string> lemma_names;
    std::string variant = "loglog";
    std::string b_gauge = "llog:alpha=1";
    std::string weight;  // empty: first configured weight

    double get(const std::string& key, double fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
};

struct Config {
    int n = 1;
    int J = 10;
    std::string kernel = "hilbert";       // or "csv" with kernel_path
    std::string kernel_path;
    double kernel_size_constant = 1.0;
    std::string f = "singular_bump";  // placed inside the sparse root cube; "csv" reads f_path
    std::string f_path;
    std::vector<std::string> symbols = {"log_singularity", "sin:k=3"};
    std::vector<std::string> weights = {"one", "power:a=0.5", "power:a=-0.5"};
    std::string young = "power:r=1";
    std::vector<CheckSpec> checks;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out = "out";
};

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
}

}  // namespace detail

inline Config parse_config(const nlohmann::json& j) {
    detail::require_keys(j,
                         {"grid", "kernel", "kernel_path", "kernel_size_constant", "f", "f_path",
                          "symbols", "weights", "young", "checks", "seed", "threads", "out"},
                         "top level");
    Config c;
    if (j.contains("grid")) {
        detail::require_keys(j["grid"], {"n", "J"}, "grid");
        c.n = j["grid"].value("n", c.n);
        c.J = j["grid"].value("J", c.J);
    }
    c.kernel = j.value("kernel", c.kernel);
    c.kernel_path = j.value("kernel_path", c.kernel_path);
    c.kernel_size_constant = j.value("kernel_size_constant", c.kernel_size_constant);
    c.f = j.value("f", c.f);
    c.f_path = j.value("f_path", c.f_path);
    if (j.contains("symbols")) c.symbols = j["symbols"].get<std::vector<std::string>>();
    if (j.contains("weights")) c.weights = j["weights"].get<std::vector<std::string>>();
    c.young = j.value("young", c.young);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.out = j.value("out", c.out);
    if (j.contains("checks")) {
        for (const auto& jc : j["checks"]) {
            detail::require_keys(jc,
                                 {"name", "m", "eps", "p", "delta", "l1", "l2", "r", "variant",
                                  "b_gauge", "weight", "names", "lambda_points"},
                                 "checks[]");
            CheckSpec spec;
            spec.name = jc.at("name").get<std::string>();
            for (const char* key : {"m", "eps", "p", "delta", "l1", "l2", "r", "lambda_points"})
                if (jc.contains(key)) spec.params[key] = jc[key].get<double>();
            spec.variant = jc.value("variant", spec.variant);
            spec.b_gauge = jc.value("b_gauge", spec.b_gauge);
            spec.weight = jc.value("weight", spec.weight);
            if (jc.contains("names"))
                spec.lemma_names = jc["names"].get<std::vector<std::string>>();
            c.checks.push_back(spec);
        }
    }
    return c;
}

inline Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    nlohmann::json j;
    in >> j;
    return parse_config(j);
}

struct RunResult {
    int exit_code = 0;
    std::vector<CheckReport> reports;
};

namespace detail {

inline Corpus corpus_from_config(const Config& cfg) {
    Grid g(cfg.n, cfg.J);
    Corpus corpus{g,
                  cfg.kernel == "csv"
                      ? read_kernel_csv(g, cfg.kernel_path, cfg.kernel_size_constant)
                      : make_kernel(g, cfg.kernel),
                  default_root(g),
                  ScalarField(g),
                  {},
                  {},
                  cfg.seed};
    corpus.f = cfg.f == "singular_bump" ? singular_bump_in_cube(g, corpus.q0)
               : cfg.f == "bump"          ? bump_in_cube(g, corpus.q0)
               : cfg.f == "csv"           ? read_field_csv(g, cfg.f_path)
                                          : make_field(g, cfg.f, cfg.seed);
    int offset = 0;
    for (const auto& text : cfg.symbols)
        corpus.symbols.push_back(make_field(g, text, cfg.seed + 17 * ++offset));
    for (const auto& text : cfg.weights)
        corpus.weights.emplace_back(text, make_weight(g, text, cfg.seed + 29 * ++offset));
    if (corpus.symbols.empty()) corpus.symbols.push_back(make_field(g, "log_singularity"));
    if (corpus.weights.empty()) corpus.weights.emplace_back("one", make_weight(g, "one"));
    return corpus;
}

inline const Weight& pick_weight(const Corpus& corpus, const std::string& name) {
    if (name.empty()) return corpus.weights.front().second;
    for (const auto& [wname, w] : corpus.weights)
        if (wname == name) return w;
    throw std::invalid_argument("config: weight '" + name + "' is not configured");
}

inline std::vector<ScalarField> leading_symbols(const Corpus& corpus, int m) {
    if (m > static_cast<int>(corpus.symbols.size()))
        throw std::invalid_argument("config: not enough symbols for the requested order");
    return {corpus.symbols.begin(), corpus.symbols.begin() + m};
}

struct BuildCache {
    std::optional<SparseDominationReport> build;
    int built_m = -1;

    const SparseDominationReport& get(const Corpus& corpus, const YoungFunction& gauge, int m) {
        if (!build || built_m != m) {
            const auto cert = certify_y_class(gauge, 1.0, 1.0);
            if (!cert)
                throw std::runtime_error("runner: the configured gauge has no Y(1,1) certificate");
            CommutatorSpec spec;
            spec.symbols = leading_symbols(corpus, m);
            build = build_sparse_family(corpus.kernel, spec, corpus.f, corpus.q0, gauge, *cert);
            built_m = m;
        }
        return *build;
    }
};

inline void write_family_csv(const std::string& path, const SparseDominationReport& rep) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "lattice,level,i,j,size,e_cells\n";
    for (const auto& e : rep.family.entries)
        out << e.cube.lattice << ',' << e.cube.level << ',' << e.cube.idx[0] << ','
            << e.cube.idx[1] << ',' << e.box.size << ',' << e.own.count() << '\n';
}

}  // namespace detail

// Executes the configured checks, writes one CSV per check plus a summary,
// and returns exit status 0 unless some hard check failed (2 is reserved for
// usage errors in the CLI).
inline RunResult run(const Config& cfg) {
    set_thread_count(cfg.threads);
    std::filesystem::create_directories(cfg.out);
    Corpus corpus = detail::corpus_from_config(cfg);
    const YoungFunction gauge = make_young(cfg.young);
    detail::BuildCache cache;

    RunResult result;
    auto emit = [&](CheckReport report) {
        write_report_csv(cfg.out + "/" + report.name + ".csv", report);
        std::cout << summary_line(report) << "\n";
        result.reports.push_back(std::move(report));
    };

    for (const auto& spec : cfg.checks) {
        const int m = static_cast<int>(spec.get("m", 1));
        if (spec.name == "fs") {
            const FsVariant variant = spec.variant == "loglog" ? FsVariant::loglog
                                      : spec.variant == "llog" ? FsVariant::llog_eps
                                      : spec.variant == "weak"
                                          ? FsVariant::weak_weight
                                          : throw std::invalid_argument("config: fs variant '" +
                                                                        spec.variant + "'");
            emit(weak_type_fs(corpus.kernel, detail::leading_symbols(corpus, m), corpus.f,
                              detail::pick_weight(corpus, spec.weight), spec.get("eps", 0.5),
                              variant, static_cast<int>(spec.get("lambda_points", 32))));
        } else if (spec.name == "fs_sweep") {
            // epsilon-scaling series: one row per (m, eps)
            CheckReport series("fs_sweep");
            for (int mm : {1, 2}) {
                for (double eps : {0.5, 0.25, 0.125}) {
                    const CheckReport r = weak_type_fs(
                        corpus.kernel, detail::leading_symbols(corpus, mm), corpus.f,
                        detail::pick_weight(corpus, spec.weight), eps);
                    series.samples.push_back({eps + mm, r.empirical_constant * eps, 0.0});
                    series.empirical_constant =
                        std::max(series.empirical_constant, r.empirical_constant * eps);
                }
            }
            series.finish();
            emit(series);
        } else if (spec.name == "cf_sweep") {
            // p-sweep series: one row per exponent, lhs = integral ratio,
            // rhs = norm-form ratio
            CheckReport series("cf_sweep_m" + std::to_string(m));
            for (double p : {0.5, 1.0, 2.0, 3.0}) {
                const CfOutcome out = coifman_fefferman(
                    corpus.kernel, CommutatorSpec{detail::leading_symbols(corpus, m)}, corpus.f,
                    detail::pick_weight(corpus, spec.weight), p, gauge,
                    make_young(spec.b_gauge));
                series.samples.push_back({p, out.integral.empirical_constant, out.norm_ratio});
                series.empirical_constant =
                    std::max(series.empirical_constant, out.integral.empirical_constant);
            }
            series.finish();
            emit(series);
        } else if (spec.name == "cf") {
            CfOutcome out = coifman_fefferman(
                corpus.kernel, CommutatorSpec{detail::leading_symbols(corpus, m)}, corpus.f,
                detail::pick_weight(corpus, spec.weight), spec.get("p", 2.0), gauge,
                make_young(spec.b_gauge));
            out.integral.witness += (out.integral.witness.empty() ? "" : ";");
            out.integral.witness += "norm_ratio=" + format_double(out.norm_ratio) +
                                    ";compat=" + format_double(out.compat_constant);
            emit(out.integral);
        } else if (spec.name == "sharp") {
            const YoungFunction abar = conjugate(gauge);
            emit(sharp_maximal_check(corpus.kernel,
                                     CommutatorSpec{detail::leading_symbols(corpus, m)}, corpus.f,
                                     spec.get("delta", 0.25), spec.get("eps", 0.5),
                                     make_young(spec.b_gauge), &abar));
        } else if (spec.name == "lemmas") {
            const auto& build = cache.get(corpus, gauge, std::min<int>(m, 1));
            LemmaContext ctx{corpus, &build};
            for (auto& report : lemma_suite(ctx, spec.lemma_names)) emit(std::move(report));
        } else if (spec.name == "sparse") {
            const auto& build = cache.get(corpus, gauge, m);
            detail::write_family_csv(cfg.out + "/sparse_family.csv", build);
            CommutatorSpec cspec{detail::leading_symbols(corpus, m)};
            const auto verification = verify_sparse(build.family, 0.5);
            const auto outcome =
                domination_report(corpus.kernel, cspec, corpus.f, gauge, build);
            CheckReport report("sparse_build_m" + std::to_string(m));
            report.hard = true;
            report.empirical_constant = outcome.constant;
            report.pass = verification.pass && !outcome.violated &&
                          std::isfinite(outcome.constant);
            report.witness = "depth=" + std::to_string(build.max_depth) +
                             ";alpha=" + format_double(build.max_alpha) +
                             ";c_t=" + format_double(build.c_t) +
                             ";eta_lattice=" + format_double(build.measured_eta_lattice);
            if (!verification.pass) report.witness += ";" + verification.witness;
            for (const auto& node : build.nodes)
                report.samples.push_back({static_cast<double>(node.depth),
                                          static_cast<double>(node.selected_cells),
                                          static_cast<double>(node.box_cells)});
            emit(std::move(report));
        } else if (spec.name == "quad_kphi") {
            const int l1 = static_cast<int>(spec.get("l1", m));
            const int l2 = static_cast<int>(spec.get("l2", m));
            const double eps = spec.get("eps", 0.5);
            const YoungFunction phi = make_llog_loglog(m - l1 + l2, 1.0 + eps);
            const YoungFunction a_gauge = make_phi(m - l1);
            const QuadratureResult q = k_phi(phi, a_gauge, m, l1, l2);
            CheckReport report("quad_kphi");
            report.empirical_constant = q.value;
            report.pass = !q.divergent;
            report.witness = std::string(q.divergent ? "divergent" : "converged=") +
                             (q.divergent ? "" : (q.converged ? "yes" : "no")) +
                             ";tail=" + format_double(q.tail_estimate) +
                             ";c_n=not_computed";
            report.samples.push_back({eps, q.value, q.tail_estimate});
            emit(std::move(report));
        } else if (spec.name == "quad_ceps") {
            const double eps = spec.get("eps", 0.5);
            CheckReport report("quad_ceps");
            report.empirical_constant = c_eps(eps);
            report.pass = std::isfinite(report.empirical_constant);
            report.samples.push_back({eps, c_eps(eps), c_eps_m(m, eps)});
            emit(std::move(report));
        } else if (spec.name == "quad_beta") {
            const int l1 = static_cast<int>(spec.get("l1", 1));
            const int l2 = static_cast<int>(spec.get("l2", 0));
            const double r = spec.get("r", beta_default_ratio(l1));
            const double eps = spec.get("eps", 0.5);
            const YoungFunction phi = make_llog_loglog(m - l1 + l2, 1.0 + eps);
            const double value = beta_const(m, l1, l2, r, make_phi(m - l1), phi, cfg.n);
            CheckReport report("quad_beta");
            report.empirical_constant = value;
            report.pass = std::isfinite(value);
            report.samples.push_back({r, value, 0.0});
            emit(std::move(report));
        } else {
            throw std::invalid_argument("config: unknown check '" + spec.name + "'");
        }
    }

    write_summary_csv(cfg.out + "/summary.csv", result.reports);
    for (const auto& report : result.reports)
        if (report.hard && !report.pass) result.exit_code = 1;
    return result;
}

// Convenience check lists for the CLI's verify subcommands.
inline std::vector<CheckSpec> verify_checks(const std::string& which) {
    std::vector<CheckSpec> out;
    auto add = [&](const std::string& name, std::map<std::string, double> params = {}) {
        CheckSpec spec;
        spec.name = name;
        spec.params = std::move(params);
        out.push_back(spec);
    };
    if (which == "fs" || which == "all") {
        add("fs", {{"m", 1}, {"eps", 0.5}});
        add("fs_sweep");
    }
    if (which == "cf" || which == "all") {
        add("cf", {{"m", 0}, {"p", 2}});
        add("cf", {{"m", 1}, {"p", 2}});
        add("cf_sweep", {{"m", 1}});
    }
    if (which == "sharp" || which == "all") add("sharp", {{"m", 1}});
    if (which == "lemmas" || which == "all") add("lemmas");
    if (which == "all") add("sparse", {{"m", 1}});
    if (out.empty()) throw std::invalid_argument("verify: unknown group '" + which + "'");
    return out;
}

}  // namespace dyadnum
