// Command line front end: batch verification runs, one-shot norms, weight
// and kernel constants, sparse builds and the quadrature constants.

#include <CLI11.hpp>

#include <iostream>

#include "dyadnum/runner.hpp"
#include "dyadnum/weights.hpp"

namespace {

using namespace dyadnum;

struct CommonArgs {
    std::string config_path;
    std::string out;
    int threads = -1;
    std::uint64_t seed = 0;
    int depth = 0;

    Config load() const {
        Config cfg = config_path.empty() ? Config{} : load_config(config_path);
        if (!out.empty()) cfg.out = out;
        if (threads >= 0) cfg.threads = threads;
        if (seed != 0) cfg.seed = seed;
        if (depth > 0) cfg.J = depth;
        return cfg;
    }
};

void add_common(CLI::App* app, CommonArgs& args) {
    app->add_option("--config", args.config_path, "JSON config file");
    app->add_option("--out", args.out, "output directory");
    app->add_option("--threads", args.threads,
                    "worker threads (0 = hardware, also DYADNUM_THREADS)");
    app->add_option("--seed", args.seed, "replaces the config seed");
    app->add_option("--depth", args.depth, "replaces the grid depth J");
}

int thread_env_default() {
    if (const char* env = std::getenv("DYADNUM_THREADS")) return std::atoi(env);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadic harmonic analysis verification toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    args.threads = thread_env_default();

    // run: execute exactly the checks listed in the config
    CLI::App* run_cmd = app.add_subcommand("run", "execute the config's check list");
    add_common(run_cmd, args);

    // verify fs|cf|sharp|lemmas|all
    std::string verify_group = "all";
    CLI::App* verify = app.add_subcommand("verify", "run a standard check group");
    add_common(verify, args);
    verify->add_option("group", verify_group, "fs|cf|sharp|lemmas|all")->required();

    // sparse build
    CLI::App* sparse = app.add_subcommand("sparse", "sparse domination");
    CLI::App* sparse_build = sparse->add_subcommand("build", "build and dump a sparse family");
    int sparse_m = 1;
    add_common(sparse_build, args);
    sparse_build->add_option("--m", sparse_m, "number of commutator symbols");

    // luxemburg
    CLI::App* lux = app.add_subcommand("luxemburg", "one-shot Luxemburg norm");
    std::string lux_field = "bump", lux_young = "llog:alpha=1";
    int lux_level = 0, lux_i = 0, lux_j = 0;
    add_common(lux, args);
    lux->add_option("--field", lux_field, "field spec");
    lux->add_option("--young", lux_young, "Young function spec");
    lux->add_option("--level", lux_level, "cube level");
    lux->add_option("--i", lux_i, "cube index (first axis)");
    lux->add_option("--j", lux_j, "cube index (second axis)");

    // constants
    CLI::App* constants = app.add_subcommand("constants", "weight constants as CSV");
    double constants_p = 2.0;
    add_common(constants, args);
    constants->add_option("--p", constants_p, "exponent for the A_p constant");

    // hormander
    CLI::App* hormander = app.add_subcommand("hormander", "kernel Hormander constants");
    double hormander_m = 1.0;
    add_common(hormander, args);
    hormander->add_option("--m", hormander_m, "geometric weight base (1 = plain)");

    // quad kphi|ceps|beta
    CLI::App* quad = app.add_subcommand("quad", "explicit constants");
    std::string quad_kind;
    double quad_eps = 0.5;
    int quad_m = 1, quad_l1 = -1, quad_l2 = -1;
    add_common(quad, args);
    quad->add_option("kind", quad_kind, "kphi|ceps|beta")->required();
    quad->add_option("--eps", quad_eps, "epsilon parameter");
    quad->add_option("--m", quad_m, "commutator order");
    quad->add_option("--l1", quad_l1, "first family index");
    quad->add_option("--l2", quad_l2, "second family index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Config cfg = args.load();
        if (run_cmd->parsed()) {
            return run(cfg).exit_code;
        }
        if (verify->parsed()) {
            cfg.checks = verify_checks(verify_group);
            return run(cfg).exit_code;
        }
        if (sparse->parsed() && sparse_build->parsed()) {
            CheckSpec spec;
            spec.name = "sparse";
            spec.params["m"] = sparse_m;
            cfg.checks = {spec};
            return run(cfg).exit_code;
        }
        if (lux->parsed()) {
            Grid g(cfg.n, cfg.J);
            const ScalarField f = make_field(g, lux_field, cfg.seed);
            const Cube q{kBaseLattice, lux_level, {lux_i, lux_j}};
            const double norm = luxemburg_norm(f, cube_box(g, q), make_young(lux_young));
            std::cout << "luxemburg," << lux_field << ',' << lux_young << ','
                      << format_double(norm) << "\n";
            return 0;
        }
        if (constants->parsed()) {
            set_thread_count(cfg.threads);
            Grid g(cfg.n, cfg.J);
            std::filesystem::create_directories(cfg.out);
            std::ofstream csv(cfg.out + "/constants.csv", std::ios::binary);
            csv << "weight,p,a_p,a_1,a_inf_fw,a_inf_weak,rh_exponent\n";
            for (const auto& text : cfg.weights) {
                const Weight w = make_weight(g, text, cfg.seed);
                const WeightConstants k = weight_constants(w, constants_p);
                csv << text << ',' << format_double(k.p) << ',' << format_double(k.a_p) << ','
                    << format_double(k.a_1) << ',' << format_double(k.a_inf_fw) << ','
                    << format_double(k.a_inf_weak) << ',' << format_double(k.rh_exponent)
                    << '\n';
                std::cout << text << ": a_p=" << format_double(k.a_p)
                          << " a_1=" << format_double(k.a_1)
                          << " a_inf=" << format_double(k.a_inf_fw)
                          << " weak=" << format_double(k.a_inf_weak)
                          // reported, not asserted: A_inf sits under the A_p scale
                          << " fw_over_ap=" << format_double(k.a_inf_fw / k.a_p) << "\n";
            }
            return 0;
        }
        if (hormander->parsed()) {
            set_thread_count(cfg.threads);
            Grid g(cfg.n, cfg.J);
            const Kernel k = make_kernel(g, cfg.kernel);
            const HormanderConstants h =
                hormander_constant(k, g, make_young(cfg.young), hormander_m);
            std::cout << "hormander," << cfg.kernel << ',' << cfg.young << ','
                      << format_double(h.h1) << ',' << format_double(h.h2) << "\n";
            return 0;
        }
        if (quad->parsed()) {
            CheckSpec spec;
            if (quad_kind == "kphi") spec.name = "quad_kphi";
            else if (quad_kind == "ceps") spec.name = "quad_ceps";
            else if (quad_kind == "beta") spec.name = "quad_beta";
            else {
                std::cerr << "quad: unknown kind '" << quad_kind << "'\n";
                return 2;
            }
            spec.params["m"] = quad_m;
            spec.params["eps"] = quad_eps;
            if (quad_l1 >= 0) spec.params["l1"] = quad_l1;
            if (quad_l2 >= 0) spec.params["l2"] = quad_l2;
            cfg.checks = {spec};
            return run(cfg).exit_code;
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
