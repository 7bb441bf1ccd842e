#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "bimmpp/empirical.hpp"
#include "bimmpp/fit.hpp"
#include "bimmpp/io.hpp"
#include "bimmpp/moments.hpp"
#include "bimmpp/reliability.hpp"
#include "bimmpp/rng.hpp"
#include "bimmpp/simulate.hpp"
#include "bimmpp/threads.hpp"

namespace {

using namespace bimmpp;

std::string make_manifest(const std::string& command,
                          const std::function<void(JsonWriter&)>& options,
                          std::uint64_t seed,
                          const std::map<std::string, std::string>& inputs) {
    JsonWriter w;
    w.begin_object();
    w.key("command").value(command);
    w.key("inputs").begin_object();
    for (const auto& [path, digest] : inputs) w.key(path).value(digest);
    w.end_object();
    w.key("options").begin_object();
    options(w);
    w.end_object();
    w.key("seed").value(static_cast<unsigned long long>(seed));
    w.key("version").value(library_version());
    w.end_object();
    return w.str();
}

std::string digest_of(const std::string& content) {
    return "fnv1a64:" + fnv1a64_hex(content);
}

struct SimulateArgs {
    std::string params_path;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string out_path;
};

int run_simulate(const SimulateArgs& a, int threads) {
    if (a.n < 1) throw InvalidParameter("simulate: --n must be >= 1");
    const std::string params_text = read_text_file(a.params_path);
    const ModelParams params = params_from_json(params_text);
    const BivariateTrace trace = simulate_trace(params, a.n, RngStream(a.seed, 0));
    std::ostringstream csv;
    write_trace_csv(trace, csv);
    write_text_file(a.out_path, csv.str());
    const std::string manifest = make_manifest(
        "simulate",
        [&](JsonWriter& w) {
            w.key("n").value(static_cast<unsigned long long>(a.n));
            w.key("out").value(a.out_path);
            w.key("params").value(a.params_path);
            w.key("seed").value(static_cast<unsigned long long>(a.seed));
            w.key("threads").value(threads);
        },
        a.seed, {{a.params_path, digest_of(params_text)}});
    write_text_file(a.out_path + ".manifest.json", manifest + "\n");
    return 0;
}

struct MomentsArgs {
    std::string params_path;
    std::string trace_path;
    std::string out_path;
};

int run_moments(const MomentsArgs& a, int threads) {
    MomentSet ms;
    std::map<std::string, std::string> inputs;
    if (!a.params_path.empty()) {
        const std::string text = read_text_file(a.params_path);
        ms = theoretical_moment_set(params_from_json(text));
        inputs[a.params_path] = digest_of(text);
    } else {
        const std::string text = read_text_file(a.trace_path);
        std::istringstream in(text);
        ms = empirical_moment_set(read_trace_csv(in));
        inputs[a.trace_path] = digest_of(text);
    }
    const std::string json = to_json(ms);
    if (a.out_path.empty()) {
        std::cout << json << "\n";
        return 0;
    }
    write_text_file(a.out_path, json + "\n");
    const std::string manifest = make_manifest(
        "moments",
        [&](JsonWriter& w) {
            w.key("out").value(a.out_path);
            if (!a.params_path.empty()) w.key("params").value(a.params_path);
            w.key("threads").value(threads);
            if (!a.trace_path.empty()) w.key("trace").value(a.trace_path);
        },
        0, inputs);
    write_text_file(a.out_path + ".manifest.json", manifest + "\n");
    return 0;
}

struct FitArgs {
    std::string trace_path;
    int restarts = 100;
    int abc_iters = 10000;
    double accept = 0.01;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string dump_draws_path;
    bool four_moments = false;
};

int run_fit(const FitArgs& a, int threads) {
    const std::string trace_text = read_text_file(a.trace_path);
    std::istringstream in(trace_text);
    const BivariateTrace trace = read_trace_csv(in);

    AbcConfig cfg;
    cfg.iterations = a.abc_iters;
    cfg.acceptance_fraction = a.accept;
    cfg.seed = a.seed;
    cfg.include_eta22 = a.four_moments;
    const FitResult fit = fit_pipeline(trace, a.restarts, cfg);

    write_text_file(a.out_path, to_json(fit) + "\n");
    if (!a.dump_draws_path.empty())
        write_text_file(a.dump_draws_path, accepted_draws_csv(fit));
    const std::string manifest = make_manifest(
        "fit",
        [&](JsonWriter& w) {
            w.key("abc_iters").value(a.abc_iters);
            w.key("accept").value(a.accept);
            if (!a.dump_draws_path.empty())
                w.key("dump_draws").value(a.dump_draws_path);
            w.key("four_moments").value(a.four_moments);
            w.key("out").value(a.out_path);
            w.key("restarts").value(a.restarts);
            w.key("seed").value(static_cast<unsigned long long>(a.seed));
            w.key("threads").value(threads);
            w.key("trace").value(a.trace_path);
        },
        a.seed, {{a.trace_path, digest_of(trace_text)}});
    write_text_file(a.out_path + ".manifest.json", manifest + "\n");
    return 0;
}

struct ReliabilityArgs {
    std::string params_path;
    std::string queries_path;
    int reps = 1000;
    std::size_t n_per_rep = 0;
    std::uint64_t seed = 0;
    std::string out_path;
};

int run_reliability(const ReliabilityArgs& a, int threads) {
    if (a.n_per_rep < 1)
        throw InvalidParameter("reliability: --n-per-rep must be >= 1");
    const std::string params_text = read_text_file(a.params_path);
    const std::string queries_text = read_text_file(a.queries_path);
    const ModelParams params = params_from_json(params_text);
    const auto queries = queries_from_json(queries_text);
    const ReliabilityReport report =
        estimate(params, queries, a.reps, a.n_per_rep, a.seed);
    write_text_file(a.out_path, to_json(report) + "\n");
    const std::string manifest = make_manifest(
        "reliability",
        [&](JsonWriter& w) {
            w.key("n_per_rep").value(static_cast<unsigned long long>(a.n_per_rep));
            w.key("out").value(a.out_path);
            w.key("params").value(a.params_path);
            w.key("queries").value(a.queries_path);
            w.key("reps").value(a.reps);
            w.key("seed").value(static_cast<unsigned long long>(a.seed));
            w.key("threads").value(threads);
        },
        a.seed,
        {{a.params_path, digest_of(params_text)},
         {a.queries_path, digest_of(queries_text)}});
    write_text_file(a.out_path + ".manifest.json", manifest + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bivariate MMPP2: simulation, moments, fitting, reliability"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads,
                   "max worker threads, 0 = hardware default");

    SimulateArgs sim_args;
    auto* sim = app.add_subcommand("simulate", "generate a failure trace CSV");
    sim->add_option("--params", sim_args.params_path, "model params JSON")->required();
    sim->add_option("--n", sim_args.n, "number of failures")->required();
    sim->add_option("--seed", sim_args.seed, "random seed");
    sim->add_option("--out", sim_args.out_path, "output CSV path")->required();

    MomentsArgs mom_args;
    auto* mom = app.add_subcommand(
        "moments", "theoretical (from params) or empirical (from trace) moments");
    auto* mp = mom->add_option("--params", mom_args.params_path, "model params JSON");
    auto* mt = mom->add_option("--trace", mom_args.trace_path, "trace CSV");
    mp->excludes(mt);
    mt->excludes(mp);
    mom->add_option("--out", mom_args.out_path, "output JSON path (default stdout)");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "two-step parameter estimation");
    fit->add_option("--trace", fit_args.trace_path, "trace CSV")->required();
    fit->add_option("--restarts", fit_args.restarts, "stage-one restarts");
    fit->add_option("--abc-iters", fit_args.abc_iters, "ABC iterations");
    fit->add_option("--accept", fit_args.accept, "ABC acceptance fraction");
    fit->add_option("--seed", fit_args.seed, "random seed");
    fit->add_option("--out", fit_args.out_path, "output JSON path")->required();
    fit->add_option("--dump-draws", fit_args.dump_draws_path,
                    "also write accepted draws CSV here");
    fit->add_flag("--abc-four-moments", fit_args.four_moments,
                  "include E(T^2 K^2) in the ABC distance");

    ReliabilityArgs rel_args;
    auto* rel = app.add_subcommand("reliability", "Monte Carlo reliability report");
    rel->add_option("--params", rel_args.params_path, "model params JSON")->required();
    rel->add_option("--queries", rel_args.queries_path, "queries JSON")->required();
    rel->add_option("--reps", rel_args.reps, "replications");
    rel->add_option("--n-per-rep", rel_args.n_per_rep, "failures per replication")
        ->required();
    rel->add_option("--seed", rel_args.seed, "random seed");
    rel->add_option("--out", rel_args.out_path, "output JSON path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    bimmpp::set_max_threads(threads);
    try {
        if (*mom) {
            if (mom_args.params_path.empty() == mom_args.trace_path.empty()) {
                std::cerr << "usage error: moments needs exactly one of --params, "
                             "--trace\n";
                return 1;
            }
            return run_moments(mom_args, threads);
        }
        if (*sim) return run_simulate(sim_args, threads);
        if (*fit) return run_fit(fit_args, threads);
        if (*rel) return run_reliability(rel_args, threads);
    } catch (const bimmpp::Error& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
        return e.category() == bimmpp::ErrorCategory::Validation ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
