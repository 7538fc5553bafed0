// qconsim — quantized-consensus simulator.
//
// Subcommands:
//   simulate  run a Monte Carlo experiment grid and write the result table
//   schedule  print decay parameters and write a quantization-range schedule
//   spectral  print the spectral summary / validation report of a weight matrix
//   replay    re-verify a binary trace archive against the closed-form expansion
//
// Exit codes: 0 success, 1 data error (infeasible bit budget, IO, tolerance
// exceeded), 2 usage error.

#include <cmath>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "consensus/bench.hpp"
#include "consensus/engine.hpp"
#include "consensus/errors.hpp"
#include "consensus/graph.hpp"
#include "consensus/schedule.hpp"
#include "consensus/spectral.hpp"
#include "consensus/textio.hpp"
#include "consensus/weights.hpp"

namespace {

using namespace consensus;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_text_file(out_path, text);
}

// ---------------------------------------------------------------- simulate --

struct SimulateArgs {
    std::string config_path, out_path, archive_path;
    std::string format = "csv";
    std::optional<int> nodes, trials, horizon, threads;
    std::optional<double> radius, laplacian_a, clamp_delta, init_lo, init_hi;
    std::optional<std::uint64_t> seed;
    std::vector<int> bits;
    std::vector<std::string> codecs, weights;
};

int cmd_simulate(const SimulateArgs& a) {
    ExperimentConfig cfg;
    if (!a.config_path.empty()) cfg = config_from_json(read_text_file(a.config_path));
    if (a.nodes) cfg.nodes = *a.nodes;
    if (a.radius) cfg.radius = *a.radius;
    if (a.trials) cfg.trials = *a.trials;
    if (a.horizon) cfg.horizon = *a.horizon;
    if (a.threads) cfg.threads = *a.threads;
    if (a.laplacian_a) cfg.laplacian_a = *a.laplacian_a;
    if (a.clamp_delta) cfg.clamp_delta = *a.clamp_delta;
    if (a.init_lo) cfg.init_lo = *a.init_lo;
    if (a.init_hi) cfg.init_hi = *a.init_hi;
    if (a.seed) cfg.seed = *a.seed;
    if (!a.bits.empty()) cfg.bits = a.bits;
    if (!a.codecs.empty()) {
        cfg.codecs.clear();
        for (const auto& name : a.codecs) cfg.codecs.push_back(parse_codec_kind(name));
    }
    if (!a.weights.empty()) {
        cfg.weights.clear();
        for (const auto& name : a.weights) cfg.weights.push_back(parse_weight_kind(name));
    }
    for (int n : cfg.bits)
        if (n < 1) throw ParameterOutOfRange("--bits entries must be >= 1");

    const ResultTable table = run_experiment(cfg);
    emit(a.format == "json" ? table_to_json(table) : table_to_csv(table), a.out_path);
    for (const auto& c : table.combos) {
        if (c.excluded_trials > 0)
            std::fprintf(stderr,
                         "note: codec %s n=%d %s: %d/%d trials infeasible (%s); min feasible "
                         "bits %d\n",
                         to_string(c.codec).c_str(), c.bits, to_string(c.weights).c_str(),
                         c.excluded_trials, table.trials, c.exclusion_reason.c_str(),
                         c.suggested_min_bits);
    }
    if (!a.archive_path.empty()) {
        const SingleRun run = run_single_trial(cfg, 0, 0);
        save_trace(run.trace, run.w, a.archive_path);
        std::fprintf(stderr, "archived trial 0, combo 0 to %s\n", a.archive_path.c_str());
    }
    return 0;
}

// ------------------------------------------------------- topology plumbing --

// Shared by `schedule` and `spectral` so identical flags describe identical
// graphs; defaults mirror the simulate config (40-node RGG, Metropolis).
struct TopologyArgs {
    int nodes = 40;
    std::string topology = "rgg";
    double radius = -1.0;
    std::uint64_t seed = 1;
    std::string weights = "metropolis";
    double laplacian_a = -1.0;
    std::string load_path;
};

Graph make_topology(const TopologyArgs& a) {
    if (!a.load_path.empty()) return graph_from_json(read_text_file(a.load_path));
    if (a.topology == "path") return path_graph(a.nodes);
    if (a.topology == "rgg") {
        const double r = a.radius < 0 ? default_rgg_radius(a.nodes) : a.radius;
        return sample_connected_rgg(a.nodes, r, a.seed);
    }
    throw ParameterOutOfRange("unknown topology '" + a.topology + "' (expected rgg or path)");
}

WeightMatrix make_weights(const Graph& g, const TopologyArgs& a) {
    if (a.weights == "metropolis") return metropolis_weights(g);
    if (a.weights == "laplacian")
        return laplacian_weights(g, a.laplacian_a < 0 ? default_laplacian_a(g) : a.laplacian_a);
    throw ParameterOutOfRange("unknown weight rule '" + a.weights + "'");
}

// ---------------------------------------------------------------- schedule --

struct ScheduleArgs {
    TopologyArgs top;
    int bits = 2;
    double z0_inf = 1.0;
    double s0 = 1.0;
    std::string model = "recursive";
    int horizon = 100;
    double clamp_delta = 1e-16;
    std::string out_path;
};

int cmd_schedule(const ScheduleArgs& a) {
    if (a.bits < 1) throw ParameterOutOfRange("--bits must be >= 1");
    const Graph g = make_topology(a.top);
    const WeightMatrix w = make_weights(g, a.top);

    std::printf("m: %d\n", g.m);
    std::printf("lambda2: %s\n", fmt12(w.lambda2).c_str());
    std::printf("lambda_min: %s\n", fmt12(w.lambda_min).c_str());
    std::printf("min_bits: %d\n", min_bits(w.lambda2, w.lambda_min));
    std::printf("stable_at_%d_bits: %s\n", a.bits,
                stability_condition(w.lambda2, w.lambda_min, a.bits) ? "yes" : "no");

    bool have_exp = false;
    DecayParams p;
    try {
        p = exponential_params(w.lambda2, w.lambda_min, a.bits, a.z0_inf);
        have_exp = true;
        std::printf("alpha: %s\n", fmt12(p.alpha).c_str());
        std::printf("gamma: %s\n", fmt12(p.gamma).c_str());
    } catch (const NonPositiveLogArgument& e) {
        std::printf("alpha: %s\n", fmt12(-std::log(w.lambda2)).c_str());
        std::printf("gamma: undefined (%s; min feasible bits %d)\n", e.what(),
                    e.min_feasible_bits);
        if (a.model == "exponential") throw;
    }

    RangeSchedule sched;
    if (a.model == "recursive") {
        ScheduleInputs in;
        in.lambda2 = w.lambda2;
        in.lambda_min = w.lambda_min;
        in.bits = a.bits;
        in.z0_inf = a.z0_inf;
        in.s0 = a.s0;
        in.norms = ws_wi_norms(w, std::max(1, a.horizon));
        in.clamp_delta = a.clamp_delta;
        sched = recursive_ranges(in, a.horizon);
    } else if (a.model == "exponential") {
        if (!have_exp) return 1;  // unreachable: the throw above already surfaced it
        sched = exponential_ranges(p, a.s0, a.horizon, a.clamp_delta);
    } else {
        throw ParameterOutOfRange("unknown model '" + a.model +
                                  "' (expected recursive or exponential)");
    }
    if (sched.horizon() >= 1) std::printf("S_1: %s\n", fmt12(sched.sizes[1]).c_str());
    if (!a.out_path.empty()) {
        write_text_file(a.out_path, schedule_to_csv(sched));
        std::fprintf(stderr, "wrote %d schedule rows to %s\n", sched.horizon() + 1,
                     a.out_path.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------- spectral --

struct SpectralArgs {
    TopologyArgs top;
    std::string out_path;
};

int cmd_spectral(const SpectralArgs& a) {
    const Graph g = make_topology(a.top);
    const WeightMatrix w = make_weights(g, a.top);
    const ValidationReport rep = validate_consensus_matrix(w.w);

    std::printf("m: %d\n", g.m);
    std::printf("edges: %zu\n", g.edges.size());
    std::printf("max_degree: %d\n", g.max_degree());
    std::printf("lambda2: %s\n", fmt12(w.lambda2).c_str());
    std::printf("lambda_min: %s\n", fmt12(w.lambda_min).c_str());
    std::printf("norm_w_minus_i: %s\n", fmt12(1.0 - w.lambda_min).c_str());
    std::printf("min_bits: %d\n", min_bits(w.lambda2, w.lambda_min));
    std::printf("valid: %s\n", rep.ok() ? "yes" : "no");
    std::printf("  symmetric: %s (residual %s)\n", rep.symmetric ? "yes" : "no",
                fmt12(rep.max_symmetry_residual).c_str());
    std::printf("  row_stochastic: %s (residual %s)\n", rep.row_stochastic ? "yes" : "no",
                fmt12(rep.max_row_residual).c_str());
    std::printf("  col_stochastic: %s (residual %s)\n", rep.col_stochastic ? "yes" : "no",
                fmt12(rep.max_col_residual).c_str());
    std::printf("  spectral_gap: %s\n", rep.spectral_gap ? "yes" : "no");
    if (!a.out_path.empty()) write_text_file(a.out_path, graph_to_json(g));
    return 0;
}

// ------------------------------------------------------------------ replay --

struct ReplayArgs {
    std::string archive_path;
    double tol = 1e-8;
};

int cmd_replay(const ReplayArgs& a) {
    const LoadedTrace loaded = load_trace(a.archive_path);
    const WeightMatrix w = make_weight_matrix(loaded.w);
    const double dev = expansion_check(loaded.trace, w);
    std::printf("m: %d\n", loaded.trace.m);
    std::printf("T: %d\n", loaded.trace.T);
    std::printf("expansion_deviation: %s\n", fmt12(dev).c_str());
    if (!(dev < a.tol)) {
        std::fprintf(stderr, "replay FAILED: deviation %s exceeds tolerance %s\n",
                     fmt12(dev).c_str(), fmt12(a.tol).c_str());
        return 1;
    }
    std::printf("replay: ok\n");
    return 0;
}

void add_topology_flags(CLI::App* cmd, TopologyArgs& t) {
    cmd->add_option("--nodes", t.nodes, "node count (default 40)");
    cmd->add_option("--topology", t.topology, "rgg | path (default rgg)")
        ->check(CLI::IsMember({"rgg", "path"}));
    cmd->add_option("--radius", t.radius, "RGG radius (default sqrt(log m / m))");
    cmd->add_option("--seed", t.seed, "graph seed");
    cmd->add_option("--weights", t.weights, "metropolis | laplacian")
        ->check(CLI::IsMember({"metropolis", "laplacian"}));
    cmd->add_option("--laplacian-a", t.laplacian_a, "Laplacian step (default 0.99/max degree)");
    cmd->add_option("--load", t.load_path, "load a graph JSON instead of generating");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantized-consensus simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "run a Monte Carlo experiment grid");
    simulate->add_option("--config", sim.config_path, "JSON config file (flags override it)");
    simulate->add_option("--nodes", sim.nodes, "node count");
    simulate->add_option("--radius", sim.radius, "RGG radius (default sqrt(log m / m))");
    simulate->add_option("--bits", sim.bits, "bit budgets, e.g. 2,4,6")->delimiter(',');
    simulate->add_option("--trials", sim.trials, "Monte Carlo trials");
    simulate->add_option("--horizon", sim.horizon, "iterations per run");
    simulate->add_option("--codec", sim.codecs,
                         "codecs: progq, progq-rec, unifq, zoomq, adaptq, noquant")
        ->delimiter(',');
    simulate->add_option("--weights", sim.weights, "weight rules: metropolis, laplacian")
        ->delimiter(',');
    simulate->add_option("--laplacian-a", sim.laplacian_a, "Laplacian step");
    simulate->add_option("--seed", sim.seed, "base seed");
    simulate->add_option("--clamp-delta", sim.clamp_delta, "schedule plateau threshold");
    simulate->add_option("--threads", sim.threads, "worker threads (0 = hardware)");
    simulate->add_option("--init-lo", sim.init_lo, "initial interval lower end");
    simulate->add_option("--init-hi", sim.init_hi, "initial interval upper end");
    simulate->add_option("--out", sim.out_path, "output path (default stdout)");
    simulate->add_option("--format", sim.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    simulate->add_option("--archive", sim.archive_path, "save trial 0 of the first combo");

    ScheduleArgs sch;
    CLI::App* schedule = app.add_subcommand("schedule", "print decay parameters and a schedule");
    add_topology_flags(schedule, sch.top);
    schedule->add_option("--bits", sch.bits, "bit budget n");
    schedule->add_option("--z0-inf", sch.z0_inf, "max |initial state|");
    schedule->add_option("--s0", sch.s0, "initial interval size S_0");
    schedule->add_option("--model", sch.model, "recursive | exponential")
        ->check(CLI::IsMember({"recursive", "exponential"}));
    schedule->add_option("--horizon", sch.horizon, "schedule length T");
    schedule->add_option("--clamp-delta", sch.clamp_delta, "plateau threshold (0 disables)");
    schedule->add_option("--out", sch.out_path, "write t,S_t,beta_t CSV here");

    SpectralArgs spc;
    CLI::App* spectral = app.add_subcommand("spectral", "spectral summary of a weight matrix");
    add_topology_flags(spectral, spc.top);
    spectral->add_option("--out", spc.out_path, "write the graph JSON here");

    ReplayArgs rep;
    CLI::App* replay = app.add_subcommand("replay", "re-verify a trace archive");
    replay->add_option("archive", rep.archive_path, "trace archive path")->required();
    replay->add_option("--tol", rep.tol, "max allowed expansion deviation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim);
        if (schedule->parsed()) return cmd_schedule(sch);
        if (spectral->parsed()) return cmd_spectral(spc);
        if (replay->parsed()) return cmd_replay(rep);
    } catch (const ParameterOutOfRange& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
