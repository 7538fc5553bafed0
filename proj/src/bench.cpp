#include "consensus/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "consensus/errors.hpp"
#include "consensus/graph.hpp"
#include "consensus/rng.hpp"
#include "consensus/schedule.hpp"
#include "consensus/spectral.hpp"
#include "consensus/textio.hpp"

namespace consensus {

std::string to_string(CodecKind k) {
    switch (k) {
        case CodecKind::progq: return "progq";
        case CodecKind::progq_rec: return "progq-rec";
        case CodecKind::unifq: return "unifq";
        case CodecKind::zoomq: return "zoomq";
        case CodecKind::adaptq: return "adaptq";
        case CodecKind::noquant: return "noquant";
    }
    return "?";
}

std::string to_string(WeightKind k) {
    return k == WeightKind::metropolis ? "metropolis" : "laplacian";
}

CodecKind parse_codec_kind(const std::string& name) {
    if (name == "progq") return CodecKind::progq;
    if (name == "progq-rec" || name == "progq-recursive") return CodecKind::progq_rec;
    if (name == "unifq") return CodecKind::unifq;
    if (name == "zoomq") return CodecKind::zoomq;
    if (name == "adaptq") return CodecKind::adaptq;
    if (name == "noquant") return CodecKind::noquant;
    throw ParameterOutOfRange("unknown codec '" + name +
                              "' (expected progq, progq-rec, unifq, zoomq, adaptq or noquant)");
}

WeightKind parse_weight_kind(const std::string& name) {
    if (name == "metropolis") return WeightKind::metropolis;
    if (name == "laplacian") return WeightKind::laplacian;
    throw ParameterOutOfRange("unknown weight rule '" + name +
                              "' (expected metropolis or laplacian)");
}

namespace {

struct Combo {
    CodecKind codec;
    int bits;
    WeightKind wk;
};

std::vector<Combo> build_combos(const ExperimentConfig& cfg) {
    std::vector<Combo> combos;
    for (CodecKind c : cfg.codecs)
        for (int n : cfg.bits)
            for (WeightKind wk : cfg.weights) combos.push_back({c, n, wk});
    return combos;
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.nodes < 2) throw ParameterOutOfRange("nodes must be >= 2");
    if (cfg.trials < 1) throw ParameterOutOfRange("trials must be >= 1");
    if (cfg.horizon < 0) throw ParameterOutOfRange("horizon must be >= 0");
    if (cfg.codecs.empty() || cfg.bits.empty() || cfg.weights.empty())
        throw ParameterOutOfRange("codecs, bits and weights must be non-empty");
    for (int n : cfg.bits)
        if (n < 1 || n > 32) throw ParameterOutOfRange("bits entries must lie in [1, 32]");
    if (!(cfg.init_hi > cfg.init_lo))
        throw ParameterOutOfRange("initial interval must have positive size");
    if (!(cfg.clamp_delta >= 0.0)) throw ParameterOutOfRange("clamp_delta must be >= 0");
}

// Everything one trial shares across its combo cells: the sampled graph, the
// initial state, and per-weight-rule matrices, norms and schedules.
class TrialContext {
public:
    TrialContext(const ExperimentConfig& cfg, int trial) : cfg_(cfg) {
        seed = split_seed(cfg.seed, static_cast<std::uint64_t>(trial));
        const double radius = cfg.radius < 0.0 ? default_rgg_radius(cfg.nodes) : cfg.radius;
        graph_ = sample_connected_rgg(cfg.nodes, radius, split_seed(seed, 0),
                                      cfg.max_graph_attempts, &graph_rejections);
        Rng rng(split_seed(seed, 1));
        z0_.resize(cfg.nodes);
        for (double& v : z0_) v = rng.uniform(cfg.init_lo, cfg.init_hi);
        s0_ = cfg.init_hi - cfg.init_lo;
        center_ = 0.5 * (cfg.init_lo + cfg.init_hi);
        z0_inf_ = max_abs(z0_);
    }

    struct CellResult {
        std::optional<RunTrace> trace;  // empty when the cell is infeasible
        int suggested_min_bits = 0;
        std::string reason;
    };

    CellResult run_cell(const Combo& combo) {
        const WeightMatrix& w = weight(combo.wk);
        const int T = cfg_.horizon;
        CellResult out;
        switch (combo.codec) {
            case CodecKind::noquant:
                out.trace = ideal_run(w, z0_, T);
                break;
            case CodecKind::unifq:
                out.trace = run_consensus(
                    w, z0_, make_uniform_factory(cfg_.init_lo, s0_, combo.bits), T);
                break;
            case CodecKind::zoomq:
                out.trace = run_consensus(
                    w, z0_,
                    make_zoom_factory(combo.bits, center_, cfg_.zoom_f0, cfg_.zoom_k_in,
                                      cfg_.zoom_k_out),
                    T);
                break;
            case CodecKind::adaptq:
                out.trace = run_consensus(
                    w, z0_,
                    make_adaptive_factory(combo.bits, center_,
                                          s0_ / std::ldexp(1.0, combo.bits), cfg_.adapt_k),
                    T);
                break;
            case CodecKind::progq: {
                if (!(w.lambda2 > 0.0)) {
                    out.reason = "closed-form schedule undefined for lambda2 = 0";
                    break;
                }
                try {
                    const DecayParams p =
                        exponential_params(w.lambda2, w.lambda_min, combo.bits, z0_inf_);
                    auto sched = std::make_shared<RangeSchedule>(
                        exponential_ranges(p, s0_, T, cfg_.clamp_delta));
                    out.trace = run_consensus(
                        w, z0_, make_progressive_factory(std::move(sched), combo.bits, center_),
                        T);
                } catch (const NonPositiveLogArgument& e) {
                    out.suggested_min_bits = e.min_feasible_bits;
                    out.reason = e.what();
                }
                break;
            }
            case CodecKind::progq_rec: {
                ScheduleInputs in;
                in.lambda2 = w.lambda2;
                in.lambda_min = w.lambda_min;
                in.bits = combo.bits;
                in.z0_inf = z0_inf_;
                in.s0 = s0_;
                in.norms = norms(combo.wk);
                in.clamp_delta = cfg_.clamp_delta;
                auto sched = std::make_shared<RangeSchedule>(recursive_ranges(in, T));
                out.trace = run_consensus(
                    w, z0_, make_progressive_factory(std::move(sched), combo.bits, center_), T);
                break;
            }
        }
        return out;
    }

    const WeightMatrix& weight(WeightKind wk) {
        auto& slot = wctx_[static_cast<int>(wk)];
        if (!slot.has_value()) {
            if (wk == WeightKind::metropolis) {
                slot = metropolis_weights(graph_);
            } else {
                const double a =
                    cfg_.laplacian_a < 0.0 ? default_laplacian_a(graph_) : cfg_.laplacian_a;
                slot = laplacian_weights(graph_, a);
            }
        }
        return *slot;
    }

    std::uint64_t seed = 0;
    int graph_rejections = 0;

private:
    const std::vector<double>& norms(WeightKind wk) {
        auto& slot = norms_[static_cast<int>(wk)];
        if (slot.empty())
            slot = ws_wi_norms(weight(wk), std::max(1, cfg_.horizon));
        return slot;
    }

    const ExperimentConfig& cfg_;
    Graph graph_;
    std::vector<double> z0_;
    double s0_ = 1.0, center_ = 0.5, z0_inf_ = 1.0;
    std::array<std::optional<WeightMatrix>, 2> wctx_;
    std::array<std::vector<double>, 2> norms_;
};

struct TrialCell {
    bool included = false;
    MetricSeries series;
    int suggested_min_bits = 0;
    std::string reason;
};

struct TrialOutcome {
    std::uint64_t seed = 0;
    int graph_rejections = 0;
    std::vector<TrialCell> cells;
};

TrialOutcome run_trial(const ExperimentConfig& cfg, const std::vector<Combo>& combos, int trial) {
    TrialContext ctx(cfg, trial);
    TrialOutcome out;
    out.seed = ctx.seed;
    out.graph_rejections = ctx.graph_rejections;
    out.cells.resize(combos.size());
    for (std::size_t c = 0; c < combos.size(); ++c) {
        TrialContext::CellResult r = ctx.run_cell(combos[c]);
        if (r.trace.has_value()) {
            out.cells[c].included = true;
            out.cells[c].series = metrics(*r.trace);
        } else {
            out.cells[c].suggested_min_bits = r.suggested_min_bits;
            out.cells[c].reason = r.reason;
        }
    }
    return out;
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
    const double m = mean(xs);
    if (xs.size() < 2) return {m, 0.0};
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return {m, std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0))};
}

int resolve_threads(int requested, int trials) {
    int n = requested;
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    return std::min(n, trials);
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        if (ch == '\n') {
            out += "\\n";
            continue;
        }
        out += ch;
    }
    return out;
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const std::vector<Combo> combos = build_combos(cfg);

    std::vector<TrialOutcome> outcomes(cfg.trials);
    const int nthreads = resolve_threads(cfg.threads, cfg.trials);
    if (nthreads <= 1) {
        for (int i = 0; i < cfg.trials; ++i) outcomes[i] = run_trial(cfg, combos, i);
    } else {
        std::atomic<int> next{0};
        std::mutex mtx;
        std::exception_ptr first_error;
        auto work = [&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= cfg.trials) return;
                try {
                    outcomes[i] = run_trial(cfg, combos, i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(mtx);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    ResultTable table;
    table.trials = cfg.trials;
    table.horizon = cfg.horizon;
    for (const auto& o : outcomes) {
        table.trial_seeds.push_back(o.seed);
        table.graph_rejections += o.graph_rejections;
    }

    const int T = cfg.horizon;
    for (std::size_t c = 0; c < combos.size(); ++c) {
        ComboSummary cs;
        cs.codec = combos[c].codec;
        cs.bits = combos[c].bits;
        cs.weights = combos[c].wk;
        for (const auto& o : outcomes) {
            if (o.cells[c].included) {
                ++cs.included_trials;
            } else {
                ++cs.excluded_trials;
                cs.suggested_min_bits = std::max(cs.suggested_min_bits,
                                                 o.cells[c].suggested_min_bits);
                if (cs.exclusion_reason.empty()) cs.exclusion_reason = o.cells[c].reason;
            }
        }
        if (cs.included_trials == 0)
            throw InfeasibleBits("no feasible trial for codec " + to_string(cs.codec) + ", n = " +
                                     std::to_string(cs.bits) + " (" + cs.exclusion_reason + ")",
                                 cs.suggested_min_bits);
        table.combos.push_back(cs);

        std::vector<double> errs, vars, clips;
        errs.reserve(cs.included_trials);
        for (int t = 0; t <= T; ++t) {
            errs.clear();
            vars.clear();
            clips.clear();
            for (const auto& o : outcomes) {
                if (!o.cells[c].included) continue;
                errs.push_back(o.cells[c].series.err[t]);
                vars.push_back(o.cells[c].series.noise_var[t]);
                clips.push_back(static_cast<double>(o.cells[c].series.clip_counts[t]));
            }
            ResultRow row;
            row.codec = combos[c].codec;
            row.bits = combos[c].bits;
            row.weights = combos[c].wk;
            row.t = t;
            std::tie(row.err_mean, row.err_std) = mean_std(errs);
            std::tie(row.var_mean, row.var_std) = mean_std(vars);
            std::tie(row.clip_mean, row.clip_std) = mean_std(clips);
            table.rows.push_back(row);
        }
    }
    return table;
}

SingleRun run_single_trial(const ExperimentConfig& cfg, int trial_index, int combo_index) {
    validate_config(cfg);
    const std::vector<Combo> combos = build_combos(cfg);
    if (trial_index < 0 || trial_index >= cfg.trials)
        throw ParameterOutOfRange("trial index out of range");
    if (combo_index < 0 || combo_index >= static_cast<int>(combos.size()))
        throw ParameterOutOfRange("combo index out of range");

    TrialContext ctx(cfg, trial_index);
    TrialContext::CellResult r = ctx.run_cell(combos[combo_index]);
    if (!r.trace.has_value())
        throw InfeasibleBits("requested cell is infeasible: " + r.reason, r.suggested_min_bits);
    SingleRun out;
    out.trace = std::move(*r.trace);
    out.w = ctx.weight(combos[combo_index].wk).w;
    return out;
}

ExperimentConfig config_from_json(const std::string& text) {
    ExperimentConfig cfg;
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "nodes") cfg.nodes = value.get<int>();
        else if (key == "radius") cfg.radius = value.is_null() ? -1.0 : value.get<double>();
        else if (key == "weights") {
            cfg.weights.clear();
            for (const auto& s : value) cfg.weights.push_back(parse_weight_kind(s.get<std::string>()));
        } else if (key == "laplacian_a") cfg.laplacian_a = value.is_null() ? -1.0 : value.get<double>();
        else if (key == "codecs") {
            cfg.codecs.clear();
            for (const auto& s : value) cfg.codecs.push_back(parse_codec_kind(s.get<std::string>()));
        } else if (key == "bits") {
            cfg.bits.clear();
            for (const auto& b : value) cfg.bits.push_back(b.get<int>());
        } else if (key == "trials") cfg.trials = value.get<int>();
        else if (key == "horizon") cfg.horizon = value.get<int>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "clamp_delta") cfg.clamp_delta = value.get<double>();
        else if (key == "init_range") {
            if (!value.is_array() || value.size() != 2)
                throw std::runtime_error("init_range must be [lo, hi]");
            cfg.init_lo = value[0].get<double>();
            cfg.init_hi = value[1].get<double>();
        } else if (key == "threads") cfg.threads = value.get<int>();
        else if (key == "zoom_f0") cfg.zoom_f0 = value.get<double>();
        else if (key == "zoom_k_in") cfg.zoom_k_in = value.get<double>();
        else if (key == "zoom_k_out") cfg.zoom_k_out = value.get<double>();
        else if (key == "adapt_k") cfg.adapt_k = value.get<double>();
        else if (key == "max_graph_attempts") cfg.max_graph_attempts = value.get<int>();
        else throw std::runtime_error("unknown config key '" + key + "'");
    }
    return cfg;
}

std::string table_to_csv(const ResultTable& table) {
    std::string out = "codec,n,weights,t,err_mean,err_std,var_mean,clip_mean\n";
    for (const auto& r : table.rows) {
        out += to_string(r.codec);
        out += ',';
        out += std::to_string(r.bits);
        out += ',';
        out += to_string(r.weights);
        out += ',';
        out += std::to_string(r.t);
        out += ',';
        out += fmt12(r.err_mean);
        out += ',';
        out += fmt12(r.err_std);
        out += ',';
        out += fmt12(r.var_mean);
        out += ',';
        out += fmt12(r.clip_mean);
        out += '\n';
    }
    return out;
}

std::string table_to_json(const ResultTable& table) {
    std::string out =
        "{\n  \"header\": [\"codec\",\"n\",\"weights\",\"t\",\"err_mean\",\"err_std\","
        "\"var_mean\",\"clip_mean\"],\n  \"rows\": [";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        out += i ? ",\n    " : "\n    ";
        out += "[\"" + to_string(r.codec) + "\"," + std::to_string(r.bits) + ",\"" +
               to_string(r.weights) + "\"," + std::to_string(r.t) + ',' + fmt12(r.err_mean) +
               ',' + fmt12(r.err_std) + ',' + fmt12(r.var_mean) + ',' + fmt12(r.clip_mean) + ']';
    }
    out += "\n  ],\n";
    out += "  \"trials\": " + std::to_string(table.trials) + ",\n";
    out += "  \"horizon\": " + std::to_string(table.horizon) + ",\n";
    out += "  \"graph_rejections\": " + std::to_string(table.graph_rejections) + ",\n";
    out += "  \"trial_seeds\": [";
    for (std::size_t i = 0; i < table.trial_seeds.size(); ++i) {
        out += i ? "," : "";
        out += std::to_string(table.trial_seeds[i]);
    }
    out += "],\n  \"combos\": [";
    for (std::size_t i = 0; i < table.combos.size(); ++i) {
        const auto& c = table.combos[i];
        out += i ? ",\n    " : "\n    ";
        out += "{\"codec\":\"" + to_string(c.codec) + "\",\"n\":" + std::to_string(c.bits) +
               ",\"weights\":\"" + to_string(c.weights) +
               "\",\"included\":" + std::to_string(c.included_trials) +
               ",\"excluded\":" + std::to_string(c.excluded_trials) +
               ",\"suggested_min_bits\":" + std::to_string(c.suggested_min_bits) +
               ",\"reason\":\"" + json_escape(c.exclusion_reason) + "\"}";
    }
    out += "\n  ]\n}\n";
    return out;
}

}  // namespace consensus
