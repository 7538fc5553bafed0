#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "consensus/engine.hpp"

namespace consensus {

// progq          — refining quantizer driven by the closed-form (exponential) schedule
// progq_rec      — refining quantizer driven by the full recursion
// unifq          — fixed interval of size s0
// zoomq          — zooming difference quantizer
// adaptq         — sign-adaptive delta modulation
// noquant        — quantization-free reference run
enum class CodecKind { progq, progq_rec, unifq, zoomq, adaptq, noquant };
enum class WeightKind { metropolis, laplacian };

std::string to_string(CodecKind k);
std::string to_string(WeightKind k);
CodecKind parse_codec_kind(const std::string& name);
WeightKind parse_weight_kind(const std::string& name);

struct ExperimentConfig {
    int nodes = 40;
    double radius = -1.0;  // < 0: sqrt(log(m)/m)
    std::vector<WeightKind> weights{WeightKind::metropolis};
    double laplacian_a = -1.0;  // < 0: 0.99/max_degree
    std::vector<CodecKind> codecs{CodecKind::progq, CodecKind::unifq};
    std::vector<int> bits{2, 4, 6};
    int trials = 200;
    int horizon = 100;
    std::uint64_t seed = 1;
    double clamp_delta = 1e-16;
    double init_lo = 0.0;  // known initial interval; also the fixed interval of unifq
    double init_hi = 1.0;
    int threads = 0;  // 0: hardware concurrency
    double zoom_f0 = 0.5;
    double zoom_k_in = 0.5;
    double zoom_k_out = 2.0;
    double adapt_k = 1.2;
    int max_graph_attempts = 10000;
};

// Parses a JSON object with any subset of the config keys (see README) on top of
// the defaults above.
ExperimentConfig config_from_json(const std::string& text);

struct ResultRow {
    CodecKind codec;
    int bits;
    WeightKind weights;
    int t;
    double err_mean, err_std;
    double var_mean, var_std;
    double clip_mean, clip_std;
};

struct ComboSummary {
    CodecKind codec;
    int bits;
    WeightKind weights;
    int included_trials = 0;
    int excluded_trials = 0;
    int suggested_min_bits = 0;  // meaningful when excluded_trials > 0
    std::string exclusion_reason;
};

struct ResultTable {
    std::vector<ResultRow> rows;  // combo-major, t-minor; |codecs|*|bits|*|weights|*(T+1) rows
    std::vector<ComboSummary> combos;
    std::vector<std::uint64_t> trial_seeds;
    int trials = 0;
    int horizon = 0;
    long graph_rejections = 0;
};

// Runs the full trial grid: per trial a fresh connected random geometric graph and
// fresh initial states, shared across every (codec, bits, weights) combination;
// per-trial metric curves aggregated into means/standard deviations in trial order.
// Trials where the closed-form schedule does not exist for the requested bit budget
// are excluded from that combination and counted; a combination with no feasible
// trial at all raises InfeasibleBits.
ResultTable run_experiment(const ExperimentConfig& cfg);

// Re-executes one (trial, combo) cell of the grid and returns its full trace,
// bit-identical to what run_experiment aggregated.
struct SingleRun {
    RunTrace trace;
    Matrix w;
};
SingleRun run_single_trial(const ExperimentConfig& cfg, int trial_index, int combo_index = 0);

// CSV: header codec,n,weights,t,err_mean,err_std,var_mean,clip_mean; 12 significant
// digits.  JSON mirrors the same header/rows and adds trial seeds and combo notes.
std::string table_to_csv(const ResultTable& table);
std::string table_to_json(const ResultTable& table);

}  // namespace consensus
