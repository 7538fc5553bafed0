#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "consensus/codec.hpp"
#include "consensus/weights.hpp"

namespace consensus {

// Full history of one synchronous consensus run: states z_t, reconstructions
// z_hat_t, quantization noise eps_t = z_hat_t - z_t, codec indices and clip counts
// for t = 0..T, plus the initial mean mu.
struct RunTrace {
    int m = 0;
    int T = 0;
    double mu = 0.0;
    std::vector<std::vector<double>> z;
    std::vector<std::vector<double>> z_hat;
    std::vector<std::vector<double>> eps;
    std::vector<std::vector<std::uint32_t>> indices;
    std::vector<int> clip_counts;
};

// Synchronous quantized consensus: at every t each node encodes its own state with
// its codec, every node decodes every neighbour's codeword (here: the shared
// deterministic decode), then z_{t+1} = z_t + (W - I) z_hat_t.  States are updated
// only through the decode path; true neighbour states are never read.
RunTrace run_consensus(const WeightMatrix& w, const std::vector<double>& z0,
                       const CodecFactory& make_codec, int T);

// Quantization-free reference: z_{t+1} = W z_t, z_hat = z, eps = 0.
RunTrace ideal_run(const WeightMatrix& w, const std::vector<double>& z0, int T);

struct MetricSeries {
    std::vector<double> err;        // ||z_t - mu 1||_2
    std::vector<double> noise_var;  // population variance of eps_t across nodes
    std::vector<int> clip_counts;
};

MetricSeries metrics(const RunTrace& trace);

// Recomputes z_hat_t and z_{t+1} from z_0 and the recorded noise via the closed
// forms  z_hat_t = W^t z0 + sum_{s=0}^{t-1} W^s (W-I) eps_{t-s-1} + eps_t  and
// z_{t+1} = W^{t+1} z0 + sum_{s=0}^{t} W^s (W-I) eps_{t-s}, and returns the largest
// infinity-norm deviation from the recorded trace.
double expansion_check(const RunTrace& trace, const WeightMatrix& w);

// Per-node index streams (node-major) for bit packing.
std::vector<std::vector<std::uint32_t>> index_streams_by_node(const RunTrace& trace);

// CSV with header t,err,noise_var,clip_count (12 significant digits).
std::string metrics_to_csv(const MetricSeries& m);

// Binary archive (little-endian doubles) holding W and the full trace, enough to
// replay expansion_check offline.
void save_trace(const RunTrace& trace, const Matrix& w, const std::string& path);

struct LoadedTrace {
    RunTrace trace;
    Matrix w;
};
LoadedTrace load_trace(const std::string& path);

}  // namespace consensus
