#include "consensus/engine.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "consensus/errors.hpp"
#include "consensus/textio.hpp"

static_assert(std::endian::native == std::endian::little,
              "trace archives assume a little-endian host");

namespace consensus {

namespace {

RunTrace make_trace_shell(int m, int T, double mu) {
    RunTrace tr;
    tr.m = m;
    tr.T = T;
    tr.mu = mu;
    tr.z.assign(T + 1, std::vector<double>(m, 0.0));
    tr.z_hat.assign(T + 1, std::vector<double>(m, 0.0));
    tr.eps.assign(T + 1, std::vector<double>(m, 0.0));
    tr.indices.assign(T + 1, std::vector<std::uint32_t>(m, 0));
    tr.clip_counts.assign(T + 1, 0);
    return tr;
}

void check_run_inputs(const WeightMatrix& w, const std::vector<double>& z0, int T) {
    if (w.size() == 0) throw DimensionMismatch("weight matrix is empty");
    if (static_cast<int>(z0.size()) != w.size())
        throw DimensionMismatch("initial state length " + std::to_string(z0.size()) +
                                " != matrix size " + std::to_string(w.size()));
    if (T < 0) throw ParameterOutOfRange("horizon must be >= 0");
}

}  // namespace

RunTrace run_consensus(const WeightMatrix& w, const std::vector<double>& z0,
                       const CodecFactory& make_codec, int T) {
    check_run_inputs(w, z0, T);
    const int m = w.size();

    std::vector<std::unique_ptr<Codec>> codecs;
    codecs.reserve(m);
    for (int i = 0; i < m; ++i) codecs.push_back(make_codec());

    RunTrace tr = make_trace_shell(m, T, mean(z0));
    tr.z[0] = z0;

    for (int t = 0; t <= T; ++t) {
        for (int i = 0; i < m; ++i) {
            const Codec::StepResult r = codecs[i]->step(tr.z[t][i]);
            tr.z_hat[t][i] = r.z_hat;
            tr.eps[t][i] = r.z_hat - tr.z[t][i];
            tr.indices[t][i] = r.codeword.index;
            tr.clip_counts[t] += r.codeword.clipped ? 1 : 0;
        }
        if (t == T) break;
        // z_{t+1} = z_t + (W - I) z_hat_t, accumulated in node-index order.
        for (int i = 0; i < m; ++i) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) {
                const double wij = w.w(i, j) - (i == j ? 1.0 : 0.0);
                acc += wij * tr.z_hat[t][j];
            }
            tr.z[t + 1][i] = tr.z[t][i] + acc;
        }
    }
    return tr;
}

RunTrace ideal_run(const WeightMatrix& w, const std::vector<double>& z0, int T) {
    check_run_inputs(w, z0, T);
    RunTrace tr = make_trace_shell(w.size(), T, mean(z0));
    tr.z[0] = z0;
    tr.z_hat[0] = z0;
    for (int t = 0; t < T; ++t) {
        tr.z[t + 1] = multiply(w.w, tr.z[t]);
        tr.z_hat[t + 1] = tr.z[t + 1];
    }
    return tr;
}

MetricSeries metrics(const RunTrace& trace) {
    MetricSeries out;
    out.err.resize(trace.T + 1);
    out.noise_var.resize(trace.T + 1);
    out.clip_counts = trace.clip_counts;
    for (int t = 0; t <= trace.T; ++t) {
        double acc = 0.0;
        for (double zi : trace.z[t]) acc += (zi - trace.mu) * (zi - trace.mu);
        out.err[t] = std::sqrt(acc);

        const double eps_mean = mean(trace.eps[t]);
        double var = 0.0;
        for (double e : trace.eps[t]) var += (e - eps_mean) * (e - eps_mean);
        out.noise_var[t] = var / trace.m;
    }
    return out;
}

double expansion_check(const RunTrace& trace, const WeightMatrix& w) {
    if (w.size() != trace.m) throw DimensionMismatch("trace/matrix size mismatch");
    const int m = trace.m;
    const int T = trace.T;

    // W^s (W - I) for s = 0..T-1 and W^t z0 for t = 0..T.
    const Matrix wi = w.w - Matrix::identity(m);
    std::vector<Matrix> ms;
    ms.reserve(T);
    if (T > 0) {
        ms.push_back(wi);
        for (int s = 1; s < T; ++s) ms.push_back(w.w * ms.back());
    }
    std::vector<std::vector<double>> wz(T + 1);
    wz[0] = trace.z[0];
    for (int t = 1; t <= T; ++t) wz[t] = multiply(w.w, wz[t - 1]);

    double dev = 0.0;
    std::vector<double> acc(m);
    for (int t = 0; t <= T; ++t) {
        // z_hat_t = W^t z0 + sum_{s<t} W^s(W-I) eps_{t-s-1} + eps_t
        acc = wz[t];
        for (int s = 0; s < t; ++s) {
            const std::vector<double> term = multiply(ms[s], trace.eps[t - s - 1]);
            for (int i = 0; i < m; ++i) acc[i] += term[i];
        }
        for (int i = 0; i < m; ++i)
            dev = std::max(dev, std::abs(acc[i] + trace.eps[t][i] - trace.z_hat[t][i]));

        // z_{t+1} = W^{t+1} z0 + sum_{s<=t} W^s(W-I) eps_{t-s}
        if (t == T) break;
        acc = wz[t + 1];
        for (int s = 0; s <= t; ++s) {
            const std::vector<double> term = multiply(ms[s], trace.eps[t - s]);
            for (int i = 0; i < m; ++i) acc[i] += term[i];
        }
        for (int i = 0; i < m; ++i) dev = std::max(dev, std::abs(acc[i] - trace.z[t + 1][i]));
    }
    return dev;
}

std::vector<std::vector<std::uint32_t>> index_streams_by_node(const RunTrace& trace) {
    std::vector<std::vector<std::uint32_t>> out(trace.m, std::vector<std::uint32_t>(trace.T + 1));
    for (int t = 0; t <= trace.T; ++t)
        for (int i = 0; i < trace.m; ++i) out[i][t] = trace.indices[t][i];
    return out;
}

std::string metrics_to_csv(const MetricSeries& m) {
    std::string out = "t,err,noise_var,clip_count\n";
    for (std::size_t t = 0; t < m.err.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += fmt12(m.err[t]);
        out += ',';
        out += fmt12(m.noise_var[t]);
        out += ',';
        out += std::to_string(m.clip_counts[t]);
        out += '\n';
    }
    return out;
}

namespace {

constexpr char kTraceMagic[8] = {'Q', 'C', 'T', 'R', 'A', 'C', 'E', '1'};

void put_u32(std::ofstream& f, std::uint32_t v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_doubles(std::ofstream& f, const std::vector<double>& v) {
    f.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
}

std::uint32_t get_u32(std::ifstream& f) {
    std::uint32_t v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

void get_doubles(std::ifstream& f, std::vector<double>& v) {
    f.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
}

}  // namespace

void save_trace(const RunTrace& trace, const Matrix& w, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(kTraceMagic, sizeof kTraceMagic);
    put_u32(f, static_cast<std::uint32_t>(trace.m));
    put_u32(f, static_cast<std::uint32_t>(trace.T));
    f.write(reinterpret_cast<const char*>(&trace.mu), sizeof trace.mu);
    put_doubles(f, w.data());
    for (const auto& row : trace.z) put_doubles(f, row);
    for (const auto& row : trace.z_hat) put_doubles(f, row);
    for (const auto& row : trace.eps) put_doubles(f, row);
    for (int c : trace.clip_counts) put_u32(f, static_cast<std::uint32_t>(c));
    if (!f) throw std::runtime_error("short write to " + path);
}

LoadedTrace load_trace(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for reading");
    char magic[8];
    f.read(magic, sizeof magic);
    if (!f || std::memcmp(magic, kTraceMagic, sizeof magic) != 0)
        throw std::runtime_error(path + " is not a trace archive");
    const int m = static_cast<int>(get_u32(f));
    const int T = static_cast<int>(get_u32(f));
    if (!f || m < 1 || m > 1000000 || T < 0 || T > 100000000)
        throw std::runtime_error(path + ": implausible trace header");

    LoadedTrace out;
    out.trace = make_trace_shell(m, T, 0.0);
    f.read(reinterpret_cast<char*>(&out.trace.mu), sizeof out.trace.mu);

    out.w = Matrix(m, m);
    std::vector<double> flat(static_cast<std::size_t>(m) * m);
    get_doubles(f, flat);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out.w(i, j) = flat[static_cast<std::size_t>(i) * m + j];

    for (auto& row : out.trace.z) get_doubles(f, row);
    for (auto& row : out.trace.z_hat) get_doubles(f, row);
    for (auto& row : out.trace.eps) get_doubles(f, row);
    for (int& c : out.trace.clip_counts) c = static_cast<int>(get_u32(f));
    if (!f) throw std::runtime_error(path + ": truncated trace archive");
    return out;
}

}  // namespace consensus
