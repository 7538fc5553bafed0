#include "consensus/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "consensus/errors.hpp"
#include "consensus/rng.hpp"

namespace consensus {

namespace {

double offdiagonal_norm(const Matrix& s) {
    double acc = 0.0;
    for (int i = 0; i < s.rows(); ++i)
        for (int j = i + 1; j < s.cols(); ++j) acc += s(i, j) * s(i, j);
    return std::sqrt(2.0 * acc);
}

double frobenius(const Matrix& s) {
    double acc = 0.0;
    for (int i = 0; i < s.rows(); ++i)
        for (int j = 0; j < s.cols(); ++j) acc += s(i, j) * s(i, j);
    return std::sqrt(acc);
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const Matrix& a, double sym_tol) {
    if (a.rows() != a.cols()) throw DimensionMismatch("symmetric_eigenvalues needs a square matrix");
    const int n = a.rows();
    if (n == 0) return {};

    double residual = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            residual = std::max(residual, std::abs(a(i, j) - a(j, i)));
    if (residual > sym_tol)
        throw NotSymmetric("symmetric_eigenvalues: asymmetry " + std::to_string(residual) +
                           " exceeds tolerance " + std::to_string(sym_tol));

    // Work on the symmetrized copy so sub-tolerance drift cannot bias the sweeps.
    Matrix s(n, n);
    for (int i = 0; i < n; ++i) {
        s(i, i) = a(i, i);
        for (int j = i + 1; j < n; ++j) s(i, j) = s(j, i) = 0.5 * (a(i, j) + a(j, i));
    }

    const double stop = 1e-14 * std::max(1.0, frobenius(s));
    for (int sweep = 0; sweep < 100 && offdiagonal_norm(s) > stop; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double skp = s(k, p);
                    const double skq = s(k, q);
                    s(k, p) = s(p, k) = c * skp - sn * skq;
                    s(k, q) = s(q, k) = sn * skp + c * skq;
                }
                const double spp = s(p, p);
                const double sqq = s(q, q);
                s(p, p) = c * c * spp - 2.0 * sn * c * apq + sn * sn * sqq;
                s(q, q) = sn * sn * spp + 2.0 * sn * c * apq + c * c * sqq;
                s(p, q) = s(q, p) = 0.0;
            }
        }
    }

    std::vector<double> eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = s(i, i);
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

SpectralSummary spectral_summary(const Matrix& w) {
    SpectralSummary out;
    out.eigenvalues = symmetric_eigenvalues(w);
    out.lambda_min = out.eigenvalues.front();

    const auto deflated = symmetric_eigenvalues(w - Matrix::averaging(w.rows()));
    double rho = 0.0;
    for (double lam : deflated) rho = std::max(rho, std::abs(lam));
    out.lambda2 = rho;
    return out;
}

SpectralSummary spectral_summary(const WeightMatrix& w) { return spectral_summary(w.w); }

double norm_ws_wi(const WeightMatrix& w, int s) {
    if (s < 0) throw ParameterOutOfRange("norm_ws_wi needs s >= 0");
    double worst = 0.0;
    for (double lam : w.eigenvalues)
        worst = std::max(worst, std::pow(std::abs(lam), s) * std::abs(lam - 1.0));
    return worst;
}

std::vector<double> ws_wi_norms(const WeightMatrix& w, int count) {
    std::vector<double> norms(count, 0.0);
    for (double lam : w.eigenvalues) {
        const double gap = std::abs(lam - 1.0);
        double power = 1.0;  // |lambda|^s
        for (int s = 0; s < count; ++s) {
            norms[s] = std::max(norms[s], power * gap);
            power *= std::abs(lam);
        }
    }
    return norms;
}

double power_iteration_norm(const Matrix& a, int iters, std::uint64_t seed) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const Matrix c = transpose(a) * a;
    const int n = c.rows();

    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    double nv = norm2(v);
    if (nv == 0.0) v[0] = nv = 1.0;
    for (double& x : v) x /= nv;

    for (int it = 0; it < iters; ++it) {
        std::vector<double> w = multiply(c, v);
        const double nw = norm2(w);
        if (nw == 0.0) return 0.0;  // v landed in the kernel of a^T a
        for (int i = 0; i < n; ++i) v[i] = w[i] / nw;
    }

    const std::vector<double> cv = multiply(c, v);
    double rayleigh = 0.0;
    for (int i = 0; i < n; ++i) rayleigh += v[i] * cv[i];
    return std::sqrt(std::max(0.0, rayleigh));
}

}  // namespace consensus
