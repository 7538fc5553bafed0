#include "consensus/weights.hpp"

#include <cmath>
#include <string>

#include "consensus/errors.hpp"
#include "consensus/spectral.hpp"

namespace consensus {

WeightMatrix make_weight_matrix(Matrix w) {
    const SpectralSummary s = spectral_summary(w);
    WeightMatrix out;
    out.w = std::move(w);
    out.eigenvalues = s.eigenvalues;
    out.lambda2 = s.lambda2;
    out.lambda_min = s.lambda_min;
    return out;
}

WeightMatrix metropolis_weights(const Graph& g) {
    if (!is_connected(g)) throw ParameterOutOfRange("metropolis_weights needs a connected graph");
    const auto deg = g.degrees();
    Matrix w(g.m, g.m);
    for (auto [i, j] : g.edges) {
        const double v = 1.0 / (1.0 + std::max(deg[i], deg[j]));
        w(i, j) = v;
        w(j, i) = v;
    }
    for (int i = 0; i < g.m; ++i) {
        double off = 0.0;
        for (int j = 0; j < g.m; ++j)
            if (j != i) off += w(i, j);
        w(i, i) = 1.0 - off;
    }
    return make_weight_matrix(std::move(w));
}

WeightMatrix laplacian_weights(const Graph& g, double a) {
    if (!is_connected(g)) throw ParameterOutOfRange("laplacian_weights needs a connected graph");
    const int dmax = g.max_degree();
    if (!(a > 0.0) || !(a < 1.0 / dmax))
        throw ParameterOutOfRange("laplacian_weights: step size " + std::to_string(a) +
                                  " outside (0, 1/" + std::to_string(dmax) + ")");
    const auto deg = g.degrees();
    Matrix w(g.m, g.m);
    for (auto [i, j] : g.edges) {
        w(i, j) = a;
        w(j, i) = a;
    }
    for (int i = 0; i < g.m; ++i) w(i, i) = 1.0 - a * deg[i];
    return make_weight_matrix(std::move(w));
}

double default_laplacian_a(const Graph& g) { return 0.99 / g.max_degree(); }

ValidationReport validate_consensus_matrix(const Matrix& w, double tol) {
    if (w.rows() != w.cols()) throw DimensionMismatch("validate_consensus_matrix needs a square matrix");
    const int n = w.rows();
    ValidationReport rep;

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            rep.max_symmetry_residual =
                std::max(rep.max_symmetry_residual, std::abs(w(i, j) - w(j, i)));
    rep.symmetric = rep.max_symmetry_residual <= tol;

    for (int i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (int j = 0; j < n; ++j) {
            row += w(i, j);
            col += w(j, i);
        }
        rep.max_row_residual = std::max(rep.max_row_residual, std::abs(row - 1.0));
        rep.max_col_residual = std::max(rep.max_col_residual, std::abs(col - 1.0));
    }
    rep.row_stochastic = rep.max_row_residual <= tol;
    rep.col_stochastic = rep.max_col_residual <= tol;

    const Matrix deflated = w - Matrix::averaging(n);
    if (rep.symmetric) {
        double rho = 0.0;
        for (double lam : symmetric_eigenvalues(deflated, tol)) rho = std::max(rho, std::abs(lam));
        rep.lambda2 = rho;
    } else {
        // No symmetric eigensolve available; fall back to the (conservative) 2-norm.
        rep.lambda2 = power_iteration_norm(deflated, 2000, 0x5eedULL);
    }
    rep.spectral_gap = rep.lambda2 < 1.0;
    return rep;
}

}  // namespace consensus
