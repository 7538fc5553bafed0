#pragma once

#include <vector>

#include "consensus/graph.hpp"
#include "consensus/matrix.hpp"

namespace consensus {

// Symmetric doubly stochastic consensus matrix together with its cached spectrum.
// lambda2 is the spectral radius of W - (1/m)11^T (the mixing rate), lambda_min the
// smallest eigenvalue of W.
struct WeightMatrix {
    Matrix w;
    std::vector<double> eigenvalues;  // ascending
    double lambda2 = 0.0;
    double lambda_min = 0.0;

    int size() const { return w.rows(); }
};

// Wraps an arbitrary symmetric consensus matrix with its spectral summary.
WeightMatrix make_weight_matrix(Matrix w);

// Metropolis rule: w_ij = 1/(1 + max(d_i, d_j)) on edges, diagonal fills the row to 1.
WeightMatrix metropolis_weights(const Graph& g);

// Laplacian rule: W = I - aL.  Requires 0 < a < 1/max_degree.
WeightMatrix laplacian_weights(const Graph& g, double a);

// Step size used by the experiment harness when none is given: 0.99/max_degree.
double default_laplacian_a(const Graph& g);

struct ValidationReport {
    bool symmetric = false;
    bool row_stochastic = false;
    bool col_stochastic = false;
    bool spectral_gap = false;  // rho(W - (1/m)11^T) < 1
    double max_symmetry_residual = 0.0;
    double max_row_residual = 0.0;
    double max_col_residual = 0.0;
    double lambda2 = 0.0;

    bool ok() const { return symmetric && row_stochastic && col_stochastic && spectral_gap; }
};

// Checks the consensus-matrix conditions on a raw square matrix; reports, never throws
// (except on a non-square input).  Residual tolerance defaults to 1e-10.
ValidationReport validate_consensus_matrix(const Matrix& w, double tol = 1e-10);

}  // namespace consensus
