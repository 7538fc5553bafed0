#pragma once

#include <cstdint>
#include <vector>

#include "consensus/matrix.hpp"
#include "consensus/weights.hpp"

namespace consensus {

// All eigenvalues of a symmetric matrix, ascending, via cyclic Jacobi rotation
// sweeps.  Throws NotSymmetric when max |a_ij - a_ji| exceeds sym_tol.
std::vector<double> symmetric_eigenvalues(const Matrix& a, double sym_tol = 1e-12);

struct SpectralSummary {
    std::vector<double> eigenvalues;  // ascending
    double lambda2 = 0.0;             // rho(W - (1/m)11^T)
    double lambda_min = 0.0;          // smallest eigenvalue of W
};

// lambda2 is computed by deflating the unit eigenvalue: subtract the averaging
// projector and take the spectral radius of the remainder.
SpectralSummary spectral_summary(const Matrix& w);
SpectralSummary spectral_summary(const WeightMatrix& w);

// ||W^s (W - I)||_2 from the eigenvalues: max_i |lambda_i|^s * |lambda_i - 1|.
double norm_ws_wi(const WeightMatrix& w, int s);

// norms[s] = ||W^s (W - I)||_2 for s = 0..count-1 (one pass over the spectrum).
std::vector<double> ws_wi_norms(const WeightMatrix& w, int count);

// Independent estimate of ||a||_2: power iteration on a^T a from a seeded random
// unit vector, returning the Rayleigh-quotient square root after `iters` steps.
// Deliberately does not share code with the Jacobi eigensolver.
double power_iteration_norm(const Matrix& a, int iters, std::uint64_t seed);

}  // namespace consensus
