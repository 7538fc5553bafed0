#pragma once

#include <string>
#include <vector>

#include "consensus/weights.hpp"

namespace consensus {

// Everything the range recursion needs to know about a topology and a bit budget.
struct ScheduleInputs {
    double lambda2 = 0.0;
    double lambda_min = 0.0;
    int bits = 1;
    double z0_inf = 1.0;             // max |initial state|
    double s0 = 1.0;                 // size of the known initial interval
    std::vector<double> norms;       // ||W^s (W-I)||_2 for s = 0.. (>= T-1 entries)
    double clamp_delta = 1e-16;      // plateau threshold; 0 disables the clamp
};

// Quantization-range schedule S_0..S_T with beta_t = -ln(S_t / 2).
struct RangeSchedule {
    enum class Source { recursive, exponential };
    Source source = Source::recursive;
    std::vector<double> sizes;
    std::vector<double> betas;

    int horizon() const { return static_cast<int>(sizes.size()) - 1; }
};

struct DecayParams {
    double alpha = 0.0;  // slope of beta_t
    double gamma = 0.0;  // intercept of beta_t
};

// Range schedule from the mean-square recursion
//   (S_{t+1}/2)^2 = z0_inf^2 lam2^{2t} (1-lmin)^2
//                 + (1-lmin)^2 sum_{s=0}^{t-1} norms[s]^2 S_{t-s-1}^2 / (2^{2n} 12)
//                 + (2-lmin)^2 S_t^2 / (2^{2n} 12)
// taking the positive root; at t = 0 the middle sum is empty, which is exactly the
// bootstrap rule for S_1.  Whenever the raw root falls below clamp_delta the
// previous size is reused (plateau).
RangeSchedule recursive_ranges(const ScheduleInputs& in, int T);

// Closed-form decay law for the exponential model S_t = 2 exp(-(alpha t + gamma)):
//   alpha = -ln(lambda2)
//   gamma = ln(lambda2^2 - (2-lambda_min)^2 / (2^{2n} 3)) / 2 - ln(z0_inf (1-lambda_min))
// Throws NonPositiveLogArgument (with the minimal feasible n) when the first log
// argument is not positive.
DecayParams exponential_params(double lambda2, double lambda_min, int bits, double z0_inf);

// S_0 = s0 verbatim; S_t = 2 exp(-(alpha t + gamma)) for t >= 1, with the same
// plateau clamp as the recursive schedule.
RangeSchedule exponential_ranges(const DecayParams& p, double s0, int T,
                                 double clamp_delta = 1e-16);

// Mean-square stability test: (1-lmin)^4/(1-lam2^2) + (2-lmin)^2 < 3 * 2^{2n}.
bool stability_condition(double lambda2, double lambda_min, int bits);

// Smallest integer n for which stability_condition holds (n-1 never does).
int min_bits(double lambda2, double lambda_min);

// Upper-bound sequence for (S_t/2)^2:
//   P(0) = s0^2/4
//   P(1) = z0_inf^2 (1-lmin)^2 + c P(0)
//   P(t) = z0_inf^2 (1-lmin)^2 lam2^{2(t-1)}
//        + b sum_{s=0}^{t-2} lam2^{2s} P(t-2-s) + c P(t-1)          (t >= 2)
// with c = (2-lmin)^2/(2^{2n} 3) and b = (1-lmin)^4/(2^{2n} 3).
std::vector<double> p_sequence(double lambda2, double lambda_min, int bits, double z0_inf,
                               double s0, int T);

// Spectral radius of the second-order companion form of p_sequence,
// (c + g + sqrt((c-g)^2 + 4b))/2 with g = lambda2^2; < 1 iff stability_condition.
double companion_matrix_radius(double lambda2, double lambda_min, int bits);

// Decay law of the quantization-free iteration: alpha' = -ln(lambda2),
// gamma' = -ln(z0_inf (1 - lambda_min)).
DecayParams unquantized_decay_params(const WeightMatrix& w, double z0_inf);

// CSV with header t,S_t,beta_t (12 significant digits).
std::string schedule_to_csv(const RangeSchedule& s);

}  // namespace consensus
