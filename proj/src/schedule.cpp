#include "consensus/schedule.hpp"

#include <cmath>
#include <string>

#include "consensus/errors.hpp"
#include "consensus/textio.hpp"

namespace consensus {

namespace {

void check_spectral_pair(double lambda2, double lambda_min) {
    if (!(lambda2 >= 0.0) || !(lambda2 < 1.0))
        throw ParameterOutOfRange("lambda2 must lie in [0, 1), got " + std::to_string(lambda2));
    if (!(lambda_min >= -1.0) || !(lambda_min <= 1.0))
        throw ParameterOutOfRange("lambda_min must lie in [-1, 1], got " +
                                  std::to_string(lambda_min));
}

void check_bits(int bits) {
    if (bits < 1 || bits > 52)
        throw ParameterOutOfRange("bit budget must lie in [1, 52], got " + std::to_string(bits));
}

std::vector<double> betas_of(const std::vector<double>& sizes) {
    std::vector<double> betas(sizes.size());
    for (std::size_t t = 0; t < sizes.size(); ++t) betas[t] = -std::log(sizes[t] / 2.0);
    return betas;
}

// Smallest n >= 1 with lambda2^2 > (2 - lambda_min)^2 / (2^{2n} * 3), i.e. the
// smallest bit budget for which the closed-form intercept exists.
int min_feasible_log_bits(double lambda2, double lambda_min) {
    const double num = (2.0 - lambda_min) * (2.0 - lambda_min);
    for (int n = 1; n <= 1024; ++n) {
        if (lambda2 * lambda2 > num / (std::pow(2.0, 2.0 * n) * 3.0)) return n;
    }
    return 1024;
}

}  // namespace

RangeSchedule recursive_ranges(const ScheduleInputs& in, int T) {
    check_spectral_pair(in.lambda2, in.lambda_min);
    check_bits(in.bits);
    if (T < 0) throw ParameterOutOfRange("horizon must be >= 0");
    if (!(in.s0 > 0.0)) throw ParameterOutOfRange("initial interval size must be > 0");
    if (!(in.z0_inf >= 0.0)) throw ParameterOutOfRange("z0_inf must be >= 0");
    if (!(in.clamp_delta >= 0.0)) throw ParameterOutOfRange("clamp_delta must be >= 0");
    if (static_cast<int>(in.norms.size()) < T - 1)
        throw ParameterOutOfRange("norms must cover s = 0.." + std::to_string(T - 2));
    if (!in.norms.empty() && std::abs(in.norms[0] - (1.0 - in.lambda_min)) > 1e-9)
        throw ParameterOutOfRange("norms[0] must equal 1 - lambda_min");

    RangeSchedule out;
    out.source = RangeSchedule::Source::recursive;
    out.sizes.resize(T + 1);
    out.sizes[0] = in.s0;

    const double q = std::pow(2.0, 2.0 * in.bits) * 12.0;
    const double c1 = (1.0 - in.lambda_min) * (1.0 - in.lambda_min);
    const double c2 = (2.0 - in.lambda_min) * (2.0 - in.lambda_min);

    // Per-lag weights of the accumulated-noise sum, (1-lmin)^2 norms[s]^2 / (2^{2n} 12).
    std::vector<double> lag(std::max(0, T - 1));
    for (std::size_t s = 0; s < lag.size(); ++s) lag[s] = c1 * in.norms[s] * in.norms[s] / q;

    double lampow = 1.0;  // lambda2^{2t}
    for (int t = 0; t < T; ++t) {
        double rhs = in.z0_inf * in.z0_inf * lampow * c1;
        for (int s = 0; s < t; ++s) rhs += lag[s] * out.sizes[t - s - 1] * out.sizes[t - s - 1];
        rhs += c2 * out.sizes[t] * out.sizes[t] / q;
        const double raw = 2.0 * std::sqrt(rhs);
        out.sizes[t + 1] = raw < in.clamp_delta ? out.sizes[t] : raw;
        lampow *= in.lambda2 * in.lambda2;
    }
    out.betas = betas_of(out.sizes);
    return out;
}

DecayParams exponential_params(double lambda2, double lambda_min, int bits, double z0_inf) {
    check_spectral_pair(lambda2, lambda_min);
    check_bits(bits);
    if (!(lambda2 > 0.0))
        throw ParameterOutOfRange("exponential_params needs lambda2 > 0");
    if (!(lambda_min < 1.0))
        throw ParameterOutOfRange("exponential_params needs lambda_min < 1");
    if (!(z0_inf > 0.0))
        throw ParameterOutOfRange("exponential_params needs z0_inf > 0");

    const double noise = (2.0 - lambda_min) * (2.0 - lambda_min) / (std::pow(2.0, 2.0 * bits) * 3.0);
    const double arg = lambda2 * lambda2 - noise;
    if (!(arg > 0.0)) {
        const int feasible = min_feasible_log_bits(lambda2, lambda_min);
        throw NonPositiveLogArgument(
            "bit budget n = " + std::to_string(bits) + " too small for this topology (lambda2^2 = " +
                std::to_string(lambda2 * lambda2) + " <= noise term " + std::to_string(noise) +
                "); smallest feasible n = " + std::to_string(feasible),
            feasible);
    }

    DecayParams p;
    p.alpha = -std::log(lambda2);
    p.gamma = 0.5 * std::log(arg) - std::log(z0_inf * (1.0 - lambda_min));
    return p;
}

RangeSchedule exponential_ranges(const DecayParams& p, double s0, int T, double clamp_delta) {
    if (T < 0) throw ParameterOutOfRange("horizon must be >= 0");
    if (!(s0 > 0.0)) throw ParameterOutOfRange("initial interval size must be > 0");
    if (!(clamp_delta >= 0.0)) throw ParameterOutOfRange("clamp_delta must be >= 0");

    RangeSchedule out;
    out.source = RangeSchedule::Source::exponential;
    out.sizes.resize(T + 1);
    out.sizes[0] = s0;
    for (int t = 1; t <= T; ++t) {
        const double raw = 2.0 * std::exp(-(p.alpha * t + p.gamma));
        out.sizes[t] = raw < clamp_delta ? out.sizes[t - 1] : raw;
    }
    out.betas = betas_of(out.sizes);
    return out;
}

bool stability_condition(double lambda2, double lambda_min, int bits) {
    check_spectral_pair(lambda2, lambda_min);
    const double g1 = 1.0 - lambda_min;
    const double g2 = 2.0 - lambda_min;
    const double lhs = g1 * g1 * g1 * g1 / (1.0 - lambda2 * lambda2) + g2 * g2;
    return lhs < 3.0 * std::pow(2.0, 2.0 * bits);
}

int min_bits(double lambda2, double lambda_min) {
    check_spectral_pair(lambda2, lambda_min);
    const double g1 = 1.0 - lambda_min;
    const double g2 = 2.0 - lambda_min;
    const double lhs = g1 * g1 * g1 * g1 / (1.0 - lambda2 * lambda2) + g2 * g2;
    int n = static_cast<int>(std::floor(std::log2(lhs / 3.0) / 2.0)) + 1;
    // The log expression and the direct inequality can disagree by one ulp right at
    // the boundary; settle against the predicate itself.
    while (!stability_condition(lambda2, lambda_min, n)) ++n;
    while (n > -64 && stability_condition(lambda2, lambda_min, n - 1)) --n;
    return n;
}

std::vector<double> p_sequence(double lambda2, double lambda_min, int bits, double z0_inf,
                               double s0, int T) {
    check_spectral_pair(lambda2, lambda_min);
    if (bits < 1) throw ParameterOutOfRange("bit budget must be >= 1");
    if (T < 0) throw ParameterOutOfRange("horizon must be >= 0");
    if (!(s0 > 0.0)) throw ParameterOutOfRange("initial interval size must be > 0");

    const double denom = std::pow(2.0, 2.0 * bits) * 3.0;
    const double g1 = 1.0 - lambda_min;
    const double c = (2.0 - lambda_min) * (2.0 - lambda_min) / denom;
    const double b = g1 * g1 * g1 * g1 / denom;
    const double g = lambda2 * lambda2;
    const double drive = z0_inf * z0_inf * g1 * g1;

    std::vector<double> p(T + 1);
    p[0] = s0 * s0 / 4.0;
    if (T >= 1) p[1] = drive + c * p[0];
    double gq = g;  // lambda2^{2(t-1)} for the current t
    for (int t = 2; t <= T; ++t) {
        double acc = drive * gq;
        double gp = 1.0;  // lambda2^{2s}
        for (int s = 0; s <= t - 2; ++s) {
            acc += b * gp * p[t - 2 - s];
            gp *= g;
        }
        acc += c * p[t - 1];
        p[t] = acc;
        gq *= g;
    }
    return p;
}

double companion_matrix_radius(double lambda2, double lambda_min, int bits) {
    check_spectral_pair(lambda2, lambda_min);
    check_bits(bits);
    const double denom = std::pow(2.0, 2.0 * bits) * 3.0;
    const double g1 = 1.0 - lambda_min;
    const double c = (2.0 - lambda_min) * (2.0 - lambda_min) / denom;
    const double b = g1 * g1 * g1 * g1 / denom;
    const double g = lambda2 * lambda2;
    return 0.5 * (c + g + std::sqrt((c - g) * (c - g) + 4.0 * b));
}

DecayParams unquantized_decay_params(const WeightMatrix& w, double z0_inf) {
    if (!(w.lambda2 > 0.0) || !(w.lambda2 < 1.0))
        throw ParameterOutOfRange("unquantized_decay_params needs lambda2 in (0, 1)");
    if (!(z0_inf > 0.0) || !(w.lambda_min < 1.0))
        throw ParameterOutOfRange("unquantized_decay_params needs z0_inf > 0 and lambda_min < 1");
    DecayParams p;
    p.alpha = -std::log(w.lambda2);
    p.gamma = -std::log(z0_inf * (1.0 - w.lambda_min));
    return p;
}

std::string schedule_to_csv(const RangeSchedule& s) {
    std::string out = "t,S_t,beta_t\n";
    for (std::size_t t = 0; t < s.sizes.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += fmt12(s.sizes[t]);
        out += ',';
        out += fmt12(s.betas[t]);
        out += '\n';
    }
    return out;
}

}  // namespace consensus
