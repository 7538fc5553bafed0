#pragma once

#include <stdexcept>
#include <string>

namespace consensus {

// Matrix handed to the symmetric eigensolver is not symmetric within tolerance.
struct NotSymmetric : std::invalid_argument {
    explicit NotSymmetric(const std::string& what) : std::invalid_argument(what) {}
};

// A scalar parameter lies outside its admissible interval (e.g. Laplacian step size).
struct ParameterOutOfRange : std::invalid_argument {
    explicit ParameterOutOfRange(const std::string& what) : std::invalid_argument(what) {}
};

// Vector/matrix shapes do not line up.
struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

// The closed-form decay intercept needs log(lambda2^2 - (2-lambda_min)^2/(2^{2n}*3));
// thrown when that argument is <= 0, i.e. the bit budget is too small for the topology.
// min_feasible_bits is the smallest n that makes the argument positive.
struct NonPositiveLogArgument : std::domain_error {
    NonPositiveLogArgument(const std::string& what, int min_feasible)
        : std::domain_error(what), min_feasible_bits(min_feasible) {}
    int min_feasible_bits;
};

// An experiment combination could not produce a single feasible trial.
struct InfeasibleBits : std::runtime_error {
    InfeasibleBits(const std::string& what, int min_feasible)
        : std::runtime_error(what), min_feasible_bits(min_feasible) {}
    int min_feasible_bits;
};

}  // namespace consensus
