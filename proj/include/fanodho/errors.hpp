// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace fanodho {

// Adaptive quadrature ran out of subdivisions. Carries the best estimate
// obtained so far and its error bound.
struct QuadratureError : std::runtime_error {
    double best_estimate;
    double error_estimate;

    QuadratureError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
};

// A diagonalization precondition failed (e.g. the oscillator potential is
// renormalized below zero without the counter-term). The message names the
// violated inequality.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace fanodho
