#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace taep {

// Input data failed a content check (CLI exit code 2).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical routine failed to meet its contract (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The row QP did not reach the requested stationarity residual within the
// iteration cap. Carries the best feasible iterate found and its residual.
class QpConvergenceError : public NumericalError {
public:
    QpConvergenceError(const std::string& msg, std::vector<double> iterate, double res)
        : NumericalError(msg), best_iterate(std::move(iterate)), residual(res) {}

    std::vector<double> best_iterate;
    double residual = 0.0;
};

}  // namespace taep
