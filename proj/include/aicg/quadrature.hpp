#pragma once

#include <functional>
#include <stdexcept>

namespace aicg {

/// Raised when an adaptive scheme cannot meet its tolerance; carries the best estimate.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const { return best_estimate_; }
    double error_estimate() const { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
};

/// Globally adaptive 21-point Gauss-Kronrod integration on [a, b].
///
/// The interval with the largest |K21 - G10| is bisected until the summed
/// error estimate is at most `abs_tol`.
QuadratureResult quad_adaptive_1d(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_subdivisions = 2000);

}  // namespace aicg
