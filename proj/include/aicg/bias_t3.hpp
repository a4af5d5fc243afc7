#pragma once

#include <vector>

#include "aicg/bias.hpp"

namespace aicg {

struct QuadratureSettings {
    double abs_tol = 1e-8;
    double r_max_offset = 12.0;  ///< radial and y domains truncated at mu0y + offset
    int max_subdivisions = 2000;

    void validate() const;
};

/// r (r^2 cos^2(phi + alpha0) - mu0y r (sin phi - sin alpha0 cos(phi + alpha0)) + mu0y^2).
double g_integrand(double r, double phi, double mu0y, double alpha0);

/// The two pieces of the T3 correction, before summation.
struct T3Parts {
    double vertical_region = 0.0;  ///< erf-weighted 1-D integral (closest point on the +y ray)
    double lower_region = 0.0;     ///< polar integral of g (closest point on a lower ray)
    double error_estimate = 0.0;
};

T3Parts bias_t3_parts(double mu0y, double alpha0, const QuadratureSettings& settings = {});

/// Three-ray (T3) correction at mu0 = (0, mu0y) with lower rays at -alpha0 and pi + alpha0.
/// Throws ConvergenceError (carrying the best estimate) if the tolerance is not met.
BiasEstimate bias_t3(double mu0y, double alpha0, const QuadratureSettings& settings = {});

/// Piecewise-cubic table of mu -> bias_t3(mu, alpha0(phi(mu, n))) for fixed n, used by
/// simulation loops that need the correction at many estimated points.
class T3BiasTable {
public:
    T3BiasTable(double n, double mu_max = 12.0, double step = 0.01);

    double operator()(double mu) const;
    double n() const { return n_; }

    /// Shared table for sample size n, built once per process.
    static const T3BiasTable& for_sample_size(double n);

private:
    double n_;
    double step_;
    std::vector<double> values_;
    std::vector<double> slopes_;
};

}  // namespace aicg
