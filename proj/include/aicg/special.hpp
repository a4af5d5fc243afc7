#pragma once

namespace aicg {

/// Error function. Positive-term series below |x| = 2.5, Lentz continued
/// fraction for the complement above; relative error stays near 1e-15.
double erf(double x);

/// Complementary error function, accurate in the upper tail.
double erfc(double x);

/// Standard normal distribution function.
double normal_cdf(double x);

/// Exponentially scaled modified Bessel function, I0(x) * exp(-x), x >= 0.
double bessel_i0_scaled(double x);

}  // namespace aicg
