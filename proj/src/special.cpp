#include "aicg/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace aicg {

namespace {

constexpr double kSeriesCutoff = 2.5;

// erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_k (2x^2)^k x / (2k+1)!!
double erf_series(double x) {
    const double two_x2 = 2.0 * x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 200; ++k) {
        term *= two_x2 / (2.0 * k + 1.0);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x * x) * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0.
double erfc_continued_fraction(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < 500; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

}  // namespace

double erf(double x) {
    if (std::isnan(x)) return x;
    const double ax = std::abs(x);
    if (ax < kSeriesCutoff) return std::copysign(erf_series(ax), x);
    if (ax > 27.0) return std::copysign(1.0, x);
    const double r = 1.0 - erfc_continued_fraction(ax);
    return std::copysign(r, x);
}

double erfc(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 2.0 - erfc(-x);
    if (x < kSeriesCutoff) return 1.0 - erf_series(x);
    if (x > 27.3) return 0.0;
    return erfc_continued_fraction(x);
}

double normal_cdf(double x) { return 0.5 * erfc(-x / std::numbers::sqrt2); }

double bessel_i0_scaled(double x) {
    x = std::abs(x);
    if (x < 600.0) return std::cyl_bessel_i(0.0, x) * std::exp(-x);
    // Hankel expansion; three terms are below double precision at this range.
    const double inv8x = 1.0 / (8.0 * x);
    return (1.0 + inv8x * (1.0 + 4.5 * inv8x * (1.0 + 25.0 / 3.0 * inv8x)))
           / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace aicg
