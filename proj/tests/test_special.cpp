#include <gtest/gtest.h>

#include <cmath>

#include "aicg/special.hpp"

using namespace aicg;

// Reference values from 30-digit mpmath.
TEST(Special, ErfMatchesHighPrecisionValues) {
    EXPECT_NEAR(aicg::erf(1.0), 0.842700792949714869341, 1e-15);
    EXPECT_NEAR(aicg::erf(0.1), 0.112462916018284898404712, 1e-16);
    EXPECT_NEAR(aicg::erf(2.0), 0.995322265018952734162, 1e-15);
    EXPECT_NEAR(aicg::erf(3.5), 0.999999256901627658587, 1e-15);
    EXPECT_NEAR(aicg::erf(5.0 / std::sqrt(2.0)), 0.999999426696856241612, 1e-15);
    EXPECT_NEAR(aicg::erf(1.0 / std::sqrt(2.0)), 0.682689492137085897170, 1e-15);
}

TEST(Special, ErfIsOddAndBounded) {
    for (double x = 0.0; x <= 8.0; x += 0.137) {
        EXPECT_EQ(aicg::erf(-x), -aicg::erf(x));
        EXPECT_LE(std::abs(aicg::erf(x)), 1.0);
    }
    EXPECT_EQ(aicg::erf(0.0), 0.0);
    EXPECT_EQ(aicg::erf(40.0), 1.0);
}

TEST(Special, ErfcKeepsRelativeAccuracyInTheTail) {
    EXPECT_NEAR(aicg::erfc(5.0) / 1.53745979442803485018834e-12, 1.0, 1e-13);
    EXPECT_NEAR(aicg::erfc(-1.0), 1.0 + 0.842700792949714869341, 1e-15);
}

TEST(Special, AgreesWithStandardLibrary) {
    for (double x = -6.0; x <= 6.0; x += 0.01) {
        EXPECT_NEAR(aicg::erf(x), std::erf(x), 2e-16 * 8) << x;
    }
}

TEST(Special, NormalCdf) {
    EXPECT_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.0), 0.5 * (1.0 + 0.682689492137085897170), 1e-15);
    EXPECT_NEAR(normal_cdf(-1.0) + normal_cdf(1.0), 1.0, 1e-15);
}

TEST(Special, ScaledBesselAcrossTheSwitchover) {
    EXPECT_EQ(bessel_i0_scaled(0.0), 1.0);
    for (double x : {0.5, 3.0, 50.0, 599.0}) {
        EXPECT_NEAR(bessel_i0_scaled(x), std::cyl_bessel_i(0.0, x) * std::exp(-x), 1e-14);
    }
    const double below = bessel_i0_scaled(599.999);
    const double above = bessel_i0_scaled(600.001);
    // scipy i0e ratio at these two points.
    EXPECT_NEAR(below / above, 1.0000016673636616, 1e-12);
    // Asymptotically I0(x) e^-x ~ 1 / sqrt(2 pi x).
    EXPECT_NEAR(bessel_i0_scaled(1e6) * std::sqrt(2.0 * M_PI * 1e6), 1.0, 1e-6);
}
