#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fraclap/calibration.hpp"
#include "fraclap/frackernel.hpp"

using namespace fraclap;

namespace {

struct KernelRow {
  double gamma, rho, k;
};

// tests/oracles/gen_kernels.py: derivative of the continued 1-D Bessel potential kernel.
const std::vector<KernelRow> kKernel = {
#include "oracles/frac_h3_table.inc"
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const HyperbolicDim kH3 = HyperbolicDim::make(3);

}  // namespace

TEST(FracKernel, MatchesOracleTable) {
  for (const auto& r : kKernel) {
    EXPECT_LT(rel(frac_kernel(kH3, r.gamma, r.rho), r.k), 1e-9) << "gamma=" << r.gamma << " rho=" << r.rho;
  }
}

TEST(FracKernel, ContinuationMatchesDirectIntegral) {
  const auto k = FracKernel::analytic(kH3, -0.75);
  EXPECT_TRUE(k.continuation_only());
  for (double rho : {0.5, 1.0, 2.0}) EXPECT_LT(rel(k(rho), frac_kernel_direct_h3(-0.75, rho)), 1e-4) << rho;
  EXPECT_THROW(frac_kernel_direct_h3(0.25, 1.0), DomainError);
}

TEST(FracKernel, UncalibratedThrows) {
  FracKernel k(kH3, 0.5);
  EXPECT_FALSE(k.calibrated());
  EXPECT_THROW(k(1.0), CalibrationMissingError);
  EXPECT_NO_THROW(k.shape(1.0));
}

TEST(FracKernel, InvalidOrderAndRadius) {
  EXPECT_THROW(FracKernel(kH3, 0.0), DomainError);
  EXPECT_THROW(FracKernel(kH3, 1.0), DomainError);
  EXPECT_THROW(frac_kernel(kH3, 0.5, 0.0), DomainError);
}

TEST(FracKernel, PositiveOnProbeGrid) {
  for (int n : {2, 3, 5}) {
    const auto d = HyperbolicDim::make(n);
    for (double g : {0.25, 0.5, 0.75}) {
      const auto k = FracKernel::analytic(d, g);
      for (double rho = 0.05; rho <= 10.0; rho *= 1.15) EXPECT_GT(k(rho), 0.0) << "n=" << n << " g=" << g;
    }
  }
}

TEST(FracKernel, SmallDistanceExponent) {
  for (double g : {0.25, 0.5, 0.75}) {
    const auto k = FracKernel::analytic(kH3, g);
    const double slope = std::log(k(0.005) / k(0.01)) / std::log(0.5);
    EXPECT_NEAR(slope, -(3.0 + 2.0 * g), 0.1) << g;
    // rho^{n+2g} K converges as rho -> 0
    double prev = 0.0;
    for (int e = 2; e <= 4; ++e) {
      const double rho = std::pow(10.0, -e);
      const double v = std::pow(rho, 3.0 + 2.0 * g) * k(rho);
      EXPECT_GT(v, 0.0);
      if (prev > 0.0) {
        EXPECT_LT(rel(v, prev), 2e-2) << "g=" << g << " rho=" << rho;
      }
      prev = v;
    }
  }
}

TEST(FracKernel, FarFieldDecay) {
  const double g = 0.5;
  const auto k = FracKernel::analytic(kH3, g);
  const double measured = std::log(k(6.0) / k(3.0));
  const double model = std::log(std::pow(2.0, -1.0 - g) * std::exp(-2.0 * 3.0));
  EXPECT_LT(std::abs(measured / model - 1.0), 5e-2);
}

TEST(FracKernel, MetadataMatchesMeasuredSlopes) {
  const auto k = FracKernel::analytic(kH3, 0.5);
  const auto meta = k.as_radial();
  ASSERT_TRUE(meta.singular_exponent_at_zero.has_value());
  const double s0 = std::log(k(0.002) / k(0.004)) / std::log(0.5);
  EXPECT_LT(std::abs(s0 / *meta.singular_exponent_at_zero - 1.0), 0.1);
  const double rate = -std::log(k(10.0) / k(8.0)) / 2.0;
  EXPECT_LT(std::abs(rate / meta.decay_rate - 1.0), 0.1);
}

TEST(Calibration, RoutesAgree) {
  const auto c = calibrate_alpha(kH3, 0.5);
  ASSERT_TRUE(c.fitted.has_value());
  EXPECT_LT(rel(*c.fitted, c.analytic), 1e-4);
  EXPECT_EQ(c.alpha, c.analytic);
  const auto k = calibrated_kernel(kH3, 0.5);
  EXPECT_GT(k(1.0), 0.0);
}

TEST(Calibration, DisagreementBeyondToleranceThrows) {
  // The fit carries ~1e-7 quadrature error, far above this tolerance.
  EXPECT_THROW(calibrate_alpha(kH3, 0.5, true, 1e-13), CalibrationInconsistencyError);
}

TEST(Calibration, AlphaSmoothAcrossNegativeHalf) {
  // log alpha sampled every 0.05 has small second differences on both sides of -1/2.
  std::vector<double> la;
  for (double g = -0.8; g <= -0.199; g += 0.05) la.push_back(std::log(std::abs(alpha_fourier_constant(kH3, g))));
  for (std::size_t i = 1; i + 1 < la.size(); ++i) EXPECT_LT(std::abs(la[i + 1] - 2 * la[i] + la[i - 1]), 0.05) << i;
}
