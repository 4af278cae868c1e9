#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fraclap/hyperbolic.hpp"
#include "fraclap/radial_function.hpp"

using namespace fraclap;

namespace {

struct HeatRow {
  double t, rho, p;
};
struct SphericalRow {
  double lambda, rho, k;
};

// tests/oracles/gen_kernels.py
const std::vector<HeatRow> kHeatH3 = {
#include "oracles/heat_h3_table.inc"
};
const std::vector<HeatRow> kHeatH2 = {
#include "oracles/heat_h2_table.inc"
};
const std::vector<SphericalRow> kSphericalH2 = {
#include "oracles/spherical_h2_table.inc"
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Point random_point(std::mt19937& gen, int n) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(0.0, 4.0);
  std::vector<double> dir(n);
  double norm = 0.0;
  for (auto& d : dir) {
    d = normal(gen);
    norm += d * d;
  }
  for (auto& d : dir) d /= std::sqrt(norm);
  return radial_point(radius(gen), dir);
}

}  // namespace

TEST(HyperbolicDim, RejectsLowDimension) {
  EXPECT_THROW(HyperbolicDim::make(1), DomainError);
  const auto d = HyperbolicDim::make(5);
  EXPECT_DOUBLE_EQ(d.half_nm1, 2.0);
  EXPECT_DOUBLE_EQ(d.lambda1, 4.0);
}

TEST(Distance, IdentityAndRadialGeodesic) {
  EXPECT_EQ(hyperbolic_distance(origin(3), origin(3)), 0.0);
  EXPECT_NEAR(hyperbolic_distance(radial_point(3, 1.0), origin(3)), 1.0, 1e-14);
  // close points keep their relative precision
  EXPECT_NEAR(hyperbolic_distance(radial_point(3, 2.0), radial_point(3, 2.0 + 1e-9)), 1e-9, 1e-16);
}

TEST(Distance, SymmetricAndTriangleInequality) {
  std::mt19937 gen(20240611);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_point(gen, 3), b = random_point(gen, 3), c = random_point(gen, 3);
    const double ab = hyperbolic_distance(a, b);
    EXPECT_DOUBLE_EQ(ab, hyperbolic_distance(b, a));
    EXPECT_LE(hyperbolic_distance(a, c), ab + hyperbolic_distance(b, c) + 1e-12);
  }
}

TEST(Distance, OffHyperboloidThrows) {
  EXPECT_THROW(hyperbolic_distance({1.0, 1.0, 0.0}, origin(2)), InvalidPointError);
  EXPECT_THROW(hyperbolic_distance({-1.0, 0.0, 0.0}, origin(2)), InvalidPointError);
  EXPECT_THROW(hyperbolic_distance(origin(2), origin(3)), InvalidPointError);
}

TEST(VolumeElement, Values) {
  EXPECT_EQ(volume_element(HyperbolicDim::make(3), 0.0), 0.0);
  EXPECT_NEAR(volume_element(HyperbolicDim::make(2), 1.0), 1.1752011936438014, 1e-15);
  EXPECT_NEAR(volume_element(HyperbolicDim::make(3), 2.0), 13.154116418008241, 1e-12);
}

TEST(SphericalK, OddDimensionClosedForm) {
  const auto d3 = HyperbolicDim::make(3);
  EXPECT_NEAR(spherical_k(d3, 1.0, 1.0), -std::sin(1.0) / std::sinh(1.0), 1e-14);
  EXPECT_NEAR(spherical_k(d3, 0.0, 0.7), 0.0, 1e-15);
}

TEST(SphericalK, EvenDimensionMatchesLegendreOracle) {
  const auto d2 = HyperbolicDim::make(2);
  for (const auto& r : kSphericalH2) {
    EXPECT_NEAR(spherical_k(d2, r.lambda, r.rho), r.k, 1e-8 * std::max(1.0, std::abs(r.k)))
        << "lambda=" << r.lambda << " rho=" << r.rho;
  }
}

TEST(SphericalK, EigenfunctionResidualH3) {
  const auto d3 = HyperbolicDim::make(3);
  const double h = 1e-3;
  for (double lambda : {0.5, 1.0, 2.0}) {
    auto k = [&](double r) { return spherical_k(d3, lambda, r); };
    for (double rho = 0.2; rho <= 5.0; rho += 0.4) {
      const double d1 = (k(rho - 2 * h) - 8 * k(rho - h) + 8 * k(rho + h) - k(rho + 2 * h)) / (12 * h);
      const double d2 =
          (-k(rho - 2 * h) + 16 * k(rho - h) - 30 * k(rho) + 16 * k(rho + h) - k(rho + 2 * h)) / (12 * h * h);
      const double res = d2 + 2.0 / std::tanh(rho) * d1 + (lambda * lambda + 1.0) * k(rho);
      EXPECT_LT(std::abs(res), 1e-6) << "lambda=" << lambda << " rho=" << rho;
    }
  }
}

TEST(HeatKernel, H3MatchesClosedForm) {
  const HyperbolicHeatKernel h(3);
  for (const auto& r : kHeatH3) {
    if (r.p < 1e-90) continue;
    EXPECT_LT(rel(h(r.t, r.rho), r.p), 1e-9) << "t=" << r.t << " rho=" << r.rho;
  }
  EXPECT_NEAR(h.normalization(), 1.0 / (4.0 * std::pow(std::numbers::pi, 1.5)), 1e-14);
}

TEST(HeatKernel, H2MatchesMcKeanIntegral) {
  const HyperbolicHeatKernel h(2);
  for (const auto& r : kHeatH2) EXPECT_LT(rel(h(r.t, r.rho), r.p), 1e-7) << "t=" << r.t << " rho=" << r.rho;
}

TEST(HeatKernel, UnitMass) {
  const HyperbolicHeatKernel h3(3), h2(2), h5(5);
  for (double t : {0.1, 1.0, 10.0}) EXPECT_NEAR(h3.mass(t), 1.0, 1e-6) << t;
  for (double t : {0.5, 1.0}) EXPECT_NEAR(h2.mass(t), 1.0, 1e-4) << t;
  EXPECT_NEAR(h5.mass(0.5), 1.0, 1e-6);
}

TEST(HeatKernel, PositiveAndOnDiagonalDecreasing) {
  for (int n : {2, 3, 5}) {
    const HyperbolicHeatKernel h(n);
    for (double t : {0.05, 0.3, 1.0, 4.0}) {
      EXPECT_LE(h.on_diagonal(2 * t), h.on_diagonal(t)) << "n=" << n << " t=" << t;
      for (double rho : {0.0, 0.5, 2.0, 4.0}) EXPECT_GT(h(t, rho), 0.0) << "n=" << n;
    }
  }
}

TEST(HeatKernel, SemigroupByLawOfCosines) {
  // p_1(rho) against the (r, theta) quadrature of p_0.5(r) p_0.5(d(r, theta)).
  const HyperbolicHeatKernel h(3);
  const auto outer = composite_gauss(uniform_breaks(0.0, 10.0, 0.25), 16);
  const auto inner = composite_gauss(uniform_breaks(0.0, std::numbers::pi, std::numbers::pi / 8), 16);
  for (double rho : {0.0, 1.0, 2.0}) {
    double acc = 0.0;
    for (std::size_t i = 0; i < outer.x.size(); ++i) {
      const double r = outer.x[i];
      double ang = 0.0;
      for (std::size_t j = 0; j < inner.x.size(); ++j) {
        const double th = inner.x[j];
        const double c = std::cosh(r) * std::cosh(rho) - std::sinh(r) * std::sinh(rho) * std::cos(th);
        ang += inner.w[j] * std::sin(th) * h(0.5, std::acosh(std::max(c, 1.0)));
      }
      acc += outer.w[i] * 2.0 * std::numbers::pi * std::pow(std::sinh(r), 2) * h(0.5, r) * ang;
    }
    EXPECT_LT(rel(acc, h(1.0, rho)), 1e-3) << "rho=" << rho;
  }
}

TEST(Envelope, Values) {
  EXPECT_NEAR(dm_envelope(HyperbolicDim::make(3), 1.0, 0.0), std::exp(-1.0), 1e-15);
  // (1 + rho + t)^{(n-3)/2} = 2^{-1/2} at n = 2, t = 1
  EXPECT_NEAR(dm_envelope(HyperbolicDim::make(2), 1.0, 0.0), std::exp(-0.25) / std::sqrt(2.0), 1e-15);
}

TEST(Envelope, RatioBandedOnProbeGrid) {
  const HyperbolicHeatKernel h(3);
  const auto d = HyperbolicDim::make(3);
  double lo = 1e300, hi = 0.0;
  for (double lt = -2.0; lt <= 1.0; lt += 0.25) {
    for (double rho = 0.0; rho <= 5.0; rho += 0.5) {
      const double q = h(std::pow(10.0, lt), rho) / dm_envelope(d, std::pow(10.0, lt), rho);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 50.0);
}

TEST(HeatKernel, InvalidArguments) {
  const HyperbolicHeatKernel h(3);
  EXPECT_THROW(h(0.0, 1.0), DomainError);
  EXPECT_THROW(h(1.0, -1.0), DomainError);
  EXPECT_THROW(dm_envelope(HyperbolicDim::make(3), -1.0, 0.0), DomainError);
}
