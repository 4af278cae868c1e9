#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "fraclap/operators.hpp"
#include "fraclap/spectral.hpp"

using namespace fraclap;

namespace {

struct PoissonRow {
  double gamma, y, rho, p;
};

// tests/oracles/gen_kernels.py
const std::vector<PoissonRow> kPoisson = {
#include "oracles/poisson_h3_table.inc"
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const HyperbolicDim kH3 = HyperbolicDim::make(3);

}  // namespace

// ---------------------------------------------------------------------------
// Spectral multiplier

TEST(Spectral, ActsDiagonallyOnWindowedEigenfunction) {
  const double l0 = 2.0;
  const auto f = RadialFunction::windowed_eigenfunction(l0, 40.0);
  for (double g : {0.25, 0.5, 0.75}) {
    for (double rho : {0.5, 1.0, 1.5, 2.0}) {
      const double mu = std::pow(l0 * l0 + 1.0, g);
      // absolute scale: rho = 1.5 sits next to a zero of f
      EXPECT_NEAR(spectral_frac(g, f, rho), mu * f(rho), 1e-3 * mu) << g << " " << rho;
    }
  }
}

TEST(Spectral, OrderZeroIsIdentity) {
  const auto f = RadialFunction::gaussian();
  for (double rho : {0.0, 0.5, 1.0, 3.0}) EXPECT_NEAR(spectral_frac(0.0, f, rho), f(rho), 1e-8);
}

TEST(Spectral, Linear) {
  const auto a = RadialFunction::gaussian(0.7), b = RadialFunction::bump(2.0);
  for (double rho : {0.3, 1.1, 1.9}) {
    EXPECT_NEAR(spectral_frac(0.4, a + b, rho), spectral_frac(0.4, a, rho) + spectral_frac(0.4, b, rho), 1e-8);
  }
}

TEST(Spectral, UnresolvableGridThrows) {
  SpectralGrid coarse;
  coarse.h = 0.5;
  coarse.rel_tol = 1e-12;
  EXPECT_THROW(spectral_frac(0.5, RadialFunction::gaussian(4.0), 0.5, coarse), InstabilityError);
}

// ---------------------------------------------------------------------------
// Singular integral

TEST(SingularIntegral, ConstantMapsToZero) {
  const auto k = FracKernel::analytic(kH3, 0.5);
  for (double rho : {0.0, 1.0, 2.5}) EXPECT_NEAR(pv_frac(k, RadialFunction::constant(), rho), 0.0, 1e-6);
}

TEST(SingularIntegral, MatchesSpectralAtGammaPointThree) {
  const auto f = RadialFunction::gaussian();
  EXPECT_LT(rel(pv_frac(kH3, 0.3, f, 1.0), spectral_frac(0.3, f, 1.0)), 1e-3);
}

TEST(SingularIntegral, OddInF) {
  const auto k = FracKernel::analytic(kH3, 0.6);
  const auto f = RadialFunction::gaussian();
  const auto g = -1.0 * f;
  EXPECT_EQ(pv_frac(k, g, 0.8), -pv_frac(k, f, 0.8));
}

TEST(SingularIntegral, PointAndRadiusAgree) {
  const auto f = RadialFunction::bump(2.5);
  EXPECT_DOUBLE_EQ(pv_frac(kH3, 0.5, f, radial_point(3, 1.2)), pv_frac(kH3, 0.5, f, 1.2));
}

TEST(SingularIntegral, RoughFunctionRejected) {
  auto f = RadialFunction::gaussian();
  f.holder_alpha = 1.2;
  EXPECT_THROW(pv_frac(kH3, 0.75, f, 1.0), SmoothnessError);
  EXPECT_NO_THROW(pv_frac(kH3, 0.5, f, 1.0));
}

TEST(SingularIntegral, InvalidSpecRejected) {
  QuadratureSpec spec;
  spec.pv_inner_radius = 1.5;
  EXPECT_THROW(pv_frac(kH3, 0.5, RadialFunction::gaussian(), 1.0, spec), DomainError);
}

// ---------------------------------------------------------------------------
// Poisson extension

TEST(Poisson, KernelMatchesOracleBothRoutes) {
  const HyperbolicProvider h3(3);
  for (const auto& r : kPoisson) {
    EXPECT_LT(rel(poisson_kernel(h3, r.gamma, r.y, r.rho), r.p), 1e-7) << r.gamma << " " << r.y << " " << r.rho;
    EXPECT_LT(rel(poisson_kernel_fourier_h3(r.gamma, r.y, r.rho), r.p), 1e-7) << r.gamma << " " << r.y << " " << r.rho;
  }
}

TEST(Poisson, KernelHasUnitMass) {
  const HyperbolicProvider h3(3);
  for (double g : {0.25, 0.5, 0.75}) EXPECT_NEAR(poisson_kernel_mass(h3, g, 0.75), 1.0, 1e-3) << g;
}

TEST(Poisson, ConstantExtendsToConstant) {
  for (double y : {0.1, 1.0, 3.0}) EXPECT_NEAR(poisson_extend(kH3, 0.5, RadialFunction::constant(), 1.0, y), 1.0, 1e-4);
}

TEST(Poisson, BoundaryValueRecovered) {
  // at gamma = 1/2 the extension is exp(-y sqrt(-Delta)) f, so (f - u)/y -> sqrt(-Delta) f
  const auto f = RadialFunction::gaussian();
  const double y = 1e-3;
  for (double rho : {0.0, 1.0}) {
    const double u = poisson_extend(kH3, 0.5, f, rho, y);
    EXPECT_NEAR(u, f(rho), 5e-3);
    EXPECT_LT(rel((f(rho) - u) / y, spectral_frac(0.5, f, rho)), 1e-2) << rho;
  }
}

TEST(Poisson, HeatAndFourierRoutesAgree) {
  const auto f = RadialFunction::gaussian();
  EXPECT_LT(rel(poisson_extend(kH3, 0.5, f, 1.0, 0.5), poisson_extend_fourier(0.5, f, 1.0, 0.5)), 1e-3);
}

TEST(Poisson, MaximumPrincipleSample) {
  const auto f = RadialFunction::gaussian();
  const auto u = make_extension(kH3, 0.5, f);
  double sup_u = 0.0;
  for (double rho : {0.0, 0.5, 1.5}) {
    for (double y : {0.05, 0.5, 2.0}) sup_u = std::max(sup_u, std::abs(u(rho, y)));
  }
  // e^{t Delta} f is largest as t -> 0, where it equals f(0) = 1
  EXPECT_LE(sup_u, 1.0 + 1e-9);
}

// ---------------------------------------------------------------------------
// Neumann limit

TEST(Neumann, MatchesSpectral) {
  const auto f = RadialFunction::gaussian();
  const auto u = make_extension(kH3, 0.5, f);
  EXPECT_LT(rel(neumann_limit(u, 1.0).value, spectral_frac(0.5, f, 1.0)), 1e-2);
}

TEST(Neumann, ConstantHasZeroFlux) {
  const auto u = make_extension(kH3, 0.5, RadialFunction::constant());
  EXPECT_NEAR(neumann_limit(u, 1.0).value, 0.0, 1e-4);
}

TEST(Neumann, HalfOrderIsPlainNormalDerivative) {
  // a = 0: -lim du/dy from a field without a closed-form flux, by centred differences.
  const auto f = RadialFunction::gaussian();
  ExtensionField u = make_extension(kH3, 0.5, f);
  u.flux = nullptr;
  EXPECT_LT(rel(neumann_limit(u, 1.0).value, spectral_frac(0.5, f, 1.0)), 1e-2);
}

TEST(Neumann, ProfileConstantConsistency) {
  for (double g : {0.25, 0.5, 0.75}) {
    const auto o = FracOrder::make(g);
    for (double mu : {0.5, 2.0}) {
      std::vector<double> samples;
      for (int k = 4; k <= 12; ++k) {
        const double y = std::exp2(-k);
        samples.push_back(std::pow(y, o.a) * mu * phi_gamma_derivative(o, mu * y));
      }
      const double lim = -o.d_gamma * richardson(samples, extension_flux_exponents(g, 3)).value;
      EXPECT_LT(rel(lim, std::pow(mu, 2.0 * g)), 1e-6) << g << " " << mu;
    }
  }
}

// ---------------------------------------------------------------------------
// Energy

TEST(Energy, ConstantIsReciprocalOfDGamma) {
  EXPECT_NEAR(energy_constant(0.5), 1.0, 1e-6);
  for (double g : {0.25, 0.75}) EXPECT_LT(rel(energy_constant(g), 1.0 / d_gamma(g)), 1e-4) << g;
}

SpectralGrid coarse_trace_grid() {
  SpectralGrid g;
  g.h = 0.1;
  g.rel_tol = 1e-5;
  return g;
}

TEST(TraceEnergy, EqualityAndStrictInequality) {
  const auto f = RadialFunction::gaussian();
  const auto eq = trace_energy_check(0.5, f, {}, coarse_trace_grid());
  EXPECT_NEAR(eq.ratio, 1.0, 2e-2);
  ExtensionPerturbation p;
  p.amplitude = 0.1;
  EXPECT_GT(trace_energy_check(0.5, f, p, coarse_trace_grid()).ratio, 1.0);
}

TEST(TraceEnergy, EqualityAtQuarterOrder) {
  const auto f = RadialFunction::bump(2.0);
  const auto eq = trace_energy_check(0.25, f, {}, coarse_trace_grid());
  EXPECT_GT(eq.rhs, 0.0);
  EXPECT_NEAR(eq.ratio, 1.0, 2e-2);
}
