#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "fraclap/expression.hpp"
#include "fraclap/heat2poisson.hpp"
#include "fraclap/manifolds.hpp"

using namespace fraclap;

namespace {

constexpr double kPi = std::numbers::pi;

RotSymProfile cubic(int n = 3) { return RotSymProfile::from_expression("r+r^3", n, "r + r^3"); }

std::string parse_message(const std::string& text) {
  try {
    parse_expression(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

// Shared t_end = 20 solve on H^3; the Poisson weight reaches far into large times.
const std::shared_ptr<const RadialHeatSolution>& long_h3_solution() {
  static const auto sol = std::make_shared<const RadialHeatSolution>(RotSymProfile::hyperbolic(3), 20.0);
  return sol;
}

}  // namespace

TEST(Expression, EvaluatesAndDifferentiates) {
  const auto e = parse_expression("r*exp(r^2) - 2*sinh(r)/3");
  const double r = 0.7;
  EXPECT_NEAR(e(r), r * std::exp(r * r) - 2.0 * std::sinh(r) / 3.0, 1e-14);
  EXPECT_NEAR(e.derivative()(r), std::exp(r * r) * (1.0 + 2.0 * r * r) - 2.0 * std::cosh(r) / 3.0, 1e-13);
  const auto p = parse_expression("sqrt(1 + r^2) + cos(pi*r) + log(2 + r) + r^-1");
  EXPECT_NEAR(p.derivative()(0.5), 0.5 / std::sqrt(1.25) - kPi * std::sin(kPi * 0.5) + 1.0 / 2.5 - 4.0, 1e-13);
  EXPECT_NEAR(parse_expression("-(r - 1)^2")(3.0), -4.0, 1e-15);
}

TEST(Expression, ConstantFolding) {
  double v = 0.0;
  EXPECT_TRUE(parse_expression("2^3 - 1").is_const(&v));
  EXPECT_DOUBLE_EQ(v, 7.0);
  EXPECT_FALSE(parse_expression("r + 1").is_const());
  EXPECT_TRUE(parse_expression("3*r").derivative().is_const(&v));
  EXPECT_DOUBLE_EQ(v, 3.0);
}

TEST(Expression, ErrorsCarryColumn) {
  EXPECT_NE(parse_message("r + * 2").find("column 5"), std::string::npos);
  EXPECT_NE(parse_message("sinh(r").find("column 7"), std::string::npos);
  EXPECT_NE(parse_message("foo(r)").find("unknown identifier 'foo'"), std::string::npos);
  EXPECT_NE(parse_message("r^r").find("exponent must be a number"), std::string::npos);
  EXPECT_THROW(parse_expression(""), ParseError);
  EXPECT_THROW(parse_expression("r r"), ParseError);
}

TEST(Profiles, Validation) {
  EXPECT_TRUE(validate_profile(RotSymProfile::hyperbolic(3)).ok);
  EXPECT_TRUE(validate_profile(RotSymProfile::euclidean(4)).ok);
  EXPECT_TRUE(validate_profile(cubic()).ok);
  // phi''(0) = 2, so the metric is not smooth at the pole
  const auto quad = validate_profile(RotSymProfile::from_expression("q", 3, "r + r^2"));
  EXPECT_FALSE(quad.ok);
  EXPECT_GE(quad.problems.size(), 1u);
  EXPECT_FALSE(validate_profile(RotSymProfile::from_expression("s", 3, "sin(r)")).ok);
  EXPECT_FALSE(validate_profile(RotSymProfile::from_expression("c", 3, "2*r")).ok);
  auto bad = RotSymProfile::hyperbolic(3);
  bad.ddphi = [](double r) { return std::cosh(r); };
  EXPECT_FALSE(validate_profile(bad).ok);
}

TEST(Profiles, Curvature) {
  const auto s = curvature(RotSymProfile::hyperbolic(4), 0.8);
  EXPECT_NEAR(s.sectional_radial, -1.0, 1e-12);
  EXPECT_NEAR(s.sectional_tangential, -1.0, 1e-12);
  EXPECT_NEAR(s.ricci_radial, -3.0, 1e-12);
  EXPECT_NEAR(s.ricci_tangential, -3.0, 1e-12);
  // r + r^3 at r = 2: phi = 10, phi' = 13, phi'' = 12
  const auto c = curvature(cubic(), 2.0);
  EXPECT_NEAR(c.sectional_radial, -1.2, 1e-12);
  EXPECT_NEAR(c.sectional_tangential, -168.0 / 100.0, 1e-12);
  EXPECT_THROW(curvature(cubic(), 0.0), DomainError);
}

TEST(Profiles, AdmissibilityRatios) {
  for (double r : {0.01, 1.0, 5.0}) {
    const auto h = admissibility_ratios(RotSymProfile::hyperbolic(3), r);
    EXPECT_NEAR(h.f1, 1.0, 1e-12);
    EXPECT_NEAR(h.f2, 2.0, 1e-9);
    const auto e = admissibility_ratios(RotSymProfile::euclidean(3), r);
    EXPECT_EQ(e.f1, 0.0);
    EXPECT_EQ(e.f2, 0.0);
  }
  // f1 = 6/(1+r^2) and f2 = (6 + 9r^2)/(1+r^2)^2 + f1 for n = 3
  const auto c = admissibility_ratios(cubic(), 1e-4);
  EXPECT_NEAR(c.f1, 6.0, 1e-6);
  EXPECT_NEAR(c.f2, 12.0, 1e-6);
}

TEST(Profiles, Verdicts) {
  const auto h = is_admissible_rotsym(RotSymProfile::hyperbolic(3));
  EXPECT_TRUE(h.admissible);
  EXPECT_NEAR(h.sup_f1, 1.0, 1e-9);
  const auto e = is_admissible_rotsym(RotSymProfile::euclidean(3));
  EXPECT_TRUE(e.admissible);
  EXPECT_EQ(e.sup_f1, 0.0);
  const auto c = is_admissible_rotsym(cubic());
  EXPECT_TRUE(c.admissible);
  EXPECT_NEAR(c.sup_f1, 6.0, 1e-4);
  const auto g = is_admissible_rotsym(RotSymProfile::from_expression("g", 3, "r*exp(r^2)"));
  EXPECT_FALSE(g.admissible);
  EXPECT_EQ(g.reason, "f1 or f2 grows at large r");
  EXPECT_THROW(is_admissible_rotsym(cubic(), {1.0, 2.0}), DomainError);
}

TEST(Profiles, BallVolumes) {
  EXPECT_NEAR(ball_volume(RotSymProfile::euclidean(3), 1.0), 4.0 * kPi / 3.0, 1e-12);
  EXPECT_NEAR(ball_volume(RotSymProfile::hyperbolic(2), 1.0), 2.0 * kPi * (std::cosh(1.0) - 1.0), 1e-12);
  EXPECT_NEAR(ball_volume(RotSymProfile::hyperbolic(3), 2.0), kPi * (std::sinh(4.0) - 4.0), 1e-10);
  EXPECT_THROW(ball_volume(RotSymProfile::euclidean(3), 0.0), DomainError);
}

TEST(Profiles, BishopComparison) {
  const auto p = cubic();
  const double beta = ricci_beta(p, log_grid(1e-3, 10.0, 241));
  EXPECT_NEAR(beta, std::sqrt(6.0), 1e-4);
  EXPECT_TRUE(bishop_ratio_holds(p, beta, 1.0, 2.0));
  // the flat comparison grows too slowly
  EXPECT_FALSE(bishop_ratio_holds(p, 0.0, 1.0, 2.0));
}

TEST(Conjugation, ModelValues) {
  const auto h = conjugation_potential(RotSymProfile::hyperbolic(3), 1.0);
  EXPECT_NEAR(h.V, 1.0, 1e-12);
  EXPECT_NEAR(h.w, 1.0 / std::sinh(1.0), 1e-14);
  const auto e = conjugation_potential(RotSymProfile::euclidean(5), 1.3);
  EXPECT_NEAR(e.V, 0.0, 1e-14);
  EXPECT_NEAR(e.w, 1.0, 1e-14);
}

TEST(Conjugation, IntertwinesLaplacians) {
  // Delta_M h = w (Delta_{R^n} - V)(h / w) on radial h, by centred differences
  const double d = 1e-3;
  auto second = [d](auto&& f, double r) { return (f(r + d) - 2.0 * f(r) + f(r - d)) / (d * d); };
  auto first = [d](auto&& f, double r) { return (f(r + d) - f(r - d)) / (2.0 * d); };
  for (int n : {3, 4}) {
    const auto p = cubic(n);
    auto h = [](double r) { return std::exp(-r * r); };
    auto g = [&](double r) { return h(r) / conjugation_potential(p, r).w; };
    for (double r : {0.5, 1.0, 2.0}) {
      const double lhs = second(h, r) + (n - 1) * p.dphi(r) / p.phi(r) * first(h, r);
      const auto c = conjugation_potential(p, r);
      const double rhs = c.w * (second(g, r) + (n - 1) / r * first(g, r) - c.V * g(r));
      EXPECT_NEAR(lhs, rhs, 1e-5 * std::max(1.0, std::abs(lhs))) << "n=" << n << " r=" << r;
    }
  }
}

TEST(RadialHeat, MatchesClosedForms) {
  const HyperbolicHeatKernel h(3);
  const RadialHeatSolution hyp(RotSymProfile::hyperbolic(3), 2.0);
  const RadialHeatSolution flat(RotSymProfile::euclidean(3), 2.0);
  for (double t : {0.05, 0.5, 2.0}) {
    const double gauss0 = std::pow(4.0 * kPi * t, -1.5);
    for (double r : {0.0, 0.3, 1.0, 2.0}) {
      EXPECT_NEAR(hyp(t, r), h(t, r), 1e-3 * h(t, 0.0)) << t << " " << r;
      EXPECT_NEAR(flat(t, r), gauss0 * std::exp(-r * r / (4.0 * t)), 1e-3 * gauss0) << t << " " << r;
    }
  }
  EXPECT_NEAR(hyp.mass_at_end(), 1.0, 1e-6);
  EXPECT_NEAR(flat.mass_at_end(), 1.0, 1e-6);
  EXPECT_LT(hyp.bootstrap_discrepancy(), 1e-3);
}

TEST(RadialHeat, LongTimesStayAccurate) {
  const auto& sol = long_h3_solution();
  const HyperbolicHeatKernel h(3);
  for (double t : {5.0, 20.0}) EXPECT_LT(std::abs(sol->operator()(t, 0.0) / h(t, 0.0) - 1.0), 2e-3) << t;
}

TEST(RadialHeat, RejectsBadInput) {
  RadialHeatOptions small;
  small.r_max = 2.0;
  EXPECT_THROW(radial_heat_solve(RotSymProfile::hyperbolic(3), 1.0, small), MassLeakError);
  EXPECT_THROW(radial_heat_solve(RotSymProfile::from_expression("q", 3, "r + r^2"), 1.0), DomainError);
  EXPECT_THROW(radial_heat_solve(RotSymProfile::from_expression("g", 3, "r*exp(r^2)"), 1.0), DomainError);
  const RadialHeatSolution s(RotSymProfile::euclidean(3), 0.5);
  EXPECT_THROW(s(1.0, 0.0), DomainError);
  EXPECT_THROW(s(1e-4, 0.0), DomainError);
  EXPECT_EQ(s(0.5, s.r_max() + 1.0), 0.0);
}

TEST(RotSymProvider, HypothesisHoldsAtPole) {
  // the audit reads p_{2t} at t = 1
  const RotSymProvider p(cubic(), 2.5);
  const auto rep = check_hypothesis_iii(p, origin(3), 1.5, log_grid(1e-2, 1.0, 21));
  EXPECT_TRUE(rep.pass);
  EXPECT_TRUE(std::isfinite(rep.fitted_Cx));
  EXPECT_THROW(p.on_diagonal(0.1, radial_point(3, 0.5)), DomainError);
}

TEST(RotSymProvider, PoissonKernelMatchesHyperbolic) {
  const RotSymProvider solved(long_h3_solution());
  const HyperbolicProvider exact(3);
  for (double g : {0.25, 0.75}) {
    for (double y : {0.5, 1.0}) {
      for (double rho : {0.0, 0.5, 1.5}) {
        EXPECT_LT(std::abs(poisson_kernel(solved, g, y, rho) / poisson_kernel(exact, g, y, rho) - 1.0), 1e-2)
            << g << " " << y << " " << rho;
      }
    }
  }
}

TEST(RotSymProvider, LaplacianUsesProfileDrift) {
  const RotSymProvider p(RotSymProfile::hyperbolic(3), 0.5);
  const HyperbolicProvider h(3);
  const auto f = RadialFunction::gaussian();
  for (double r : {0.4, 1.2}) EXPECT_NEAR(p.drift(r), h.drift(r), 1e-12);
  EXPECT_NEAR(p.laplacian(f, 0.7), h.laplacian(f, 0.7), 1e-8);
  EXPECT_NEAR(p.sphere_area(1.0), h.sphere_area(1.0), 1e-12);
}

TEST(GeometricallyFinite, Rules) {
  auto verdict = [](GroupDescriptor g) { return is_admissible_geomfinite(g); };
  EXPECT_EQ(verdict({3, 0.5, {1}, false}).rule, GeomFiniteRule::I);
  EXPECT_EQ(verdict({3, 1.5, {2}, false}).rule, GeomFiniteRule::II);
  EXPECT_EQ(verdict({3, 1.2, {}, false}).rule, GeomFiniteRule::ConvexCocompact);
  // a maximal cusp rules out (i); delta below (n-1)/2 rules out (ii)
  const auto maximal = verdict({3, 0.5, {1}, true});
  EXPECT_FALSE(maximal.admissible);
  EXPECT_EQ(maximal.rule, GeomFiniteRule::None);
  // (ii) at n = 4, delta = 2: beta = 1, ranks below 8 pass
  EXPECT_EQ(verdict({4, 2.0, {3}, true}).rule, GeomFiniteRule::II);
  EXPECT_FALSE(verdict({3, 1.9, {2}, false}).admissible);
  EXPECT_EQ(to_string(GeomFiniteRule::ConvexCocompact), "convex_cocompact");
  EXPECT_THROW(verdict({3, 2.5, {1}, false}), DomainError);
  EXPECT_THROW(verdict({3, 1.0, {3}, false}), DomainError);
}
