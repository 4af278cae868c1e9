#pragma once

// The acceptance suite: each criterion runs its comparisons and reports every measured value
// against its tolerance. Shared by the command-line `verify` command and the test binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "fraclap/calibration.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/frackernel.hpp"
#include "fraclap/heat2poisson.hpp"
#include "fraclap/hyperbolic.hpp"
#include "fraclap/manifolds.hpp"
#include "fraclap/operators.hpp"
#include "fraclap/radial_function.hpp"
#include "fraclap/spectral.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

/// One comparison: pass iff |measured - expected| <= tolerance (or the stated predicate).
struct Check {
  std::string label;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int number = 0;
  std::string id;
  std::string title;
  std::vector<Check> checks;
  bool pass = false;
  double seconds = 0.0;
  /// Set when the criterion threw instead of completing.
  std::string error;
};

struct VerifyOptions {
  /// Multiplies every tolerance; < 1 is stricter.
  double tolerance_scale = 1.0;
};

namespace detail {

class CheckList {
 public:
  explicit CheckList(double scale) : scale_(scale) {}

  /// |measured - expected| <= tol * |expected|.
  void relative(const std::string& label, double measured, double expected, double tol) {
    const double t = tol * scale_;
    add_({label, measured, expected, t, std::abs(measured - expected) <= t * std::abs(expected)});
  }
  void absolute(const std::string& label, double measured, double expected, double tol) {
    const double t = tol * scale_;
    add_({label, measured, expected, t, std::abs(measured - expected) <= t});
  }
  /// Pass/fail predicate recorded with its measured value.
  void predicate(const std::string& label, double measured, bool ok) {
    add_({label, measured, std::numeric_limits<double>::quiet_NaN(), 0.0, ok});
  }
  std::vector<Check> take() { return std::move(checks_); }

 private:
  void add_(Check c) { checks_.push_back(std::move(c)); }
  double scale_;
  std::vector<Check> checks_;
};

inline std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// 1
inline void flux_limit(CheckList& c) {
  for (double g : {0.25, 0.5, 0.75}) {
    const auto o = FracOrder::make(g);
    c.relative("gamma=" + fmt(g), extension_profile_flux_limit(o).value, -1.0 / o.d_gamma, 1e-6);
  }
}

// 2
inline void energy(CheckList& c) {
  for (double g : {0.25, 0.5, 0.75}) c.relative("gamma=" + fmt(g), energy_constant(g), 1.0 / d_gamma(g), 1e-4);
  c.absolute("gamma=0.5 exact", energy_constant(0.5), 1.0, 1e-4);
}

// 3
inline void heat_mass(CheckList& c) {
  const HyperbolicHeatKernel h3(3), h2(2);
  for (double t : {0.1, 1.0, 10.0}) c.absolute("n=3 t=" + fmt(t), h3.mass(t), 1.0, 1e-6);
  for (double t : {0.5, 1.0}) c.absolute("n=2 t=" + fmt(t), h2.mass(t), 1.0, 1e-4);
}

// 4
inline void semigroup(CheckList& c) {
  const auto dim = HyperbolicDim::make(3);
  const HyperbolicHeatKernel h(dim);
  RadialFunction half;
  half.name = "p_0.5";
  half.f = [h](double r) { return h(0.5, r); };
  half.decay = {DecayKind::Gaussian, 0.5, 0.0};
  half.envelope_scale = h(0.5, 0.0);
  for (double rho : {0.0, 1.0, 2.0}) {
    // int p_0.5(x, z) p_0.5(z, y) dz in polar coordinates about x; the angular
    // integral is the sphere average of p_0.5(d(., y)).
    auto integrand = [&](double r) {
      if (r == 0.0) return 0.0;
      return h(0.5, r) * dim.sphere_area() * std::pow(std::sinh(r), 2) * hyperbolic_spherical_mean(dim, half, rho, r);
    };
    const double conv = integrate_panels(integrand, uniform_breaks(0.0, 14.0, 0.25), 1e-300, 1e-10).value;
    c.relative("rho=" + fmt(rho), conv, h(1.0, rho), 1e-3);
  }
}

// 5
inline void envelope(CheckList& c) {
  const auto dim = HyperbolicDim::make(3);
  const HyperbolicHeatKernel h(dim);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double t : log_grid(1e-2, 10.0, 25)) {
    for (int i = 0; i <= 25; ++i) {
      const double rho = 0.2 * i;
      const double q = h(t, rho) / dm_envelope(dim, t, rho);
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  }
  c.predicate("c1 > 0", lo, lo > 0.0);
  c.predicate("c2/c1 < 50", hi / lo, hi / lo < 50.0);
}

// 6
inline void calibration(CheckList& c) {
  const auto dim = HyperbolicDim::make(3);
  const auto cal = calibrate_alpha(dim, 0.5, false);
  c.relative("alpha least-squares gamma=0.5", calibrate_alpha_least_squares(0.5), cal.analytic, 1e-4);

  const auto neg = FracKernel::analytic(dim, -0.75);
  for (double rho : {0.5, 1.0, 2.0}) {
    c.relative("gamma=-0.75 rho=" + fmt(rho), neg(rho), frac_kernel_direct_h3(-0.75, rho), 1e-4);
  }
  for (double g : {0.25, 0.5, 0.75}) {
    const auto k = FracKernel::analytic(dim, g);
    const double slope = std::log(k(0.005) / k(0.01)) / std::log(0.5);
    c.absolute("near-0 slope gamma=" + fmt(g), slope, -(3.0 + 2.0 * g), 0.1);
    // log K = C - beta r - p log r through three far-field samples; beta is the rate.
    const double r1 = 6.0, r2 = 9.0, r3 = 12.0;
    const double l1 = std::log(k(r1)), l2 = std::log(k(r2)), l3 = std::log(k(r3));
    const double s12 = (l2 - l1) / (r2 - r1), s23 = (l3 - l2) / (r3 - r2);
    const double q12 = (std::log(r2) - std::log(r1)) / (r2 - r1);
    const double q23 = (std::log(r3) - std::log(r2)) / (r3 - r2);
    const double p = -(s23 - s12) / (q23 - q12);
    const double beta = -(s12 + p * q12);
    c.relative("far-field rate gamma=" + fmt(g), beta, 2.0, 2e-2);
  }
}

// 7
inline void triple_oracle(CheckList& c) {
  const auto dim = HyperbolicDim::make(3);
  auto provider = std::make_shared<HyperbolicProvider>(3);
  for (double g : {0.25, 0.5, 0.75}) {
    const auto kernel = FracKernel::analytic(dim, g);
    for (const auto& f : {RadialFunction::gaussian(), RadialFunction::bump(2.5)}) {
      const auto u = make_extension(provider, g, f);
      for (double rho : {0.5, 1.0, 2.0}) {
        const double s = spectral_frac(g, f, rho);
        const double p = pv_frac(kernel, f, rho);
        const double n = neumann_limit(u, rho).value;
        const double worst = std::max({rel_diff(s, p), rel_diff(s, n), rel_diff(p, n)});
        const std::string label = f.name + " gamma=" + fmt(g) + " rho=" + fmt(rho);
        c.absolute(label + " max pairwise rel", worst, 0.0, 1e-2);
      }
    }
  }
}

// 8
inline void poisson_routes(CheckList& c) {
  const HyperbolicProvider h3(3);
  const double g = 0.5;
  for (double rho : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    for (double y : {0.25, 0.5, 1.0, 1.5, 2.0}) {
      c.relative("P rho=" + fmt(rho) + " y=" + fmt(y), poisson_kernel(h3, g, y, rho),
                 poisson_kernel_fourier_h3(g, y, rho), 1e-3);
    }
  }
  const auto f = RadialFunction::gaussian();
  c.relative("u(1, 0.5) heat vs Fourier", poisson_extend(HyperbolicDim::make(3), g, f, 1.0, 0.5),
             poisson_extend_fourier(g, f, 1.0, 0.5), 1e-3);
  for (double y : {0.5, 1.0}) c.absolute("mass y=" + fmt(y), poisson_kernel_mass(h3, g, y), 1.0, 1e-3);
}

// 9
inline void trace_sobolev(CheckList& c) {
  const auto f = RadialFunction::gaussian();
  const auto eq = trace_energy_check(0.5, f);
  c.absolute("equality ratio", eq.ratio, 1.0, 2e-2);
  ExtensionPerturbation bump;
  bump.amplitude = 0.1;
  const auto pert = trace_energy_check(0.5, f, bump);
  c.predicate("perturbed ratio > 1", pert.ratio, pert.ratio > 1.0);
}

// 10
inline void hypothesis(CheckList& c) {
  auto h3 = std::make_shared<HyperbolicProvider>(3);
  const auto grid = log_grid(1e-3, 10.0, 41);
  const auto ok = check_hypothesis_iii(*h3, origin(3), 1.5, grid);
  c.predicate("H^3 passes (C_x)", ok.fitted_Cx, ok.pass && std::isfinite(ok.fitted_Cx));
  const ViolatingProvider bad(h3);
  const auto rep = check_hypothesis_iii(bad, origin(3), 1.5, grid);
  c.predicate("violating provider fails (slope)", rep.small_time_slope, !rep.pass);
}

// 11
inline void rotsym_solver(CheckList& c) {
  const HyperbolicHeatKernel h(3);
  const RadialHeatSolution hyp(RotSymProfile::hyperbolic(3), 1.0);
  const RadialHeatSolution euc(RotSymProfile::euclidean(3), 1.0);
  double worst_h = 0.0, worst_e = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double r = 0.05 * i;
    worst_h = std::max(worst_h, rel_diff(hyp(1.0, r), h(1.0, r)));
    const double gauss = std::pow(4.0 * std::numbers::pi, -1.5) * std::exp(-r * r / 4.0);
    worst_e = std::max(worst_e, rel_diff(euc(1.0, r), gauss));
  }
  c.absolute("sinh: max rel error on [0,3]", worst_h, 0.0, 1e-3);
  c.absolute("r: max rel error on [0,3]", worst_e, 0.0, 1e-3);
  c.absolute("sinh: mass", hyp.mass_at_end(), 1.0, 1e-3);
  c.absolute("r: mass", euc.mass_at_end(), 1.0, 1e-3);
}

// 12
inline void predicates(CheckList& c) {
  const auto sinh3 = RotSymProfile::hyperbolic(3);
  const auto cubic = RotSymProfile::from_expression("r+r^3", 3, "r + r^3");
  const auto gauss = RotSymProfile::from_expression("r*exp(r^2)", 3, "r*exp(r^2)");
  const auto flat = RotSymProfile::euclidean(3);

  const auto ks = curvature(sinh3, 1.0);
  c.absolute("sinh K_radial(1)", ks.sectional_radial, -1.0, 1e-12);
  c.absolute("sinh K_tangential(1)", ks.sectional_tangential, -1.0, 1e-12);
  const auto kc = curvature(cubic, 1.0);
  c.absolute("r+r^3 K_radial(1)", kc.sectional_radial, -3.0, 1e-12);
  c.absolute("r+r^3 K_tangential(1)", kc.sectional_tangential, -3.75, 1e-12);
  const auto kf = curvature(flat, 2.0);
  c.absolute("r K_radial(2)", kf.sectional_radial, 0.0, 1e-15);
  c.absolute("r K_tangential(2)", kf.sectional_tangential, 0.0, 1e-15);

  const auto vs = is_admissible_rotsym(sinh3);
  c.predicate("sinh admissible", vs.sup_f1, vs.admissible);
  c.absolute("sinh sup f1", vs.sup_f1, 1.0, 1e-9);
  const auto vc = is_admissible_rotsym(cubic);
  c.predicate("r+r^3 admissible", vc.sup_f1, vc.admissible);
  const auto vg = is_admissible_rotsym(gauss);
  c.predicate("r*exp(r^2) rejected", vg.sup_f1, !vg.admissible);

  const auto cj = conjugation_potential(sinh3, 1.0);
  c.absolute("sinh V(1)", cj.V, 1.0, 1e-12);
  c.absolute("r ball volume R=1", ball_volume(flat, 1.0), 4.0 * std::numbers::pi / 3.0, 1e-10);

  auto rule = [&](const std::string& label, GroupDescriptor g, bool admissible, GeomFiniteRule expected) {
    const auto v = is_admissible_geomfinite(g);
    c.predicate(label + " -> " + to_string(expected), static_cast<double>(v.admissible),
                v.admissible == admissible && v.rule == expected);
  };
  rule("n=3 delta=0.5 ranks=[1]", {3, 0.5, {1}, false}, true, GeomFiniteRule::I);
  rule("n=3 delta=1.5 ranks=[2]", {3, 1.5, {2}, false}, true, GeomFiniteRule::II);
  rule("n=3 delta=0.5 ranks=[]", {3, 0.5, {}, false}, true, GeomFiniteRule::ConvexCocompact);
  rule("n=3 delta=0.5 ranks=[2]", {3, 0.5, {2}, false}, false, GeomFiniteRule::None);
  rule("n=3 delta=1.9 ranks=[2]", {3, 1.9, {2}, false}, false, GeomFiniteRule::None);
}

// 13
inline void positivity(CheckList& c) {
  const auto dim = HyperbolicDim::make(3);
  for (double g : {0.25, 0.5, 0.75}) {
    const auto k = FracKernel::analytic(dim, g);
    double lo = std::numeric_limits<double>::infinity();
    for (double rho : log_grid(0.05, 10.0, 200)) lo = std::min(lo, k(rho));
    c.predicate("min K on [0.05,10] gamma=" + fmt(g) + " > 0", lo, lo > 0.0);
  }
  RadialFunction mixed = RadialFunction::gaussian(1.0) + (-0.8) * RadialFunction::gaussian(0.3);
  mixed.name = "gaussian-difference";
  const std::vector<RadialFunction> tests = {RadialFunction::gaussian(), RadialFunction::gaussian(4.0),
                                             RadialFunction::bump(2.5), RadialFunction::windowed_eigenfunction(2.0, 3.0),
                                             mixed};
  // int f (-Delta)^g f dV by the spectral sum, and for the first, third and last functions
  // also as f against the singular integral on a Gauss grid.
  const auto rule = composite_gauss(uniform_breaks(0.0, 6.0, 1.0), 6);
  for (double g : {0.25, 0.5, 0.75}) {
    const auto op = H3SpectralOperator::fractional_power(g);
    const auto k = FracKernel::analytic(dim, g);
    for (std::size_t j = 0; j < tests.size(); ++j) {
      const auto& f = tests[j];
      const std::string label = f.name + " gamma=" + fmt(g);
      const double qs = op.quadratic_form(f);
      c.predicate(label + " spectral form >= -1e-8", qs, qs >= -1e-8);
      if (j == 1 || j == 3) continue;
      double qp = 0.0;
      for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const double r = rule.x[i];
        const double fr = f(r);
        if (fr == 0.0) continue;
        qp += rule.w[i] * 4.0 * std::numbers::pi * std::pow(std::sinh(r), 2) * fr * pv_frac(k, f, r);
      }
      c.predicate(label + " singular-integral form >= -1e-8", qp, qp >= -1e-8);
    }
  }
}

}  // namespace detail

/// One acceptance criterion and the function that runs its checks.
struct Criterion {
  int number = 0;
  std::string id;
  std::string title;
  std::function<void(detail::CheckList&)> run;
};

inline const std::vector<Criterion>& acceptance_criteria() {
  static const std::vector<Criterion> list = {
      {1, "flux-limit", "extension profile flux limit equals -1/d_gamma", detail::flux_limit},
      {2, "energy-constant", "energy constant equals 1/d_gamma", detail::energy},
      {3, "heat-mass", "heat kernel mass on H^3 and H^2", detail::heat_mass},
      {4, "semigroup", "p_1 equals p_0.5 * p_0.5 on H^3", detail::semigroup},
      {5, "dm-envelope", "heat kernel within a bounded band of the two-sided envelope", detail::envelope},
      {6, "kernel-calibration", "alpha routes, continuation oracle and kernel asymptotics", detail::calibration},
      {7, "triple-oracle", "spectral, singular-integral and Neumann realizations agree", detail::triple_oracle},
      {8, "poisson-routes", "Poisson kernel by heat subordination and by Fourier transform", detail::poisson_routes},
      {9, "trace-sobolev", "extension energy equality and strict inequality", detail::trace_sobolev},
      {10, "hypothesis-iii", "L2 growth audit of heat kernel providers", detail::hypothesis},
      {11, "rotsym-solver", "numeric radial heat kernel against closed forms", detail::rotsym_solver},
      {12, "predicate-tables", "curvature, admissibility and quotient rules", detail::predicates},
      {13, "positivity", "kernel positivity and non-negative quadratic forms", detail::positivity},
  };
  return list;
}

/// Looks a criterion up by number ("7") or id ("triple-oracle").
inline const Criterion* find_criterion(const std::string& key) {
  for (const auto& c : acceptance_criteria()) {
    if (key == c.id || key == std::to_string(c.number)) return &c;
  }
  return nullptr;
}

inline CriterionResult run_criterion(const Criterion& crit, const VerifyOptions& opt = {}) {
  CriterionResult r;
  r.number = crit.number;
  r.id = crit.id;
  r.title = crit.title;
  detail::CheckList checks(opt.tolerance_scale);
  const auto start = std::chrono::steady_clock::now();
  try {
    crit.run(checks);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.checks = checks.take();
  r.pass = r.error.empty() && !r.checks.empty() &&
           std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
  return r;
}

/// Runs the criteria named in `only` (all of them when empty). Unknown names throw DomainError.
inline std::vector<CriterionResult> run_verification(const std::vector<std::string>& only = {},
                                                     const VerifyOptions& opt = {}) {
  std::vector<const Criterion*> chosen;
  if (only.empty()) {
    for (const auto& c : acceptance_criteria()) chosen.push_back(&c);
  } else {
    for (const auto& key : only) {
      const Criterion* c = find_criterion(key);
      if (!c) throw DomainError("verify: unknown criterion '" + key + "'");
      chosen.push_back(c);
    }
  }
  std::vector<CriterionResult> out;
  for (const Criterion* c : chosen) out.push_back(run_criterion(*c, opt));
  return out;
}

}  // namespace fraclap
