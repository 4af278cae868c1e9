#pragma once

// Fractional powers and Poisson extensions from a heat kernel by subordination:
//   L^gamma f = 1/Gamma(-gamma) int_0^inf (e^{-tL} f - f) t^{-1-gamma} dt
//   u(x,y)    = y^{2 gamma}/(4^gamma Gamma(gamma)) int_0^inf e^{-tL} f(x) e^{-y^2/4t} t^{-1-gamma} dt

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/hyperbolic.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/radial_function.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

namespace detail {

/// Panels of width sqrt(t)/2 where the heat kernel lives, then width <= 0.5 out to r_end.
inline std::vector<double> heat_breaks(double t, double r_end) {
  const double s = std::sqrt(t);
  std::vector<double> br{0.0};
  for (int k = 1; k <= 28 && 0.5 * k * s < r_end; ++k) br.push_back(0.5 * k * s);
  const double start = br.back();
  if (start < r_end) {
    const auto tail = uniform_breaks(start, r_end, 0.5);
    br.insert(br.end(), tail.begin() + 1, tail.end());
  }
  return br;
}

}  // namespace detail

/// Heat kernel of a model space with a pole. Points are given by their distance to the pole
/// for the radial quantities; `kernel` accepts full points where the model supports it.
class HeatKernelProvider {
 public:
  virtual ~HeatKernelProvider() = default;

  virtual int dim() const = 0;
  /// Bottom of the L^2 spectrum (0 if unknown).
  virtual double lambda1() const = 0;
  /// p_t(x, x').
  virtual double kernel(double t, const Point& x, const Point& x2) const = 0;
  /// p_t(x, x).
  virtual double on_diagonal(double t, const Point& x) const = 0;
  /// p_t(pole, point at distance r).
  virtual double radial_kernel(double t, double r) const = 0;
  /// omega_{n-1} phi(r)^{n-1}: volume density in polar coordinates about the pole.
  virtual double sphere_area(double r) const = 0;
  /// (n-1) phi'(r)/phi(r).
  virtual double drift(double r) const = 0;
  /// Mean of radial f over the sphere of radius r about the point at distance rho from the pole.
  virtual double spherical_mean(const RadialFunction& f, double rho, double r) const = 0;
  /// spherical_mean(f, rho, r) - f(rho); override when it can be formed without cancellation.
  virtual double spherical_increment(const RadialFunction& f, double rho, double r) const {
    return spherical_mean(f, rho, r) - f(rho);
  }
  /// Radius past which p_t(pole, .) is negligible.
  virtual double radial_extent(double t) const = 0;
  /// Times for which the kernel is available.
  virtual double min_time() const { return 0.0; }
  virtual double max_time() const { return std::numeric_limits<double>::infinity(); }
  virtual std::string name() const = 0;

  /// int p_t(pole, .) dV.
  double mass(double t) const {
    const double r_end = radial_extent(t);
    const double width = std::max(0.05, r_end / 40.0);
    return integrate_panels([&](double r) { return radial_kernel(t, r) * sphere_area(r); },
                            uniform_breaks(0.0, r_end, width), 1e-300, 1e-11, 12)
        .value;
  }

  /// e^{t Delta} f (rho) - f(rho), assuming unit mass.
  double heat_increment(double t, const RadialFunction& f, double rho) const {
    const double r_end = radial_extent(t);
    auto integrand = [&](double r) {
      if (r == 0.0) return 0.0;
      const double k = radial_kernel(t, r);
      if (k == 0.0) return 0.0;
      return k * sphere_area(r) * spherical_increment(f, rho, r);
    };
    // The increment carries round-off of order 1e-16 f / r^2 relative, so deep bisection
    // only accumulates noise; the panels already resolve the kernel.
    return integrate_panels(integrand, detail::heat_breaks(t, r_end), 1e-13 * f.scale(), 1e-9, 4).value;
  }

  double heat_apply(double t, const RadialFunction& f, double rho) const { return f(rho) + heat_increment(t, f, rho); }

  double laplacian(const RadialFunction& f, double rho) const {
    return radial_laplacian(f.f, dim(), [this](double r) { return drift(r); }, rho);
  }
};

/// Explicit kernel of H^n. Homogeneous, so any point may serve as pole.
class HyperbolicProvider : public HeatKernelProvider {
 public:
  explicit HyperbolicProvider(int n) : heat_(HyperbolicDim::make(n)) {}

  int dim() const override { return heat_.dim().n; }
  double lambda1() const override { return heat_.dim().lambda1; }
  double kernel(double t, const Point& x, const Point& x2) const override {
    return heat_(t, hyperbolic_distance(x, x2));
  }
  double on_diagonal(double t, const Point& x) const override {
    validate_point(x);
    return heat_.on_diagonal(t);
  }
  double radial_kernel(double t, double r) const override { return heat_(t, r); }
  double sphere_area(double r) const override {
    return heat_.dim().sphere_area() * std::pow(std::sinh(r), dim() - 1);
  }
  double drift(double r) const override { return (dim() - 1) / std::tanh(r); }
  double spherical_mean(const RadialFunction& f, double rho, double r) const override {
    return hyperbolic_spherical_mean(heat_.dim(), f, rho, r);
  }
  double spherical_increment(const RadialFunction& f, double rho, double r) const override {
    return hyperbolic_spherical_increment(heat_.dim(), f, rho, r);
  }
  double radial_extent(double t) const override { return 2.0 * heat_.dim().half_nm1 * t + 13.0 * std::sqrt(t) + 1.0; }
  std::string name() const override { return "hyperbolic-" + std::to_string(dim()); }

  const HyperbolicHeatKernel& heat() const { return heat_; }

 private:
  HyperbolicHeatKernel heat_;
};

/// Wraps a provider and multiplies its kernel by t^{-10} for t < 1; used to check that the
/// hypothesis audit detects a kernel blowing up too fast at small times.
class ViolatingProvider : public HeatKernelProvider {
 public:
  explicit ViolatingProvider(std::shared_ptr<const HeatKernelProvider> base) : base_(std::move(base)) {}
  int dim() const override { return base_->dim(); }
  double lambda1() const override { return base_->lambda1(); }
  double kernel(double t, const Point& x, const Point& x2) const override { return f_(t) * base_->kernel(t, x, x2); }
  double on_diagonal(double t, const Point& x) const override { return f_(t) * base_->on_diagonal(t, x); }
  double radial_kernel(double t, double r) const override { return f_(t) * base_->radial_kernel(t, r); }
  double sphere_area(double r) const override { return base_->sphere_area(r); }
  double drift(double r) const override { return base_->drift(r); }
  double spherical_mean(const RadialFunction& f, double rho, double r) const override {
    return base_->spherical_mean(f, rho, r);
  }
  double spherical_increment(const RadialFunction& f, double rho, double r) const override {
    return base_->spherical_increment(f, rho, r);
  }
  double radial_extent(double t) const override { return base_->radial_extent(t); }
  std::string name() const override { return "violating(" + base_->name() + ")"; }

 private:
  static double f_(double t) { return t < 1.0 ? std::pow(t, -10.0) : 1.0; }
  std::shared_ptr<const HeatKernelProvider> base_;
};

// ---------------------------------------------------------------------------
// Subordination

struct SubordinationOptions {
  /// Below this time the increment is replaced by t * Delta f.
  double t_taylor = 1e-5;
  /// Smallest time node; e^{-y^2/4t} removes everything below it for y >= 2^-12.
  double t_min = 1e-12;
  /// Upper end of the time integral; defaults to 40/lambda1 (or 1e4 if lambda1 = 0).
  double t_max = 0.0;
  int panels_per_decade = 4;
  int gauss_order = 20;
};

/// Tabulates D(t) = e^{t Delta} f(x) - f(x) on a log-time quadrature once and reuses it
/// for every gamma and y.
class HeatSubordinator {
 public:
  HeatSubordinator(std::shared_ptr<const HeatKernelProvider> provider, RadialFunction f, double rho,
                   SubordinationOptions opt = {})
      : provider_(std::move(provider)), f_(std::move(f)), rho_(rho), opt_(opt) {
    f0_ = f_(rho_);
    drop_ = f0_ - f_.value_at_infinity();
    lap_ = provider_->laplacian(f_, rho_);
    if (opt_.t_max <= 0.0) opt_.t_max = provider_->lambda1() > 0.0 ? 40.0 / provider_->lambda1() : 1e4;
    opt_.t_max = std::min(opt_.t_max, provider_->max_time());
    const double t_switch = std::max(opt_.t_taylor, provider_->min_time());
    // log-time panels
    const double l0 = std::log10(opt_.t_min);
    const double l1 = std::log10(opt_.t_max);
    const int panels = std::max(1, static_cast<int>(std::ceil((l1 - l0) * opt_.panels_per_decade)));
    std::vector<double> breaks;
    for (int i = 0; i <= panels; ++i) breaks.push_back(l0 + (l1 - l0) * i / panels);
    const auto rule = composite_gauss(breaks, opt_.gauss_order);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double t = std::pow(10.0, rule.x[i]);
      t_.push_back(t);
      // dt = t ln(10) d(log10 t)
      w_.push_back(rule.w[i] * t * std::numbers::ln10);
      if (f_.decay.kind == DecayKind::Constant) {
        d_.push_back(0.0);
      } else if (t < t_switch) {
        d_.push_back(t * lap_);
      } else {
        d_.push_back(provider_->heat_increment(t, f_, rho_));
      }
    }
  }

  double rho() const { return rho_; }
  double boundary_value() const { return f0_; }
  const std::vector<double>& times() const { return t_; }
  const std::vector<double>& increments() const { return d_; }

  /// 1/Gamma(-gamma) int_0^inf D(t) t^{-1-gamma} dt.
  double semigroup_frac(double gamma) const {
    check_gamma_(gamma);
    // [0, t_min]: D ~ t Delta f
    double acc = lap_ * std::pow(opt_.t_min, 1.0 - gamma) / (1.0 - gamma);
    for (std::size_t i = 0; i < t_.size(); ++i) acc += w_[i] * d_[i] * std::pow(t_[i], -1.0 - gamma);
    // [t_max, inf): e^{t Delta} f has settled to f(inf)
    acc += -drop_ * std::pow(opt_.t_max, -gamma) / gamma;
    return acc / gamma_fn(-gamma);
  }

  /// Poisson extension u(x, y).
  double poisson(double gamma, double y) const {
    check_gamma_(gamma);
    if (y == 0.0) return f0_;
    if (!(y > 0.0)) throw DomainError("poisson: y must be non-negative");
    const double c = 1.0 / (std::pow(4.0, gamma) * gamma_fn(gamma));
    double acc = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      acc += w_[i] * d_[i] * std::exp(-y * y / (4.0 * t_[i])) * std::pow(t_[i], -1.0 - gamma);
    }
    // tail past t_max where e^{t Delta} f ~ f(inf), against the same weight
    const double s = y * y / (4.0 * opt_.t_max);
    const double tail = -drop_ * std::pow(4.0 / (y * y), gamma) * lower_incomplete_gamma(gamma, std::min(s, 30.0));
    return f0_ + c * std::pow(y, 2.0 * gamma) * (acc + tail);
  }

  /// y^a du/dy at (x, y), differentiating the subordination weight exactly:
  ///   y^a d/dy [y^{2g} e^{-y^2/4t}] = (2g - y^2/(2t)) e^{-y^2/4t} t^{...}.
  double weighted_flux(double gamma, double y) const {
    check_gamma_(gamma);
    if (!(y > 0.0)) throw DomainError("weighted_flux: y must be positive");
    const double c = 1.0 / (std::pow(4.0, gamma) * gamma_fn(gamma));
    double acc = 0.0;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      const double t = t_[i];
      acc += w_[i] * d_[i] * (2.0 * gamma - y * y / (2.0 * t)) * std::exp(-y * y / (4.0 * t)) *
             std::pow(t, -1.0 - gamma);
    }
    // The constant part -(f - f(inf)) over [t_max, inf) integrates to
    // -2 (f - f(inf)) t_max^{-gamma} e^{-y^2/4t_max}.
    acc += -2.0 * drop_ * std::pow(opt_.t_max, -gamma) * std::exp(-y * y / (4.0 * opt_.t_max));
    return c * acc;
  }

  /// -d_gamma lim_{y->0} y^a du/dy by Richardson extrapolation on y = 2^{-k}.
  RichardsonResult neumann_limit(double gamma, int k_min = 4, int k_max = 12, int levels = 3) const {
    std::vector<double> samples;
    for (int k = k_min; k <= k_max; ++k) samples.push_back(weighted_flux(gamma, std::exp2(-k)));
    auto exps = extension_flux_exponents(gamma, levels);
    auto r = richardson(samples, exps);
    const double dg = d_gamma(gamma);
    r.value *= -dg;
    r.error_estimate *= dg;
    return r;
  }

 private:
  static void check_gamma_(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("subordination requires gamma in (0,1)");
  }

  std::shared_ptr<const HeatKernelProvider> provider_;
  RadialFunction f_;
  double rho_;
  SubordinationOptions opt_;
  double f0_ = 0.0;
  double drop_ = 0.0;
  double lap_ = 0.0;
  std::vector<double> t_, w_, d_;
};

/// L^gamma f (x) by subordination of the provider's heat semigroup.
inline double semigroup_frac(std::shared_ptr<const HeatKernelProvider> provider, double gamma,
                             const RadialFunction& f, double rho) {
  return HeatSubordinator(std::move(provider), f, rho).semigroup_frac(gamma);
}

/// Poisson kernel y^{2g}/(4^g Gamma(g)) int_0^inf p_t(rho) e^{-y^2/4t} t^{-1-g} dt, computed
/// as 1/Gamma(1+g) int_0^inf p_{y^2/(4 u^{1/g})}(rho) e^{-u^{1/g}} du.
inline double poisson_kernel(const HeatKernelProvider& provider, double gamma, double y, double rho,
                             double rel_tol = 1e-10) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw DomainError("poisson_kernel: gamma must lie in (0,1)");
  if (!(y > 0.0)) throw DomainError("poisson_kernel: y must be positive");
  // t in [min_time, max_time] is u in [u_lo, u_hi]
  const double u_lo = std::pow(y * y / (4.0 * provider.max_time()), gamma);
  const double u_hi = std::min(std::pow(60.0, gamma), provider.min_time() > 0.0
                                                          ? std::pow(y * y / (4.0 * provider.min_time()), gamma)
                                                          : std::numeric_limits<double>::infinity());
  if (!(u_hi > u_lo)) return 0.0;
  auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double s = std::pow(u, 1.0 / gamma);
    const double t = std::clamp(y * y / (4.0 * s), provider.min_time(), provider.max_time());
    return provider.radial_kernel(t, rho) * std::exp(-s);
  };
  return integrate_panels(integrand, uniform_breaks(u_lo, u_hi, (u_hi - u_lo) / 24.0), 1e-300, rel_tol, 12).value /
         gamma_fn(1.0 + gamma);
}

inline double poisson_kernel(const HeatKernelProvider& provider, double gamma, double y, const Point& x,
                             const Point& x2) {
  return poisson_kernel(provider, gamma, y, hyperbolic_distance(x, x2));
}

/// int P_y(pole, .) dV. The density P_y |S_r| decays like r^{-1-gamma} on H^n, too slowly
/// to truncate; beyond r_end it is replaced by A r^{-1-gamma}(1 + B/r) through the samples
/// at r_end/2 and r_end, integrated in closed form. Pass tail_fit = false to truncate.
inline double poisson_kernel_mass(const HeatKernelProvider& provider, double gamma, double y, double r_end = 80.0,
                                  bool tail_fit = true) {
  auto integrand = [&](double r) { return poisson_kernel(provider, gamma, y, r) * provider.sphere_area(r); };
  std::vector<double> br = {0.0};
  for (double b = std::min(y, 0.25); b < r_end; b *= 1.6) br.push_back(b);
  br.push_back(r_end);
  double mass = integrate_panels(integrand, br, 1e-300, 1e-8, 10).value;
  if (tail_fit) {
    const double p = 1.0 + gamma;
    const double r1 = 0.5 * r_end, r2 = r_end;
    const double q1 = integrand(r1) * std::pow(r1, p), q2 = integrand(r2) * std::pow(r2, p);
    // q(r) = A + A B / r
    const double ab = (q1 - q2) / (1.0 / r1 - 1.0 / r2);
    const double a = q2 - ab / r2;
    mass += a * std::pow(r2, -gamma) / gamma + ab * std::pow(r2, -p) / p;
  }
  return mass;
}

// ---------------------------------------------------------------------------
// L2 growth audit of heat kernels

struct HypothesisReport {
  double epsilon = 1.5;
  double fitted_Cx = 0.0;
  std::vector<double> t_grid;
  /// (||p_t||_2 + ||dp_t/dt||_2) / ((1 + t^eps) t^{-eps}) on the grid.
  std::vector<double> ratios;
  /// log-log slope of the ratio over the smallest-time decade of the grid.
  double small_time_slope = 0.0;
  bool pass = false;
};

/// Audits ||p_t(x,.)||_2 + ||d_t p_t(x,.)||_2 <= C_x (1 + t^eps) t^{-eps}, using
/// ||p_t(x,.)||^2 = p_{2t}(x,x) and ||d_t p_t||^2 = d^2/dtau^2 p_tau(x,x) at tau = 2t.
/// Passes when C_x is finite and the ratio does not blow up faster than t^{-1/2} at the
/// small end of the grid (a bounded grid always yields a finite maximum).
inline HypothesisReport check_hypothesis_iii(const HeatKernelProvider& provider, const Point& x, double epsilon,
                                             const std::vector<double>& t_grid, double slope_floor = -0.5) {
  HypothesisReport rep;
  rep.epsilon = epsilon;
  rep.t_grid = t_grid;
  if (t_grid.empty()) return rep;
  for (double t : t_grid) {
    const double h = t / 100.0;
    const double g0 = provider.on_diagonal(2 * t, x);
    const double gp = provider.on_diagonal(2 * t + 2 * h, x);
    const double gm = provider.on_diagonal(2 * t - 2 * h, x);
    const double norm_p = std::sqrt(std::max(g0, 0.0));
    const double norm_dp = std::sqrt(std::max((gp - 2 * g0 + gm) / (4 * h * h), 0.0));
    const double bound = (1.0 + std::pow(t, epsilon)) * std::pow(t, -epsilon);
    rep.ratios.push_back((norm_p + norm_dp) / bound);
  }
  rep.fitted_Cx = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  // slope over the first decade of the grid
  std::size_t j = 0;
  while (j + 1 < t_grid.size() && t_grid[j + 1] <= 10.0 * t_grid[0]) ++j;
  if (j > 0) {
    rep.small_time_slope = std::log(rep.ratios[j] / rep.ratios[0]) / std::log(t_grid[j] / t_grid[0]);
  }
  rep.pass = std::isfinite(rep.fitted_Cx) && rep.small_time_slope >= slope_floor;
  return rep;
}

/// ||P_y f||_p <= ||f||_p on every y of the grid, for each p in `exponents` (entries in
/// [1, inf]), with the extension evaluated by subordination on a radial grid. The subordinators
/// are shared between exponents.
inline std::vector<bool> lp_contraction_probe(std::shared_ptr<const HeatKernelProvider> provider, double gamma,
                                              const RadialFunction& f, const std::vector<double>& exponents,
                                              const std::vector<double>& y_grid, double r_end = 8.0,
                                              int nodes = 48) {
  for (double p : exponents) {
    if (!(p >= 1.0)) throw DomainError("lp_contraction_probe: p must be >= 1");
  }
  const int per_panel = std::max(1, nodes / 6);
  const auto rule = composite_gauss(uniform_breaks(0.0, r_end, r_end / 6.0), per_panel);
  std::vector<HeatSubordinator> subs;
  subs.reserve(rule.x.size());
  for (double r : rule.x) subs.emplace_back(provider, f, r);
  auto norm = [&](double p, const std::vector<double>& v) {
    if (std::isinf(p)) {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::abs(x));
      return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      s += rule.w[i] * provider->sphere_area(rule.x[i]) * std::pow(std::abs(v[i]), p);
    }
    return std::pow(s, 1.0 / p);
  };
  std::vector<double> base_values(rule.x.size());
  for (std::size_t i = 0; i < rule.x.size(); ++i) base_values[i] = f(rule.x[i]);
  std::vector<bool> ok(exponents.size(), true);
  for (double y : y_grid) {
    std::vector<double> v(rule.x.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = subs[i].poisson(gamma, y);
    for (std::size_t k = 0; k < exponents.size(); ++k) {
      const double base = norm(exponents[k], base_values);
      if (norm(exponents[k], v) > base * (1.0 + 1e-6) + 1e-12) ok[k] = false;
    }
  }
  return ok;
}

inline bool lp_contraction_probe(std::shared_ptr<const HeatKernelProvider> provider, double gamma,
                                 const RadialFunction& f, double p, const std::vector<double>& y_grid,
                                 double r_end = 8.0, int nodes = 48) {
  return lp_contraction_probe(std::move(provider), gamma, f, std::vector<double>{p}, y_grid, r_end, nodes)[0];
}

}  // namespace fraclap
