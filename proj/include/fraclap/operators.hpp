#pragma once

// Realizations of (-Delta)^gamma on radial functions of H^n, the Poisson extension,
// the energy constant C_gamma and the trace energy identity.

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "fraclap/errors.hpp"
#include "fraclap/frackernel.hpp"
#include "fraclap/heat2poisson.hpp"
#include "fraclap/hyperbolic.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/radial_function.hpp"
#include "fraclap/spectral.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

// ---------------------------------------------------------------------------
// Singular integral

namespace detail {

/// int_X^inf of the kernel's radial density, from a two-term fit
/// A r^{-1-gamma} (1 + B/r) through the density at X and 2X.
inline double pv_density_tail(const FracKernel& k, double x) {
  const double g = k.gamma();
  const double d1 = k.radial_density(x) * std::pow(x, 1.0 + g);
  const double d2 = k.radial_density(2.0 * x) * std::pow(2.0 * x, 1.0 + g);
  // d(r) r^{1+g} = A + AB/r
  const double ab = (d1 - d2) * 2.0 * x;
  const double a = d1 - ab / x;
  return a * std::pow(x, -g) / g + ab * std::pow(x, -1.0 - g) / (1.0 + g);
}

}  // namespace detail

/// P.V. int (f(x) - f(x')) K_gamma(d(x, x')) dx' at distance rho from the base point, in
/// geodesic polar coordinates about the evaluation point. Spheres of radius r contribute
/// (f(rho) - M_r f(rho)) times the radial density of the kernel; on [0, eps] the
/// second-order Taylor expansion M_r f - f = Delta f r^2/(2n) is used.
inline double pv_frac(const FracKernel& kernel, const RadialFunction& f, double rho, const QuadratureSpec& spec = {}) {
  spec.validate();
  const double g = kernel.gamma();
  if (!(g > 0.0 && g < 1.0)) throw DomainError("pv_frac: gamma must lie in (0,1)");
  if (!(f.holder_alpha > 2.0 * g)) {
    std::ostringstream os;
    os << "pv_frac: Hoelder exponent " << f.holder_alpha << " does not exceed 2 gamma = " << 2.0 * g;
    throw SmoothnessError(os.str());
  }
  if (rho < 0.0) throw DomainError("pv_frac: rho must be non-negative");
  const auto& dim = kernel.dim();
  const double eps = spec.pv_inner_radius;
  const double f0 = f(rho);
  const double jump = f0 - f.value_at_infinity();

  // Inner ball.
  const double lap = hyperbolic_laplacian(f, dim, rho);
  // r^2 times the density behaves like r^{1-2 gamma}; r = eps w^p with p = 1/(2 - 2 gamma)
  // makes the integrand bounded and smooth in w.
  const double p = 1.0 / (2.0 - 2.0 * g);
  auto inner = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double r = eps * std::pow(w, p);
    return r * r * kernel.radial_density(r) * eps * p * std::pow(w, p - 1.0);
  };
  const auto inner_w = integrate(inner, 0.0, 1.0, 1e-300, 1e-10);
  double value = -lap / (2.0 * dim.n) * inner_w.value;

  // [eps, R]: beyond R the sphere lies where f equals its value at infinity.
  const double supp = f.decay.kind == DecayKind::Constant ? 0.0 : f.support_radius();
  const double r_far = std::max(rho + supp, 2.0 * eps);
  std::vector<double> br{eps};
  for (double b = 2.0 * eps; b < std::min(1.0, r_far); b *= 2.0) br.push_back(b);
  const double start = br.back();
  const auto rest = uniform_breaks(start, r_far, 0.5);
  br.insert(br.end(), rest.begin() + 1, rest.end());
  auto outer = [&](double r) {
    return -hyperbolic_spherical_increment(dim, f, rho, r) * kernel.radial_density(r);
  };
  const double scale = std::max(std::abs(f0), f.scale());
  value += integrate_panels(outer, br, spec.abs_tol * scale, spec.rel_tol, 12).value;

  if (jump != 0.0) {
    // Kernel mass outside r_far: panels out to where the density is still representable,
    // then the asymptotic remainder.
    const double x_end = std::max(r_far, 250.0 / (dim.n - 1));
    double mass = 0.0;
    if (x_end > r_far) {
      mass += integrate_panels([&](double r) { return kernel.radial_density(r); },
                               uniform_breaks(r_far, x_end, 2.0), 1e-300, 1e-11, 10)
                  .value;
    }
    mass += detail::pv_density_tail(kernel, x_end);
    value += jump * mass;
  }
  return value;
}

/// pv_frac with the closed-form calibration of the kernel.
inline double pv_frac(const HyperbolicDim& dim, double gamma, const RadialFunction& f, double rho,
                      const QuadratureSpec& spec = {}) {
  return pv_frac(FracKernel::analytic(dim, gamma), f, rho, spec);
}

inline double pv_frac(const HyperbolicDim& dim, double gamma, const RadialFunction& f, const Point& x,
                      const QuadratureSpec& spec = {}) {
  return pv_frac(dim, gamma, f, hyperbolic_distance(origin(dim.n), x), spec);
}

// ---------------------------------------------------------------------------
// Energy constant

/// C_gamma = int_0^inf (phi_gamma(s)^2 + phi_gamma'(s)^2) s^a ds.
inline double energy_constant(double gamma) {
  const auto g = FracOrder::make(gamma);
  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    const double w = std::pow(s, 0.5 * g.a);
    const double p = phi_gamma(g, s) * w;
    const double dp = phi_gamma_derivative(g, s) * w;
    return p * p + dp * dp;
  };
  const double head = integrate_singular(integrand, 0.0, 1.0, 1e-14, 1e-12).value;
  const double tail = integrate_panels(integrand, uniform_breaks(1.0, 60.0, 1.0), 1e-300, 1e-12).value;
  return head + tail;
}

// ---------------------------------------------------------------------------
// Poisson extension

/// An extension u(rho, y) of a radial boundary datum, with the weighted flux y^a du/dy when
/// the construction provides it in closed form.
struct ExtensionField {
  std::function<double(double, double)> evaluator;
  std::function<double(double, double)> flux;
  FracOrder gamma;
  RadialFunction boundary;

  double operator()(double rho, double y) const { return evaluator(rho, y); }
};

namespace detail {

/// Subordinators per rho, built on first use.
class SubordinatorCache {
 public:
  SubordinatorCache(std::shared_ptr<const HeatKernelProvider> provider, RadialFunction f)
      : provider_(std::move(provider)), f_(std::move(f)) {}

  const HeatSubordinator& at(double rho) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(rho);
    if (it == cache_.end()) it = cache_.emplace(rho, HeatSubordinator(provider_, f_, rho)).first;
    return it->second;
  }

 private:
  std::shared_ptr<const HeatKernelProvider> provider_;
  RadialFunction f_;
  std::mutex mu_;
  std::map<double, HeatSubordinator> cache_;
};

}  // namespace detail

/// Extension by subordination of the heat semigroup of `provider`.
inline ExtensionField make_extension(std::shared_ptr<const HeatKernelProvider> provider, double gamma,
                                     const RadialFunction& f) {
  const auto order = FracOrder::make(gamma);
  auto cache = std::make_shared<detail::SubordinatorCache>(std::move(provider), f);
  ExtensionField u;
  u.gamma = order;
  u.boundary = f;
  u.evaluator = [cache, gamma](double rho, double y) { return cache->at(rho).poisson(gamma, y); };
  u.flux = [cache, gamma](double rho, double y) { return cache->at(rho).weighted_flux(gamma, y); };
  return u;
}

inline ExtensionField make_extension(const HyperbolicDim& dim, double gamma, const RadialFunction& f) {
  return make_extension(std::make_shared<HyperbolicProvider>(dim.n), gamma, f);
}

/// u(rho, y) by the heat route.
inline double poisson_extend(const HyperbolicDim& dim, double gamma, const RadialFunction& f, double rho, double y) {
  if (!(y > 0.0)) throw DomainError("poisson_extend: y must be positive");
  HeatSubordinator sub(std::make_shared<HyperbolicProvider>(dim.n), f, rho);
  return sub.poisson(gamma, y);
}

/// u(rho, y) on H^3 by the multiplier phi_gamma(y sqrt(lambda^2 + 1)).
inline double poisson_extend_fourier(double gamma, const RadialFunction& f, double rho, double y,
                                     SpectralGrid grid = {}) {
  if (!(y > 0.0)) throw DomainError("poisson_extend_fourier: y must be positive");
  const auto g = FracOrder::make(gamma);
  if (f.decay.kind == DecayKind::Constant) return f(rho);
  H3SpectralOperator op([g, y](double l) { return phi_gamma(g, y * std::sqrt(l * l + 1.0)); }, grid);
  return op.apply(f, rho);
}

/// Poisson kernel of H^3 from its spherical transform,
///   P_y(rho) = 1/(2 pi^2 sinh rho) int_0^inf lambda sin(lambda rho) phi_gamma(y sqrt(lambda^2+1)) dlambda.
inline double poisson_kernel_fourier_h3(double gamma, double y, double rho) {
  if (!(y > 0.0)) throw DomainError("poisson_kernel_fourier_h3: y must be positive");
  const auto g = FracOrder::make(gamma);
  auto m = [&](double l) { return phi_gamma(g, y * std::sqrt(l * l + 1.0)); };
  const double pref = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  if (rho == 0.0) {
    // limit sin(l rho)/sinh(rho) -> l
    auto integrand = [&](double l) { return l * l * m(l); };
    const double l_end = 60.0 / y + 10.0;
    return pref * integrate_panels(integrand, uniform_breaks(0.0, l_end, std::max(0.1, y * 0.5)), 1e-300, 1e-10).value;
  }
  boost::math::quadrature::ooura_fourier_sin<double> integrator(1e-12);
  const auto [value, rel_err] = integrator.integrate([&](double l) { return l * m(l); }, rho);
  if (!(rel_err < 1e-7)) throw QuadratureError("poisson_kernel_fourier_h3: Fourier integral did not converge");
  return pref * value / std::sinh(rho);
}

// ---------------------------------------------------------------------------
// Neumann limit

/// -d_gamma lim_{y->0} y^a du/dy on y = 2^{-k}, k = 4..12, Richardson-extrapolated against
/// the boundary expansion exponents. Uses the closed-form flux when the field has one,
/// otherwise centred differences with step y/8.
inline RichardsonResult neumann_limit(const ExtensionField& u, double rho, int k_min = 4, int k_max = 12) {
  const double g = u.gamma.gamma;
  std::vector<double> samples;
  for (int k = k_min; k <= k_max; ++k) {
    const double y = std::exp2(-k);
    if (u.flux) {
      samples.push_back(u.flux(rho, y));
    } else {
      const double h = y / 8.0;
      samples.push_back(std::pow(y, u.gamma.a) * (u(rho, y + h) - u(rho, y - h)) / (2.0 * h));
    }
  }
  auto r = richardson(samples, extension_flux_exponents(g, 3));
  r.value *= -u.gamma.d_gamma;
  r.error_estimate *= u.gamma.d_gamma;
  return r;
}

// ---------------------------------------------------------------------------
// Trace energy

struct TraceEnergyReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Perturbation eps * b(y) * f added to the extension, with b a smooth bump on [y0, y1].
struct ExtensionPerturbation {
  double amplitude = 0.0;
  double y0 = 0.5;
  double y1 = 1.5;

  double b(double y) const { return bump_(y, 0); }
  double db(double y) const { return bump_(y, 1); }

 private:
  double bump_(double y, int deriv) const {
    if (y <= y0 || y >= y1) return 0.0;
    const double mid = 0.5 * (y0 + y1);
    const double half = 0.5 * (y1 - y0);
    const double x = (y - mid) / half;
    const double v = std::exp(1.0 - 1.0 / (1.0 - x * x));
    if (deriv == 0) return v;
    return v * (-2.0 * x / ((1.0 - x * x) * (1.0 - x * x))) / half;
  }
};

namespace detail {

/// FFTW r2r transform of `in` with the given kind (RODFT00 or REDFT00).
inline std::vector<double> r2r(std::vector<double> in, fftw_r2r_kind kind) {
  std::vector<double> out(in.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_r2r_1d(static_cast<int>(in.size()), in.data(), out.data(), kind, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace detail

/// Weighted Dirichlet energy of the Poisson extension of f on H^3 against
/// d_gamma^{-1} int f (-Delta)^gamma f dV.
///
/// With G = sinh(rho) u, |grad u|^2 sinh^2 integrates to G_rho^2 + G^2 + G_y^2 over rho, so
/// lhs = 4 pi int y^a int (G_rho^2 + G^2 + G_y^2) drho dy. The rho integral is the trapezoid
/// rule on the sine grid (G vanishes at both ends), with G, G_y and G_rho sampled by
/// DST-I / DCT-I of the extended coefficients; the y integral is tanh-sinh on [0, 1] and
/// Gauss-Kronrod panels beyond.
inline TraceEnergyReport trace_energy_check(double gamma, const RadialFunction& f,
                                            const ExtensionPerturbation& perturb = {}, SpectralGrid grid = {}) {
  const auto g = FracOrder::make(gamma);
  if (f.decay.kind == DecayKind::Constant) throw DomainError("trace_energy_check: f must decay");
  const auto op = H3SpectralOperator::fractional_power(gamma, grid);
  const auto s = op.series(f);
  const std::size_t n = s.size();
  const double h = s.length / static_cast<double>(n + 1);
  std::vector<double> mu(n);
  for (std::size_t k = 0; k < n; ++k) mu[k] = std::sqrt(s.lambda(k) * s.lambda(k) + 1.0);

  auto energy_at = [&](double y) {
    if (y <= 0.0) return 0.0;
    const double b = perturb.amplitude * perturb.b(y);
    const double db = perturb.amplitude * perturb.db(y);
    std::vector<double> cg(n), cy(n), cr(n + 2, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double p = phi_gamma(g, y * mu[k]) + b;
      cg[k] = s.coeff[k] * p;
      cy[k] = s.coeff[k] * (mu[k] * phi_gamma_derivative(g, y * mu[k]) + db);
      cr[k + 1] = s.coeff[k] * p * s.lambda(k);
    }
    // RODFT00 / REDFT00 carry a factor 2 on the interior sum.
    const auto vg = detail::r2r(cg, FFTW_RODFT00);
    const auto vy = detail::r2r(cy, FFTW_RODFT00);
    const auto vr = detail::r2r(cr, FFTW_REDFT00);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += 0.25 * (vg[j] * vg[j] + vy[j] * vy[j] + vr[j + 1] * vr[j + 1]);
    acc += 0.5 * 0.25 * (vr[0] * vr[0] + vr[n + 1] * vr[n + 1]);
    return 4.0 * std::numbers::pi * h * acc * std::pow(y, g.a);
  };
  // phi decays like exp(-y mu) with mu >= 1
  const double head = integrate_singular(energy_at, 0.0, 1.0, 1e-300, 1e-9).value;
  const double tail = integrate_panels(energy_at, uniform_breaks(1.0, 45.0, 0.5), 1e-300, 1e-10, 8).value;
  TraceEnergyReport rep;
  rep.lhs = head + tail;
  rep.rhs = op.quadratic_form(f) / g.d_gamma;
  rep.ratio = rep.lhs / rep.rhs;
  return rep;
}

}  // namespace fraclap
