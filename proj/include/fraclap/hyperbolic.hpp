#pragma once

// Hyperboloid model of H^n, spherical functions and the explicit heat kernel.

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/specfun.hpp"
#include "fraclap/symbolic.hpp"

namespace fraclap {

/// Dimension n >= 2 with the derived c = (n-1)/2 and bottom of the spectrum c^2.
struct HyperbolicDim {
  int n = 3;
  double half_nm1 = 1.0;
  double lambda1 = 1.0;

  static HyperbolicDim make(int n) {
    if (n < 2) throw DomainError("hyperbolic dimension must be >= 2, got " + std::to_string(n));
    const double c = 0.5 * (n - 1);
    return {n, c, c * c};
  }
  bool odd() const { return n % 2 == 1; }
  /// Number of applications of (d/drho)/sinh in the odd/even closed forms.
  int operator_power() const { return odd() ? (n - 1) / 2 : n / 2; }
  /// Area of the unit sphere S^{n-1}.
  double sphere_area() const { return unit_sphere_area(n - 1); }
};

/// Radial function with metadata on its behaviour at 0 and infinity.
struct RadialKernel {
  std::function<double(double)> evaluator;
  /// Exponent e with value ~ rho^e as rho -> 0, if singular there.
  std::optional<double> singular_exponent_at_zero;
  /// value ~ rho^power * exp(-rate * rho) as rho -> infinity.
  double decay_power = 0.0;
  double decay_rate = 0.0;
  HyperbolicDim dim = HyperbolicDim::make(3);

  double operator()(double rho) const { return evaluator(rho); }
};

// ---------------------------------------------------------------------------
// Hyperboloid points

/// A point of {x : x0^2 - x1^2 - ... - xn^2 = 1, x0 > 0} in R^{n+1}.
using Point = std::vector<double>;

inline double minkowski(const Point& x, const Point& y) {
  double s = x[0] * y[0];
  for (std::size_t i = 1; i < x.size(); ++i) s -= x[i] * y[i];
  return s;
}

inline void validate_point(const Point& x) {
  if (x.size() < 3) throw InvalidPointError("hyperboloid point needs at least 3 coordinates");
  const double q = minkowski(x, x);
  if (!(x[0] > 0.0) || std::abs(q - 1.0) > 1e-9 * std::max(1.0, x[0] * x[0])) {
    throw InvalidPointError("point is not on the upper hyperboloid sheet");
  }
}

inline Point origin(int n) {
  Point p(static_cast<std::size_t>(n + 1), 0.0);
  p[0] = 1.0;
  return p;
}

/// Point at distance rho from the origin along the unit direction `dir` (length n).
inline Point radial_point(double rho, const std::vector<double>& dir) {
  Point p(dir.size() + 1);
  p[0] = std::cosh(rho);
  const double s = std::sinh(rho);
  for (std::size_t i = 0; i < dir.size(); ++i) p[i + 1] = s * dir[i];
  return p;
}

/// Point at distance rho from the origin along the first axis of H^n.
inline Point radial_point(int n, double rho) {
  std::vector<double> dir(static_cast<std::size_t>(n), 0.0);
  dir[0] = 1.0;
  return radial_point(rho, dir);
}

/// Geodesic distance arccosh([x, x']). Evaluated as 2 asinh(|x - x'|/2) with the
/// Lorentzian length of the chord, which keeps full precision for close points.
inline double hyperbolic_distance(const Point& x, const Point& y) {
  validate_point(x);
  validate_point(y);
  if (x.size() != y.size()) throw InvalidPointError("points live in different dimensions");
  double q = -(x[0] - y[0]) * (x[0] - y[0]);
  for (std::size_t i = 1; i < x.size(); ++i) q += (x[i] - y[i]) * (x[i] - y[i]);
  return 2.0 * std::asinh(0.5 * std::sqrt(std::max(q, 0.0)));
}

/// Density sinh^{n-1}(rho) of the volume in geodesic polar coordinates.
inline double volume_element(const HyperbolicDim& dim, double rho) {
  if (rho < 0.0) throw DomainError("volume_element: rho must be non-negative");
  return std::pow(std::sinh(rho), dim.n - 1);
}

// ---------------------------------------------------------------------------
// Even-dimensional transform

/// int_rho^inf sinh r / sqrt(cosh r - cosh rho) E(r) dr with r = rho + v^2,
/// which turns the inverse square-root endpoint into a smooth integrand:
///   2 sinh r / sqrt(sinh((r+rho)/2) * sinhc(v^2/2)) E(rho + v^2) dv.
/// `r_end` is where E is negligible.
template <class E>
double even_dimension_transform(E&& e, double rho, double r_end, double rel_tol = 1e-11) {
  if (rho < 0.0) throw DomainError("even_dimension_transform: rho must be non-negative");
  const double v_end = std::sqrt(std::max(r_end - rho, 1.0));
  auto integrand = [&](double v) {
    const double v2 = v * v;
    const double r = rho + v2;
    const double h = 0.5 * v2;
    const double sinhc = h < 1e-4 ? 1.0 + h * h / 6.0 : std::sinh(h) / h;
    // sinh r / sqrt(sinh((r+rho)/2)) in a form that does not overflow
    const double lw = detail::log_sinh(r) - 0.5 * detail::log_sinh(0.5 * (r + rho));
    const double val = e(r);
    if (val == 0.0) return 0.0;
    return 2.0 * std::exp(lw) / std::sqrt(sinhc) * val;
  };
  const auto br = uniform_breaks(0.0, v_end, 0.5);
  return integrate_panels(integrand, br, 1e-300, rel_tol, 12).value;
}

// ---------------------------------------------------------------------------
// Spherical functions

/// Unnormalised spherical function: ((d/drho)/sinh)^{(n-1)/2} cos(lambda rho)
/// for odd n, and the transform of ((d/dr)/sinh)^{n/2} cos(lambda r) for even n.
inline double spherical_k(const HyperbolicDim& dim, double lambda, double rho) {
  if (!(rho > 0.0)) throw DomainError("spherical_k: rho must be positive");
  const auto expr = RadialExpr(Leaf::cosine(lambda)).apply_d_over_sinh(dim.operator_power());
  if (dim.odd()) return expr(rho);
  const double r_end = rho + 90.0 / (dim.n - 1);
  return even_dimension_transform([&](double r) { return expr.eval(r); }, rho, r_end);
}

// ---------------------------------------------------------------------------
// Heat kernel

namespace detail {

// ((-d/drho)/sinh)^m exp(-rho^2/4t), i.e. the closed-form factor without prefactors.
inline RadialExpr heat_profile_expr(const HyperbolicDim& dim, double t) {
  const int m = dim.operator_power();
  return RadialExpr(Leaf::gaussian(t)).apply_d_over_sinh(m).scale(m % 2 == 0 ? 1.0 : -1.0);
}

inline double heat_profile(const HyperbolicDim& dim, double t, double rho) {
  const auto expr = heat_profile_expr(dim, t);
  if (dim.odd()) return expr.eval(rho);
  const double r_end = std::sqrt(rho * rho + 200.0 * t) + 2.0;
  return even_dimension_transform([&](double r) { return expr.eval(r); }, rho, r_end);
}

inline double heat_mass_unnormalised(const HyperbolicDim& dim, double t) {
  const double pref = std::exp(-dim.lambda1 * t) / std::sqrt(t);
  const double r_end = 2.0 * dim.half_nm1 * t + 14.0 * std::sqrt(t) + 4.0;
  const auto expr = heat_profile_expr(dim, t);
  auto integrand = [&](double rho) {
    if (rho == 0.0) return 0.0;
    const double prof = dim.odd() ? expr(rho)
                                  : even_dimension_transform([&](double r) { return expr(r); }, rho,
                                                             std::sqrt(rho * rho + 200.0 * t) + 2.0);
    return pref * prof * std::pow(std::sinh(rho), dim.n - 1);
  };
  const double width = std::max(0.25, 0.5 * std::sqrt(t));
  return dim.sphere_area() * integrate_panels(integrand, uniform_breaks(0.0, r_end, width), 1e-300, 1e-12).value;
}

}  // namespace detail

/// Explicit heat kernel of H^n,
///   p_t(rho) = N_n t^{-1/2} e^{-c^2 t} ((-d/drho)/sinh)^{(n-1)/2} e^{-rho^2/4t}   (n odd)
/// with the analogous transform for n even. N_n is fixed by requiring unit mass at t = 1.
class HyperbolicHeatKernel {
 public:
  explicit HyperbolicHeatKernel(HyperbolicDim dim) : dim_(dim), norm_(normalization_for(dim)) {}
  explicit HyperbolicHeatKernel(int n) : HyperbolicHeatKernel(HyperbolicDim::make(n)) {}

  const HyperbolicDim& dim() const { return dim_; }

  double operator()(double t, double rho) const {
    if (!(t > 0.0)) throw DomainError("heat_kernel: t must be positive");
    if (rho < 0.0) throw DomainError("heat_kernel: rho must be non-negative");
    return norm_ * std::exp(-dim_.lambda1 * t) / std::sqrt(t) * detail::heat_profile(dim_, t, rho);
  }

  double on_diagonal(double t) const { return (*this)(t, 0.0); }

  /// The constant N_n.
  double normalization() const { return norm_; }

  /// C_n such that the kernel of m(-Delta) is C_n int m(lambda^2 + c^2) k_lambda(rho) dlambda
  /// with the unnormalised k_lambda of spherical_k.
  double spectral_constant() const {
    const int m = dim_.operator_power();
    return (m % 2 == 0 ? 1.0 : -1.0) * norm_ / std::sqrt(std::numbers::pi);
  }

  /// omega_{n-1} int_0^inf p_t(rho) sinh^{n-1}(rho) drho.
  double mass(double t) const { return norm_ * detail::heat_mass_unnormalised(dim_, t); }

  RadialKernel as_radial(double t) const {
    RadialKernel k;
    k.evaluator = [self = *this, t](double rho) { return self(t, rho); };
    k.decay_power = 0.0;
    k.decay_rate = 0.0;
    k.dim = dim_;
    return k;
  }

  static double normalization_for(const HyperbolicDim& dim) {
    static std::mutex mu;
    static std::map<int, double> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(dim.n);
    if (it != cache.end()) return it->second;
    const double n = 1.0 / detail::heat_mass_unnormalised(dim, 1.0);
    cache.emplace(dim.n, n);
    return n;
  }

 private:
  HyperbolicDim dim_;
  double norm_;
};

/// p_t(rho) on H^n.
inline double heat_kernel(const HyperbolicDim& dim, double t, double rho) {
  return HyperbolicHeatKernel(dim)(t, rho);
}

/// Two-sided comparison function for the H^n heat kernel:
/// (1+rho)(1+rho+t)^{(n-3)/2} t^{-n/2} exp(-(n-1)^2 t/4 - (n-1) rho/2 - rho^2/4t).
inline double dm_envelope(const HyperbolicDim& dim, double t, double rho) {
  if (!(t > 0.0)) throw DomainError("dm_envelope: t must be positive");
  if (rho < 0.0) throw DomainError("dm_envelope: rho must be non-negative");
  const int n = dim.n;
  const double lg = std::log1p(rho) + 0.5 * (n - 3) * std::log(1.0 + rho + t) - 0.5 * n * std::log(t) -
                    dim.lambda1 * t - dim.half_nm1 * rho - rho * rho / (4.0 * t);
  return std::exp(lg);
}

}  // namespace fraclap
