#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/hyperbolic.hpp"
#include "fraclap/quadrature.hpp"

namespace fraclap {

enum class DecayKind { Constant, Compact, Gaussian, Exponential };

struct Decay {
  DecayKind kind = DecayKind::Gaussian;
  /// Gaussian: a in exp(-a rho^2); exponential: k in exp(-k rho).
  double rate = 1.0;
  /// Compact support radius.
  double radius = 0.0;
};

/// A function on H^n (or a model manifold) that depends only on the distance to the base point.
struct RadialFunction {
  std::string name;
  std::function<double(double)> f;
  /// Hoelder exponent of the function; smooth functions carry infinity.
  double holder_alpha = std::numeric_limits<double>::infinity();
  Decay decay;
  /// Scale factor of the declared tail envelope.
  double envelope_scale = 1.0;

  double operator()(double rho) const { return f(rho); }

  /// Magnitude used to turn relative quadrature tolerances into absolute ones.
  double scale() const { return std::max({std::abs(f(0.0)), envelope_scale, 1e-300}); }

  /// Limit at infinity: 0 except for constants.
  double value_at_infinity() const { return decay.kind == DecayKind::Constant ? f(0.0) : 0.0; }

  /// Radius beyond which |f - f(infinity)| < ~1e-18 of its scale.
  double support_radius() const {
    switch (decay.kind) {
      case DecayKind::Constant:
        return 0.0;
      case DecayKind::Compact:
        return decay.radius;
      case DecayKind::Gaussian:
        return std::sqrt(42.0 / decay.rate);
      case DecayKind::Exponential:
        return 42.0 / decay.rate;
    }
    return 0.0;
  }

  /// Declared envelope used by the tail probe.
  double envelope(double rho) const {
    switch (decay.kind) {
      case DecayKind::Constant:
        return std::abs(f(0.0)) * (1.0 + 1e-12);
      case DecayKind::Compact:
        return rho >= decay.radius ? 0.0 : std::numeric_limits<double>::infinity();
      case DecayKind::Gaussian:
        return envelope_scale * std::exp(-decay.rate * rho * rho);
      case DecayKind::Exponential:
        return envelope_scale * std::exp(-decay.rate * rho);
    }
    return 0.0;
  }

  /// Checks |f| against the declared envelope on [5, 10].
  bool tail_probe_ok() const {
    for (int i = 0; i <= 50; ++i) {
      const double rho = 5.0 + 0.1 * i;
      if (std::abs(f(rho)) > envelope(rho) * (1.0 + 1e-9) + 1e-300) return false;
    }
    return true;
  }

  // Factories

  static RadialFunction gaussian(double a = 1.0, double amplitude = 1.0) {
    RadialFunction r;
    r.name = "gaussian";
    r.f = [a, amplitude](double rho) { return amplitude * std::exp(-a * rho * rho); };
    r.decay = {DecayKind::Gaussian, a, 0.0};
    r.envelope_scale = std::abs(amplitude);
    return r;
  }

  /// exp(1 - 1/(1 - (rho/R)^2)) inside rho < R, zero outside; peak value 1.
  static RadialFunction bump(double radius = 2.5) {
    RadialFunction r;
    r.name = "bump";
    r.f = [radius](double rho) {
      const double x = rho / radius;
      if (x >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - x * x));
    };
    r.decay = {DecayKind::Compact, 0.0, radius};
    return r;
  }

  static RadialFunction constant(double value = 1.0) {
    RadialFunction r;
    r.name = "constant";
    r.f = [value](double) { return value; };
    r.decay = {DecayKind::Constant, 0.0, 0.0};
    return r;
  }

  /// sin(lambda0 rho)/(lambda0 sinh rho) times a Gaussian window of width w.
  static RadialFunction windowed_eigenfunction(double lambda0, double width) {
    RadialFunction r;
    r.name = "windowed-eigenfunction";
    r.f = [lambda0, width](double rho) {
      const double win = std::exp(-rho * rho / (width * width));
      if (rho < 1e-8) return win;
      return std::sin(lambda0 * rho) / (lambda0 * std::sinh(rho)) * win;
    };
    r.decay = {DecayKind::Gaussian, 1.0 / (width * width), 0.0};
    return r;
  }

  friend RadialFunction operator+(const RadialFunction& a, const RadialFunction& b) {
    RadialFunction r;
    r.name = a.name + "+" + b.name;
    r.f = [fa = a.f, fb = b.f](double rho) { return fa(rho) + fb(rho); };
    r.holder_alpha = std::min(a.holder_alpha, b.holder_alpha);
    r.decay = slower_decay(a, b);
    r.envelope_scale = a.envelope_scale + b.envelope_scale;
    return r;
  }

  friend RadialFunction operator*(double k, const RadialFunction& a) {
    RadialFunction r = a;
    r.name = std::to_string(k) + "*" + a.name;
    r.f = [k, fa = a.f](double rho) { return k * fa(rho); };
    r.envelope_scale = std::abs(k) * a.envelope_scale;
    return r;
  }

 private:
  static Decay slower_decay(const RadialFunction& a, const RadialFunction& b) {
    return a.support_radius() >= b.support_radius() ? a.decay : b.decay;
  }
};

/// Fourth-order central differences for f', f'' of an even radial function.
struct RadialDerivatives {
  double d1 = 0.0;
  double d2 = 0.0;
};

inline RadialDerivatives radial_derivatives(const std::function<double(double)>& f, double rho, double h = 1e-3) {
  // Even extension across rho = 0.
  auto fe = [&](double r) { return f(std::abs(r)); };
  const double fm2 = fe(rho - 2 * h), fm1 = fe(rho - h), f0 = fe(rho), fp1 = fe(rho + h), fp2 = fe(rho + 2 * h);
  return {(fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h), (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)};
}

/// Laplace-Beltrami of a radial function: f'' + drift(rho) f', with drift = (n-1) phi'/phi.
/// At the pole the limit n f''(0) is used.
inline double radial_laplacian(const std::function<double(double)>& f, int n,
                               const std::function<double(double)>& drift, double rho) {
  const auto d = radial_derivatives(f, rho);
  if (rho < 1e-9) return n * d.d2;
  return d.d2 + drift(rho) * d.d1;
}

/// Laplacian on H^n: drift (n-1) coth(rho).
inline double hyperbolic_laplacian(const RadialFunction& f, const HyperbolicDim& dim, double rho) {
  return radial_laplacian(f.f, dim.n, [n = dim.n](double r) { return (n - 1) / std::tanh(r); }, rho);
}

/// M_r f(rho) - f(rho) on H^n, where M_r is the mean over the geodesic sphere of radius r
/// about the point at distance rho from the base point. Computed without forming M_r f first.
inline double hyperbolic_spherical_increment(const HyperbolicDim& dim, const RadialFunction& f, double rho,
                                             double r) {
  const double f0 = f(rho);
  if (r <= 0.0) return 0.0;
  if (rho <= 0.0) return f(r) - f0;
  const double lo = std::abs(rho - r);
  const double hi = rho + r;
  const double finf = f.value_at_infinity();
  const double supp = f.decay.kind == DecayKind::Constant ? hi : f.support_radius();
  if (lo >= supp) return finf - f0;
  if (dim.n == 3) {
    // sinh(d) dd / (2 sinh r sinh rho) on [|rho - r|, rho + r] has unit mass.
    const double top = std::min(hi, supp);
    const double lden = std::log(2.0) + static_cast<double>(detail::log_sinh(r) + detail::log_sinh(rho));
    const double q = integrate_fixed([&](double d) { return (f(d) - f0) * std::sinh(d); },
                                     uniform_breaks(lo, top, 0.2), 24);
    double tail = 0.0;
    if (top < hi) {
      const double lc_hi = static_cast<double>(detail::log_cosh(hi));
      const double lc_top = static_cast<double>(detail::log_cosh(top));
      tail = (finf - f0) * std::exp(lc_hi - lden) * -std::expm1(lc_top - lc_hi);
    }
    return q * std::exp(-lden) + tail;
  }
  const double a = std::sinh(0.5 * (rho - r));
  const double b = std::sinh(rho) * std::sinh(r);
  auto integrand = [&](double th) {
    const double s = std::sin(0.5 * th);
    const double d = 2.0 * std::asinh(std::sqrt(a * a + b * s * s));
    return (f(d) - f0) * std::pow(std::sin(th), dim.n - 2);
  };
  const double q = integrate_fixed(integrand, uniform_breaks(0.0, std::numbers::pi, std::numbers::pi / 16), 24);
  return q * unit_sphere_area(dim.n - 2) / dim.sphere_area();
}

/// Mean of a radial f over the geodesic sphere of radius r about the point at distance rho
/// from the base point of H^n.
inline double hyperbolic_spherical_mean(const HyperbolicDim& dim, const RadialFunction& f, double rho, double r) {
  if (r <= 0.0) return f(rho);
  if (rho <= 0.0) return f(r);
  const double lo = std::abs(rho - r);
  const double hi = rho + r;
  const double supp = f.decay.kind == DecayKind::Constant ? hi : f.support_radius();
  if (lo >= supp) return f.value_at_infinity();
  if (dim.n == 3) {
    // Pushing the sphere measure forward to the distance d from the base point gives
    // sinh(d) dd / (2 sinh r sinh rho) on [|rho - r|, rho + r].
    const double top = std::min(hi, supp);
    const double q = integrate_fixed([&](double d) { return f(d) * std::sinh(d); }, uniform_breaks(lo, top, 0.2), 24);
    const double tail = f.value_at_infinity() * (std::cosh(hi) - std::cosh(top));
    return (q + tail) / (2.0 * std::sinh(r) * std::sinh(rho));
  }
  // General n: angular average with weight sin^{n-2}(theta), using
  // sinh^2(d/2) = sinh^2((rho-r)/2) + sinh(rho) sinh(r) sin^2(theta/2).
  const double a = std::sinh(0.5 * (rho - r));
  const double b = std::sinh(rho) * std::sinh(r);
  auto integrand = [&](double th) {
    const double s = std::sin(0.5 * th);
    const double d = 2.0 * std::asinh(std::sqrt(a * a + b * s * s));
    return f(d) * std::pow(std::sin(th), dim.n - 2);
  };
  const double q = integrate_fixed(integrand, uniform_breaks(0.0, std::numbers::pi, std::numbers::pi / 16), 24);
  return q * unit_sphere_area(dim.n - 2) / dim.sphere_area();
}

}  // namespace fraclap
