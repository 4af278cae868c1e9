#pragma once

// Convolution kernel of (-Delta)^gamma on H^n in Bessel closed form.
//
// With c = (n-1)/2 and mu = gamma + 1/2 the one-dimensional Fourier transform of
// (lambda^2 + c^2)^gamma is 2 sqrt(pi) (2c)^mu / Gamma(-gamma) rho^{-mu} K_mu(c rho),
// and the kernel is the spherical transform of that profile:
//   odd n:  ((d/drho)/sinh)^{(n-1)/2} [rho^{-mu} K_mu(c rho)]
//   even n: the r = rho + v^2 transform of ((d/dr)/sinh)^{n/2} [...]
// times alpha_gamma.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "fraclap/errors.hpp"
#include "fraclap/hyperbolic.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/specfun.hpp"
#include "fraclap/symbolic.hpp"

namespace fraclap {

/// How alpha_gamma was obtained.
struct AlphaCalibration {
  double alpha = 0.0;
  std::string route;
  /// Value from the Fourier-transform constant.
  double analytic = 0.0;
  /// Value from the least-squares fit against the spectral oracle, when run.
  std::optional<double> fitted;
};

/// Closed-form alpha_gamma: the 1-D Fourier constant of (lambda^2 + c^2)^gamma times
/// the spherical inversion constant C_n. The sign makes the kernel positive for
/// gamma in (0,1), where the operator acts as P.V. int (f(x) - f(x')) K dx'.
inline double alpha_fourier_constant(const HyperbolicDim& dim, double gamma) {
  const double c = dim.half_nm1;
  const double mu = gamma + 0.5;
  const double cn = HyperbolicHeatKernel(dim).spectral_constant();
  const double sign = gamma > 0.0 ? -1.0 : 1.0;
  return sign * cn * 2.0 * std::sqrt(std::numbers::pi) * std::pow(2.0 * c, mu) / gamma_fn(-gamma);
}

class FracKernel {
 public:
  /// gamma in (-1,1) \ {0}; values outside (-1/2,1) are continuation-only and flagged.
  FracKernel(HyperbolicDim dim, double gamma)
      : dim_(dim),
        order_(FracOrder::make_extended(gamma)),
        expr_(RadialExpr(Leaf::bessel(gamma + 0.5, dim.half_nm1))
                  .scale(std::pow(dim.half_nm1, gamma + 0.5))
                  .apply_d_over_sinh(dim.operator_power())) {}

  /// Kernel with alpha from the Fourier constant.
  static FracKernel analytic(HyperbolicDim dim, double gamma) {
    FracKernel k(dim, gamma);
    const double a = alpha_fourier_constant(dim, gamma);
    k.set_calibration({a, "fourier-constant", a, std::nullopt});
    return k;
  }

  const HyperbolicDim& dim() const { return dim_; }
  const FracOrder& order() const { return order_; }
  double gamma() const { return order_.gamma; }
  /// True when gamma lies outside (-1/2, 1), where only the continued closed form is defined.
  bool continuation_only() const { return order_.gamma <= -0.5; }

  bool calibrated() const { return calibration_.has_value(); }
  const AlphaCalibration& calibration() const {
    if (!calibration_) throw CalibrationMissingError("FracKernel: alpha_gamma has not been calibrated");
    return *calibration_;
  }
  double alpha() const { return calibration().alpha; }
  void set_calibration(AlphaCalibration c) { calibration_ = std::move(c); }

  /// The kernel with alpha = 1.
  double shape(double rho) const {
    if (!(rho > 0.0)) throw DomainError("frac_kernel: rho must be positive");
    if (dim_.odd()) return expr_(rho);
    const double r_end = rho + 40.0 / (dim_.n - 1) + 2.0;
    return even_dimension_transform([&](double r) { return expr_(r); }, rho, r_end);
  }

  double operator()(double rho) const { return alpha() * shape(rho); }

  /// omega_{n-1} sinh^{n-1}(r) K(r), evaluated without overflow at large r.
  double radial_density(double r) const {
    if (!(r > 0.0)) throw DomainError("frac_kernel: r must be positive");
    const double lg = std::log(dim_.sphere_area()) + (dim_.n - 1) * static_cast<double>(detail::log_sinh(r));
    const double k = (*this)(r);
    return k == 0.0 ? 0.0 : k * std::exp(lg);
  }

  RadialKernel as_radial() const {
    RadialKernel k;
    k.evaluator = [self = *this](double rho) { return self(rho); };
    if (order_.gamma > 0.0) k.singular_exponent_at_zero = -dim_.n - 2.0 * order_.gamma;
    k.decay_power = -1.0 - order_.gamma;
    k.decay_rate = dim_.n - 1.0;
    k.dim = dim_;
    return k;
  }

 private:
  HyperbolicDim dim_;
  FracOrder order_;
  RadialExpr expr_;
  std::optional<AlphaCalibration> calibration_;
};

/// K_gamma(rho) with the closed-form alpha_gamma.
inline double frac_kernel(const HyperbolicDim& dim, double gamma, double rho) {
  return FracKernel::analytic(dim, gamma)(rho);
}

/// Direct evaluation of C_3 int_R (lambda^2 + 1)^gamma k_lambda(rho) dlambda on H^3,
/// absolutely convergent for gamma < -1/2:
///   k_lambda(rho) = -lambda sin(lambda rho) / sinh(rho)
inline double frac_kernel_direct_h3(double gamma, double rho) {
  if (!(gamma < -0.5)) throw DomainError("frac_kernel_direct_h3: integral converges only for gamma < -1/2");
  if (!(rho > 0.0)) throw DomainError("frac_kernel_direct_h3: rho must be positive");
  const double c3 = HyperbolicHeatKernel(3).spectral_constant();
  boost::math::quadrature::ooura_fourier_sin<double> integrator(1e-12);
  auto g = [gamma](double lambda) { return lambda * std::pow(lambda * lambda + 1.0, gamma); };
  const auto [value, rel_err] = integrator.integrate(g, rho);
  if (!(rel_err < 1e-8)) throw QuadratureError("frac_kernel_direct_h3: Fourier integral did not converge");
  return -2.0 * c3 * value / std::sinh(rho);
}

}  // namespace fraclap
