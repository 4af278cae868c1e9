#pragma once

// alpha_gamma by two independent routes: the Fourier constant, and a least-squares match
// of the singular integral against the spectral multiplier on H^3.

#include <cmath>
#include <sstream>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/frackernel.hpp"
#include "fraclap/operators.hpp"
#include "fraclap/spectral.hpp"

namespace fraclap {

/// Least-squares alpha minimizing sum (alpha * PV_1 f_i(rho_j) - spectral f_i(rho_j))^2 over a
/// Gaussian and a compact bump on rho in {0.5, 1, 2}; PV_1 is the singular integral with alpha = 1.
inline double calibrate_alpha_least_squares(double gamma, const QuadratureSpec& spec = {}) {
  const auto dim = HyperbolicDim::make(3);
  FracKernel unit(dim, gamma);
  unit.set_calibration({1.0, "unit", 0.0, std::nullopt});
  double num = 0.0;
  double den = 0.0;
  for (const auto& f : {RadialFunction::gaussian(), RadialFunction::bump(2.5)}) {
    for (double rho : {0.5, 1.0, 2.0}) {
      const double p = pv_frac(unit, f, rho, spec);
      const double s = spectral_frac(gamma, f, rho);
      num += p * s;
      den += p * p;
    }
  }
  return num / den;
}

/// Calibrates a kernel on H^n. Route "fourier" uses the closed-form constant; route "both"
/// (the default for n = 3, gamma in (0,1)) also runs the least-squares fit and throws if
/// the two disagree by more than rel_tol.
inline AlphaCalibration calibrate_alpha(const HyperbolicDim& dim, double gamma, bool cross_check = true,
                                        double rel_tol = 1e-4) {
  FracOrder::make_extended(gamma);
  AlphaCalibration c;
  c.analytic = alpha_fourier_constant(dim, gamma);
  c.alpha = c.analytic;
  c.route = "fourier-constant";
  if (cross_check && dim.n == 3 && gamma > 0.0 && gamma < 1.0) {
    const double fit = calibrate_alpha_least_squares(gamma);
    c.fitted = fit;
    c.route = "fourier-constant+least-squares";
    if (std::abs(fit - c.analytic) > rel_tol * std::abs(c.analytic)) {
      std::ostringstream os;
      os << "calibrate_alpha: Fourier constant " << c.analytic << " and least-squares fit " << fit
         << " differ by more than " << rel_tol << " relative";
      throw CalibrationInconsistencyError(os.str());
    }
  }
  return c;
}

/// A kernel calibrated by calibrate_alpha.
inline FracKernel calibrated_kernel(const HyperbolicDim& dim, double gamma, bool cross_check = true) {
  FracKernel k(dim, gamma);
  k.set_calibration(calibrate_alpha(dim, gamma, cross_check));
  return k;
}

}  // namespace fraclap
