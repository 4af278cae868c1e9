#pragma once

// Radial spectral calculus on H^3 through the conjugation g = sinh(rho) f(rho):
// the radial Laplacian becomes d^2/drho^2 - 1, so a multiplier m(lambda) acting on
// eigenvalue lambda^2 + 1 is a one-dimensional sine-series multiplier on g.

#include <fftw3.h>

#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/radial_function.hpp"

namespace fraclap {

struct SpectralGrid {
  /// Target spacing; the actual spacing is L/(N+1) with N = 2^k - 1.
  double h = 0.01;
  /// Distance added past the support of f so that the odd periodic images are negligible.
  double padding = 40.0;
  /// Agreement demanded between the grid and its refinement.
  double rel_tol = 1e-7;
};

/// Sine series g(rho) = sum_k c_k sin(lambda_k rho) on [0, L], lambda_k = k pi / L.
struct SineSeries {
  double length = 0.0;
  std::vector<double> coeff;

  std::size_t size() const { return coeff.size(); }
  double lambda(std::size_t k) const { return static_cast<double>(k + 1) * std::numbers::pi / length; }

  /// sum_k c_k m_k sin(lambda_k rho) and, at rho = 0, the derivative sum_k c_k m_k lambda_k
  /// (which is what g/sinh tends to).
  double conjugated_value(const std::vector<double>& m, double rho) const {
    double s = 0.0;
    if (rho == 0.0) {
      for (std::size_t k = 0; k < coeff.size(); ++k) s += coeff[k] * m[k] * lambda(k);
      return s;
    }
    for (std::size_t k = 0; k < coeff.size(); ++k) s += coeff[k] * m[k] * std::sin(lambda(k) * rho);
    return s / std::sinh(rho);
  }
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// c_k with g(jh) = sum_k c_k sin(k pi j/(N+1)), via the type-I discrete sine transform.
inline std::vector<double> dst1_coefficients(const std::vector<double>& samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<double> in(samples);
  std::vector<double> out(samples.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_r2r_1d(n, in.data(), out.data(), FFTW_RODFT00, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  for (auto& v : out) v /= (n + 1);
  return out;
}

}  // namespace detail

/// Sine series of sinh(rho) f(rho) on [0, L] with N = 2^k - 1 interior samples.
inline SineSeries conjugated_sine_series(const RadialFunction& f, double length, int log2_points) {
  const std::size_t n = (std::size_t{1} << log2_points) - 1;
  const double h = length / static_cast<double>(n + 1);
  std::vector<double> g(n);
  const double finf = f.value_at_infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double rho = h * static_cast<double>(j + 1);
    g[j] = std::sinh(rho) * (f(rho) - finf);
  }
  return {length, detail::dst1_coefficients(g)};
}

/// Applies a radial multiplier m(lambda) (function of the spectral parameter, eigenvalue
/// lambda^2 + 1) to f on H^3 and evaluates at rho. Constants are annihilated when m(0)
/// vanishes in the limit sense, so constant f yields 0 for fractional powers.
class H3SpectralOperator {
 public:
  H3SpectralOperator(std::function<double(double)> multiplier, SpectralGrid grid = {})
      : m_(std::move(multiplier)), grid_(grid) {}

  static H3SpectralOperator fractional_power(double gamma, SpectralGrid grid = {}) {
    return H3SpectralOperator([gamma](double l) { return std::pow(l * l + 1.0, gamma); }, grid);
  }

  double apply(const RadialFunction& f, double rho) const {
    const auto [coarse, fine] = pair_(f, [&](const SineSeries& s, const std::vector<double>& m) {
      return s.conjugated_value(m, rho);
    });
    check_(coarse, fine, "apply");
    return fine;
  }

  std::vector<double> apply(const RadialFunction& f, const std::vector<double>& rhos) const {
    const auto s = series_(f, levels_(f) + 1);
    const auto m = multipliers_(s);
    std::vector<double> out;
    out.reserve(rhos.size());
    for (double r : rhos) out.push_back(s.conjugated_value(m, r));
    return out;
  }

  /// int_{H^3} f m(-Delta) f dV = 4 pi int_0^inf g (m g) drho = 4 pi (L/2) sum c_k^2 m_k.
  double quadratic_form(const RadialFunction& f) const {
    if (f.decay.kind == DecayKind::Constant) throw DomainError("quadratic_form: f must decay");
    const auto [coarse, fine] = pair_(f, [](const SineSeries& s, const std::vector<double>& m) {
      double acc = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) acc += s.coeff[k] * s.coeff[k] * m[k];
      return 4.0 * std::numbers::pi * 0.5 * s.length * acc;
    });
    check_(coarse, fine, "quadratic_form");
    return fine;
  }

  SineSeries series(const RadialFunction& f) const { return series_(f, levels_(f) + 1); }
  std::vector<double> multipliers(const SineSeries& s) const { return multipliers_(s); }

 private:
  double length_(const RadialFunction& f) const {
    const double supp = f.decay.kind == DecayKind::Constant ? 0.0 : f.support_radius();
    return supp + grid_.padding;
  }
  int levels_(const RadialFunction& f) const {
    const double n_target = length_(f) / grid_.h;
    int k = 4;
    while (std::exp2(k) < n_target && k < 24) ++k;
    return k;
  }
  SineSeries series_(const RadialFunction& f, int k) const { return conjugated_sine_series(f, length_(f), k); }
  std::vector<double> multipliers_(const SineSeries& s) const {
    std::vector<double> m(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) m[k] = m_(s.lambda(k));
    return m;
  }
  template <class Op>
  std::pair<double, double> pair_(const RadialFunction& f, Op&& op) const {
    const int k = levels_(f);
    const auto s1 = series_(f, k);
    const auto s2 = series_(f, k + 1);
    return {op(s1, multipliers_(s1)), op(s2, multipliers_(s2))};
  }
  void check_(double coarse, double fine, const char* who) const {
    const double scale = std::max(std::abs(fine), 1e-12);
    if (std::abs(coarse - fine) > 10.0 * grid_.rel_tol * scale) {
      std::ostringstream os;
      os << "spectral " << who << ": refinement changed result from " << coarse << " to " << fine;
      throw InstabilityError(os.str());
    }
  }

  std::function<double(double)> m_;
  SpectralGrid grid_;
};

/// (-Delta_{H^3})^gamma f (rho) by the conjugated sine-series multiplier (lambda^2+1)^gamma.
/// gamma = 0 reproduces f. Constant f maps to 0 for gamma > 0.
inline double spectral_frac(double gamma, const RadialFunction& f, double rho, SpectralGrid grid = {}) {
  if (rho < 0.0) throw DomainError("spectral_frac: rho must be non-negative");
  if (f.decay.kind == DecayKind::Constant) return gamma == 0.0 ? f(rho) : 0.0;
  return H3SpectralOperator::fractional_power(gamma, grid).apply(f, rho);
}

}  // namespace fraclap
