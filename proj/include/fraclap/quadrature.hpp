#pragma once

// Thin wrappers over Boost.Math quadrature that turn an unmet tolerance into
// a QuadratureError instead of a silently inaccurate number.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <map>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fraclap/errors.hpp"

namespace fraclap {

/// Cutoffs and tolerances for the singular-integral and transform routines.
struct QuadratureSpec {
  double pv_inner_radius = 0.02;
  double outer_cutoff = 30.0;
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_nodes = 200000;

  void validate() const {
    if (!(pv_inner_radius > 0.0 && pv_inner_radius < 1.0)) {
      throw DomainError("QuadratureSpec: pv_inner_radius must lie in (0,1)");
    }
    if (!(abs_tol > 0.0 && rel_tol > 0.0)) throw DomainError("QuadratureSpec: tolerances must be positive");
    if (!(outer_cutoff > pv_inner_radius)) throw DomainError("QuadratureSpec: outer_cutoff too small");
    if (max_nodes < 100) throw DomainError("QuadratureSpec: max_nodes too small");
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  /// Integral of |f|; sets the round-off floor for the error check.
  double l1 = 0.0;
};

namespace detail {

inline void check_quadrature(const char* who, double value, double err, double abs_tol, double rel_tol,
                             double l1 = 0.0) {
  if (!std::isfinite(value)) {
    throw QuadratureError(std::string(who) + ": non-finite result");
  }
  const double allowed = std::max({abs_tol, rel_tol * std::abs(value), 1e-14 * l1});
  if (err > 100.0 * allowed) {
    std::ostringstream os;
    os << who << ": error estimate " << err << " exceeds tolerance " << allowed;
    throw QuadratureError(os.str());
  }
}

template <class F>
QuadResult gauss_kronrod_raw(F&& f, double a, double b, double rel_tol, unsigned max_depth) {
  QuadResult r;
  if (a == b) return r;
  // Boost's own round-off floor is ~1e-12 relative; asking for less makes it bisect to
  // max_depth and report the summed floors as error.
  r.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double x) { return static_cast<double>(f(x)); }, a, b, max_depth, std::max(rel_tol, 1e-11), &r.error,
      &r.l1);
  return r;
}

}  // namespace detail

/// Adaptive 61-point Gauss-Kronrod on a finite interval.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-10,
                     unsigned max_depth = 18) {
  const auto r = detail::gauss_kronrod_raw(f, a, b, rel_tol, max_depth);
  detail::check_quadrature("integrate", r.value, r.error, abs_tol, rel_tol, r.l1);
  return r;
}

/// Adaptive Gauss-Kronrod over consecutive panels [p0,p1], [p1,p2], ...
/// Tolerances apply to the total, so negligible tail panels never fail on their own.
template <class F>
QuadResult integrate_panels(F&& f, const std::vector<double>& breaks, double abs_tol = 1e-12,
                            double rel_tol = 1e-10, unsigned max_depth = 15) {
  QuadResult out;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const auto r = detail::gauss_kronrod_raw(f, breaks[i - 1], breaks[i], rel_tol, max_depth);
    out.value += r.value;
    out.error += r.error;
    out.l1 += r.l1;
  }
  detail::check_quadrature("integrate_panels", out.value, out.error, abs_tol, rel_tol, out.l1);
  return out;
}

/// Breakpoints a, a+w, a+2w, ..., b (last panel may be shorter).
inline std::vector<double> uniform_breaks(double a, double b, double width) {
  std::vector<double> br{a};
  const int n = std::max(1, static_cast<int>(std::ceil((b - a) / width - 1e-9)));
  for (int i = 1; i < n; ++i) br.push_back(a + (b - a) * i / n);
  br.push_back(b);
  return br;
}

/// n_points log-spaced values on [lo, hi], both ends included.
inline std::vector<double> log_grid(double lo, double hi, int n_points) {
  if (!(lo > 0.0 && hi > lo) || n_points < 2) throw DomainError("log_grid: need 0 < lo < hi and n >= 2");
  std::vector<double> g;
  for (int i = 0; i < n_points; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n_points - 1)));
  return g;
}

/// Double-exponential quadrature for integrable endpoint singularities on [a,b].
template <class F>
QuadResult integrate_singular(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-10) {
  if (a == b) return {};
  static thread_local boost::math::quadrature::tanh_sinh<double> ts(15);
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = ts.integrate([&](double x) { return static_cast<double>(f(x)); }, a, b, rel_tol, &err, &l1,
                                &levels);
  detail::check_quadrature("integrate_singular", v, err, abs_tol, rel_tol, l1);
  return {v, err, l1};
}

/// Integral over [a, infinity) by the exp-sinh rule.
template <class F>
QuadResult integrate_to_infinity(F&& f, double a, double abs_tol = 1e-12, double rel_tol = 1e-10) {
  static thread_local boost::math::quadrature::exp_sinh<double> es(12);
  double err = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double v = es.integrate([&](double x) { return static_cast<double>(f(x + a)); }, rel_tol, &err, &l1,
                                &levels);
  detail::check_quadrature("integrate_to_infinity", v, err, abs_tol, rel_tol, l1);
  return {v, err, l1};
}

/// Fixed-order Gauss-Legendre nodes and weights mapped to [a,b].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

inline GaussRule gauss_legendre(int order, double a, double b) {
  GaussRule r;
  // Golub-Welsch is overkill here; Newton on P_n from the Chebyshev guess.
  const int n = order;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    r.x[static_cast<std::size_t>(i)] = mid - half * z;
    r.x[static_cast<std::size_t>(n - 1 - i)] = mid + half * z;
    r.w[static_cast<std::size_t>(i)] = half * w;
    r.w[static_cast<std::size_t>(n - 1 - i)] = half * w;
  }
  return r;
}

/// Composite Gauss-Legendre over the given panel boundaries.
inline GaussRule composite_gauss(const std::vector<double>& breaks, int order) {
  GaussRule out;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const auto g = gauss_legendre(order, breaks[i - 1], breaks[i]);
    out.x.insert(out.x.end(), g.x.begin(), g.x.end());
    out.w.insert(out.w.end(), g.w.begin(), g.w.end());
  }
  return out;
}

/// Fixed composite Gauss-Legendre sum of f over the panels; no error control, meant for
/// integrands known to be smooth on every panel.
template <class F>
double integrate_fixed(F&& f, const std::vector<double>& breaks, int order = 20) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  const GaussRule* ref = nullptr;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order, -1.0, 1.0)).first;
    ref = &it->second;
  }
  double s = 0.0;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i - 1] + breaks[i]);
    const double half = 0.5 * (breaks[i] - breaks[i - 1]);
    double p = 0.0;
    for (std::size_t k = 0; k < ref->x.size(); ++k) p += ref->w[k] * f(mid + half * ref->x[k]);
    s += half * p;
  }
  return s;
}

}  // namespace fraclap
