#pragma once

// Rotationally symmetric manifolds dr^2 + phi(r)^2 dw^2 with a pole, and admissibility
// rules for geometrically finite quotients of H^n.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fraclap/errors.hpp"
#include "fraclap/expression.hpp"
#include "fraclap/heat2poisson.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/specfun.hpp"

namespace fraclap {

struct RotSymProfile {
  std::string name;
  int n = 3;
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> ddphi;

  static RotSymProfile hyperbolic(int n) {
    return {"sinh", n, [](double r) { return std::sinh(r); }, [](double r) { return std::cosh(r); },
            [](double r) { return std::sinh(r); }};
  }
  static RotSymProfile euclidean(int n) {
    return {"r", n, [](double r) { return r; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
  }
  /// Profile from an expression in r, with derivatives formed symbolically.
  static RotSymProfile from_expression(const std::string& name, int n, const std::string& text) {
    const Expr e = parse_expression(text);
    const Expr d1 = e.derivative();
    const Expr d2 = d1.derivative();
    return {name, n, [e](double r) { return e(r); }, [d1](double r) { return d1(r); },
            [d2](double r) { return d2(r); }};
  }
};

// ---------------------------------------------------------------------------
// Validation

struct ProfileCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

/// phi(0) = 0, phi'(0) = 1 to 1e-9; phi odd on probes (so every even derivative vanishes at
/// the pole, which is what smoothness of the metric there requires); phi > 0 on (0, 20];
/// phi', phi'' consistent with phi by centred differences at h = 1e-4.
inline ProfileCheck validate_profile(const RotSymProfile& p) {
  ProfileCheck c;
  auto fail = [&](const std::string& s) {
    c.ok = false;
    c.problems.push_back(s);
  };
  if (p.n < 2) fail("dimension must be >= 2");
  if (!p.phi || !p.dphi || !p.ddphi) {
    fail("phi, phi' and phi'' must all be given");
    return c;
  }
  if (std::abs(p.phi(0.0)) > 1e-9) fail("phi(0) must vanish");
  if (std::abs(p.dphi(0.0) - 1.0) > 1e-9) fail("phi'(0) must equal 1");
  if (std::abs(p.ddphi(0.0)) > 1e-9) fail("phi''(0) must vanish");
  for (double r : {1e-3, 0.01, 0.1, 0.5, 1.0, 2.0}) {
    const double a = p.phi(r);
    const double b = p.phi(-r);
    if (std::abs(a + b) > 1e-9 * std::max(1.0, std::abs(a))) {
      fail("phi is not odd; even derivatives at r = 0 must vanish");
      break;
    }
  }
  for (int i = 1; i <= 200; ++i) {
    const double r = 0.1 * i;
    const double v = p.phi(r);
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail("phi must be positive and finite on (0, 20]");
      break;
    }
  }
  const double h = 1e-4;
  for (double r : {0.1, 0.5, 1.0, 2.0}) {
    const double fp = p.phi(r + h), f0 = p.phi(r), fm = p.phi(r - h);
    const double scale = std::max({1.0, std::abs(f0), std::abs(p.ddphi(r))});
    if (std::abs((fp - fm) / (2 * h) - p.dphi(r)) > 1e-5 * scale) {
      fail("phi' inconsistent with phi at r = " + std::to_string(r));
      break;
    }
    if (std::abs((fp - 2 * f0 + fm) / (h * h) - p.ddphi(r)) > 1e-5 * scale * 1e2) {
      fail("phi'' inconsistent with phi at r = " + std::to_string(r));
      break;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Curvature

struct CurvatureSample {
  double r = 0.0;
  double sectional_radial = 0.0;
  double sectional_tangential = 0.0;
  double ricci_radial = 0.0;
  double ricci_tangential = 0.0;
};

inline CurvatureSample curvature(const RotSymProfile& p, double r) {
  if (!(r > 0.0)) throw DomainError("curvature: r must be positive");
  const double f = p.phi(r), d1 = p.dphi(r), d2 = p.ddphi(r);
  CurvatureSample s;
  s.r = r;
  s.sectional_radial = -d2 / f;
  s.sectional_tangential = -(d1 * d1 - 1.0) / (f * f);
  s.ricci_radial = (p.n - 1) * s.sectional_radial;
  s.ricci_tangential = (p.n - 2) * s.sectional_tangential + s.sectional_radial;
  return s;
}

struct AdmissibilityRatios {
  double f1 = 0.0;
  double f2 = 0.0;
};

/// f1 = phi''/phi and f2 = (n-2)(phi'^2 - 1)/phi^2 + phi''/phi.
inline AdmissibilityRatios admissibility_ratios(const RotSymProfile& p, double r) {
  if (!(r > 0.0)) throw DomainError("admissibility_ratios: r must be positive");
  const double f = p.phi(r), d1 = p.dphi(r), d2 = p.ddphi(r);
  const double f1 = d2 / f;
  return {f1, (p.n - 2) * (d1 * d1 - 1.0) / (f * f) + f1};
}

struct RotSymVerdict {
  bool admissible = false;
  double sup_f1 = 0.0;
  double sup_f2 = 0.0;
  double slope_f1 = 0.0;
  double slope_f2 = 0.0;
  std::string reason;
};

/// Sampled version of "f1, f2 bounded above on [0, inf)": finite sups on the grid, a finite
/// limit at the small end, and non-increasing log-trend over the last factor 2 of the grid.
inline RotSymVerdict is_admissible_rotsym(const RotSymProfile& p, const std::vector<double>& r_grid) {
  RotSymVerdict v;
  if (r_grid.size() < 4) throw DomainError("is_admissible_rotsym: grid too short");
  std::vector<AdmissibilityRatios> vals;
  v.sup_f1 = v.sup_f2 = -std::numeric_limits<double>::infinity();
  for (double r : r_grid) {
    const auto a = admissibility_ratios(p, r);
    vals.push_back(a);
    v.sup_f1 = std::max(v.sup_f1, a.f1);
    v.sup_f2 = std::max(v.sup_f2, a.f2);
  }
  if (!std::isfinite(v.sup_f1) || !std::isfinite(v.sup_f2)) {
    v.reason = "f1 or f2 not finite on the grid";
    return v;
  }
  // near 0: the first two samples should already agree
  const auto& a0 = vals[0];
  const auto& a1 = vals[1];
  if (std::abs(a0.f1 - a1.f1) > 0.05 * std::max(1.0, std::abs(a0.f1)) ||
      std::abs(a0.f2 - a1.f2) > 0.05 * std::max(1.0, std::abs(a0.f2))) {
    v.reason = "no finite limit at r = 0";
    return v;
  }
  // large-r trend between r_end/2 and r_end
  const double r_end = r_grid.back();
  const auto ah = admissibility_ratios(p, 0.5 * r_end);
  const auto& ae = vals.back();
  auto slope = [](double lo, double hi) {
    if (hi <= 0.0) return -std::numeric_limits<double>::infinity();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log(hi / lo) / std::numbers::ln2;
  };
  v.slope_f1 = slope(ah.f1, ae.f1);
  v.slope_f2 = slope(ah.f2, ae.f2);
  if (v.slope_f1 > 1e-6 || v.slope_f2 > 1e-6) {
    v.reason = "f1 or f2 grows at large r";
    return v;
  }
  v.admissible = true;
  v.reason = "f1, f2 bounded above";
  return v;
}

inline RotSymVerdict is_admissible_rotsym(const RotSymProfile& p) {
  return is_admissible_rotsym(p, log_grid(1e-3, 10.0, 241));
}

/// Smallest beta >= 0 with Ric >= -(n-1) beta^2 on the grid:
/// Ric_radial = -(n-1) f1 and Ric_tangential = -f2.
inline double ricci_beta(const RotSymProfile& p, const std::vector<double>& r_grid) {
  double b2 = 0.0;
  for (double r : r_grid) {
    const auto a = admissibility_ratios(p, r);
    b2 = std::max({b2, a.f1, a.f2 / (p.n - 1)});
  }
  return std::sqrt(b2);
}

/// |B(R)| = omega_{n-1} int_0^R phi^{n-1}.
inline double ball_volume(const RotSymProfile& p, double radius) {
  if (!(radius > 0.0)) throw DomainError("ball_volume: R must be positive");
  const auto q = integrate_panels([&](double s) { return std::pow(p.phi(s), p.n - 1); },
                                  uniform_breaks(0.0, radius, 0.5), 1e-300, 1e-12);
  return unit_sphere_area(p.n - 1) * q.value;
}

/// Space form of curvature -beta^2 (Euclidean for beta = 0).
inline RotSymProfile comparison_profile(int n, double beta) {
  if (beta == 0.0) return RotSymProfile::euclidean(n);
  return {"sinh(beta r)/beta", n, [beta](double r) { return std::sinh(beta * r) / beta; },
          [beta](double r) { return std::cosh(beta * r); },
          [beta](double r) { return beta * std::sinh(beta * r); }};
}

/// Bishop: |B(R2)|/|B(R1)| <= |B_beta(R2)|/|B_beta(R1)|.
inline bool bishop_ratio_holds(const RotSymProfile& p, double beta, double r1, double r2) {
  const auto cmp = comparison_profile(p.n, beta);
  return ball_volume(p, r2) / ball_volume(p, r1) <= ball_volume(cmp, r2) / ball_volume(cmp, r1) * (1.0 + 1e-12);
}

struct Conjugation {
  double w = 1.0;
  double V = 0.0;
};

/// w = (r/phi)^{(n-1)/2} and V with Delta_M h = w (Delta_{R^n} - V)(h/w):
///   V = (n-1)/2 phi''/phi + (n-1)(n-3)/4 ((phi'/phi)^2 - 1/r^2).
inline Conjugation conjugation_potential(const RotSymProfile& p, double r) {
  if (!(r > 0.0)) throw DomainError("conjugation_potential: r must be positive");
  const double f = p.phi(r), d1 = p.dphi(r), d2 = p.ddphi(r);
  const double m = 0.5 * (p.n - 1);
  Conjugation c;
  c.w = std::pow(r / f, m);
  c.V = m * d2 / f + 0.25 * (p.n - 1) * (p.n - 3) * ((d1 / f) * (d1 / f) - 1.0 / (r * r));
  return c;
}

// ---------------------------------------------------------------------------
// Radial heat kernel by finite volumes

struct RadialHeatOptions {
  /// Start time of the Gaussian parametrix.
  double t0 = 1e-3;
  /// Node spacing at the pole; grows geometrically by `growth` up to h_max.
  double h_min = 0.002;
  double h_max = 0.02;
  double growth = 1.02;
  /// Time step: min(dt_rel * t, dt_max).
  double dt_rel = 0.02;
  double dt_max = 0.01;
  int snapshots_per_decade = 50;
  /// 0 = 6 sqrt(t_end) + 3 t_end (n-1) sup_{r>=1} phi'/phi + 2.
  double r_max = 0.0;
  /// Combine runs started at t0 and t0/2 to cancel the O(t0) parametrix error.
  bool bootstrap_extrapolation = true;
};

/// p_t(pole, r) for t in [t0, t_end]: TR-BDF2 on vertex-centred finite volumes for
/// d_t (A p) = d_r (A d_r p), A = omega phi^{n-1}, with zero flux at the pole and p = 0 at
/// r_max. The L-stable second stage matters at large t, where the pole value is tiny next to
/// any undamped grid-scale oscillation. The run starts from
/// (4 pi t)^{-n/2} exp(-r^2/4t) (r/phi)^{(n-1)/2} normalised to unit discrete mass.
class RadialHeatSolution {
 public:
  RadialHeatSolution(RotSymProfile profile, double t_end, RadialHeatOptions opt = {})
      : profile_(std::move(profile)), opt_(opt), t_end_(t_end) {
    const auto chk = validate_profile(profile_);
    if (!chk.ok) throw DomainError("radial_heat_solve: invalid profile: " + chk.problems.front());
    const auto verdict = is_admissible_rotsym(profile_);
    if (!verdict.admissible) throw DomainError("radial_heat_solve: profile not admissible: " + verdict.reason);
    if (!(t_end > opt_.t0)) throw DomainError("radial_heat_solve: t_end must exceed t0");
    build_grid_();
    // storage times
    const double decades = std::log10(t_end_ / opt_.t0);
    const int k = std::max(2, static_cast<int>(std::ceil(decades * opt_.snapshots_per_decade)));
    for (int i = 0; i <= k; ++i) times_.push_back(opt_.t0 * std::pow(t_end_ / opt_.t0, static_cast<double>(i) / k));
    times_.back() = t_end_;

    const auto a = run_(opt_.t0);
    if (opt_.bootstrap_extrapolation) {
      const auto b = run_(0.5 * opt_.t0);
      snaps_.resize(a.size());
      double disc = 0.0;
      double peak = 0.0;
      for (std::size_t s = 0; s < a.size(); ++s) {
        snaps_[s].resize(a[s].size());
        for (std::size_t i = 0; i < a[s].size(); ++i) snaps_[s][i] = 2.0 * b[s][i] - a[s][i];
      }
      for (std::size_t i = 0; i < a.back().size(); ++i) {
        disc = std::max(disc, std::abs(a.back()[i] - b.back()[i]));
        peak = std::max(peak, std::abs(b.back()[i]));
      }
      bootstrap_discrepancy_ = disc / peak;
    } else {
      snaps_ = a;
    }
    mass_end_ = mass_(snaps_.back());
    if (mass_end_ < 0.99) {
      std::ostringstream os;
      os << "radial_heat_solve: mass " << mass_end_ << " at t = " << t_end_ << " (r_max = " << r_.back()
         << " too small)";
      throw MassLeakError(os.str());
    }
  }

  const RotSymProfile& profile() const { return profile_; }
  double t_min() const { return opt_.t0; }
  double t_end() const { return t_end_; }
  double r_max() const { return r_.back(); }
  const std::vector<double>& nodes() const { return r_; }
  const std::vector<double>& times() const { return times_; }
  /// Mass omega int p phi^{n-1} dr at t_end.
  double mass_at_end() const { return mass_end_; }
  double mass(std::size_t snapshot) const { return mass_(snaps_.at(snapshot)); }
  /// max |p(t0) - p(t0/2)| / max p at t_end, the size of the removed parametrix error.
  double bootstrap_discrepancy() const { return bootstrap_discrepancy_; }
  const std::vector<double>& snapshot(std::size_t s) const { return snaps_.at(s); }

  /// p_t(pole, r) by cubic Lagrange interpolation in r and in log t.
  double operator()(double t, double r) const {
    if (t < opt_.t0 * (1.0 - 1e-12) || t > t_end_ * (1.0 + 1e-12)) {
      throw DomainError("radial heat solution: t outside [t0, t_end]");
    }
    if (r < 0.0) throw DomainError("radial heat solution: r must be non-negative");
    if (r >= r_.back()) return 0.0;
    const double lt = std::log(t);
    const std::size_t s = bracket_(times_, t);
    const std::size_t s0 = s == 0 ? 0 : std::min(s - 1, times_.size() - 4);
    double acc = 0.0;
    for (std::size_t a = s0; a < s0 + 4; ++a) {
      double w = 1.0;
      for (std::size_t b = s0; b < s0 + 4; ++b) {
        if (b != a) w *= (lt - std::log(times_[b])) / (std::log(times_[a]) - std::log(times_[b]));
      }
      acc += w * in_space_(snaps_[a], r);
    }
    return acc;
  }

 private:
  void build_grid_() {
    double rmax = opt_.r_max;
    if (rmax <= 0.0) {
      double sup = 0.0;
      for (double r = 1.0; r <= 20.0; r += 0.25) sup = std::max(sup, profile_.dphi(r) / profile_.phi(r));
      rmax = 6.0 * std::sqrt(t_end_) + 3.0 * t_end_ * (profile_.n - 1) * sup + 2.0;
    }
    r_.push_back(0.0);
    double h = opt_.h_min;
    while (r_.back() < rmax) {
      r_.push_back(r_.back() + h);
      h = std::min(h * opt_.growth, opt_.h_max);
    }
    const std::size_t nn = r_.size();
    area_.resize(nn);
    vol_.resize(nn);
    coef_.resize(nn);
    auto A = [&](double r) { return unit_sphere_area(profile_.n - 1) * std::pow(profile_.phi(r), profile_.n - 1); };
    for (std::size_t i = 0; i < nn; ++i) {
      const double lo = i == 0 ? 0.0 : 0.5 * (r_[i - 1] + r_[i]);
      const double hi = i + 1 < nn ? 0.5 * (r_[i] + r_[i + 1]) : r_[i];
      vol_[i] = integrate_fixed(A, {lo, hi}, 4);
      if (i + 1 < nn) coef_[i] = A(hi) / (r_[i + 1] - r_[i]);
    }
  }

  double mass_(const std::vector<double>& p) const {
    double m = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) m += vol_[i] * p[i];
    return m;
  }

  // (L p)_i = c_i (p_{i+1} - p_i) - c_{i-1} (p_i - p_{i-1}) with p = 0 at the last node.
  std::vector<double> apply_l_(const std::vector<double>& p) const {
    const std::size_t m = r_.size() - 1;
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double cl = i == 0 ? 0.0 : coef_[i - 1];
      const double pl = i == 0 ? 0.0 : p[i - 1];
      const double pr = i + 1 < m ? p[i + 1] : 0.0;
      out[i] = coef_[i] * (pr - p[i]) - cl * (p[i] - pl);
    }
    return out;
  }

  // Solves (V - a L) x = rhs by the Thomas algorithm.
  std::vector<double> solve_(double a, std::vector<double> rhs) const {
    const std::size_t m = r_.size() - 1;
    std::vector<double> lower(m, 0.0), diag(m), upper(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double cl = i == 0 ? 0.0 : coef_[i - 1];
      diag[i] = vol_[i] + a * (cl + coef_[i]);
      if (i > 0) lower[i] = -a * cl;
      if (i + 1 < m) upper[i] = -a * coef_[i];
    }
    for (std::size_t i = 1; i < m; ++i) {
      const double w = lower[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> x(m + 1, 0.0);
    x[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
    return x;
  }

  // One TR-BDF2 step: trapezoidal rule to t + g dt, then BDF2 to t + dt.
  void step_(std::vector<double>& p, double dt) const {
    constexpr double g = 2.0 - std::numbers::sqrt2;
    const std::size_t m = r_.size() - 1;
    const auto lp = apply_l_(p);
    std::vector<double> rhs(m);
    for (std::size_t i = 0; i < m; ++i) rhs[i] = vol_[i] * p[i] + 0.5 * g * dt * lp[i];
    const auto mid = solve_(0.5 * g * dt, rhs);
    const double c_mid = 1.0 / (g * (2.0 - g));
    const double c_old = (1.0 - g) * (1.0 - g) / (g * (2.0 - g));
    for (std::size_t i = 0; i < m; ++i) rhs[i] = vol_[i] * (c_mid * mid[i] - c_old * p[i]);
    p = solve_((1.0 - g) / (2.0 - g) * dt, rhs);
  }

  std::vector<std::vector<double>> run_(double t_start) const {
    const int n = profile_.n;
    std::vector<double> p(r_.size());
    for (std::size_t i = 0; i < r_.size(); ++i) {
      const double r = r_[i];
      const double w = r == 0.0 ? 1.0 : std::pow(r / profile_.phi(r), 0.5 * (n - 1));
      p[i] = std::pow(4.0 * std::numbers::pi * t_start, -0.5 * n) * std::exp(-r * r / (4.0 * t_start)) * w;
    }
    p.back() = 0.0;
    const double m0 = mass_(p);
    for (auto& v : p) v /= m0;

    double t = t_start;
    auto advance_to = [&](double target) {
      while (t < target * (1.0 - 1e-14)) {
        const double dt_target = std::min(opt_.dt_rel * t, opt_.dt_max);
        const int k = std::max(1, static_cast<int>(std::ceil((target - t) / dt_target - 1e-9)));
        const double dt = (target - t) / k;
        step_(p, dt);
        t += dt;
      }
      t = target;
    };
    std::vector<std::vector<double>> out;
    for (double ts : times_) {
      advance_to(ts);
      out.push_back(p);
    }
    return out;
  }

  static std::size_t bracket_(const std::vector<double>& x, double v) {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    if (i == 0) return 0;
    return std::min(i - 1, x.size() - 2);
  }

  double in_space_(const std::vector<double>& p, double r) const {
    const std::size_t i = bracket_(r_, r);
    const std::size_t i0 = i == 0 ? 0 : std::min(i - 1, r_.size() - 4);
    double acc = 0.0;
    for (std::size_t a = i0; a < i0 + 4; ++a) {
      double w = 1.0;
      for (std::size_t b = i0; b < i0 + 4; ++b) {
        if (b != a) w *= (r - r_[b]) / (r_[a] - r_[b]);
      }
      acc += w * p[a];
    }
    return acc;
  }

  RotSymProfile profile_;
  RadialHeatOptions opt_;
  double t_end_;
  std::vector<double> r_, area_, vol_, coef_, times_;
  std::vector<std::vector<double>> snaps_;
  double mass_end_ = 0.0;
  double bootstrap_discrepancy_ = 0.0;
};

inline RadialHeatSolution radial_heat_solve(const RotSymProfile& profile, double t_end, RadialHeatOptions opt = {}) {
  return RadialHeatSolution(profile, t_end, opt);
}

/// Heat kernel provider backed by a radial solution. Only the pole is supported as a base
/// point, so spherical means are available for rho = 0 only.
class RotSymProvider : public HeatKernelProvider {
 public:
  explicit RotSymProvider(std::shared_ptr<const RadialHeatSolution> sol) : sol_(std::move(sol)) {}
  RotSymProvider(const RotSymProfile& profile, double t_end, RadialHeatOptions opt = {})
      : sol_(std::make_shared<RadialHeatSolution>(profile, t_end, opt)) {}

  int dim() const override { return sol_->profile().n; }
  double lambda1() const override { return 0.0; }
  double kernel(double t, const Point& x, const Point& x2) const override {
    validate_point(x);
    validate_point(x2);
    const auto o = origin(static_cast<int>(x.size()) - 1);
    if (hyperbolic_distance(x, o) > 1e-12 && hyperbolic_distance(x2, o) > 1e-12) {
      throw DomainError("RotSymProvider: one point must be the pole");
    }
    // Radial coordinates are read off the hyperboloid chart as geodesic distance from the pole.
    return radial_kernel(t, std::max(hyperbolic_distance(x, o), hyperbolic_distance(x2, o)));
  }
  double on_diagonal(double t, const Point& x) const override {
    validate_point(x);
    if (hyperbolic_distance(x, origin(static_cast<int>(x.size()) - 1)) > 1e-12) {
      throw DomainError("RotSymProvider: on-diagonal values are available at the pole only");
    }
    return radial_kernel(t, 0.0);
  }
  double radial_kernel(double t, double r) const override { return (*sol_)(t, r); }
  double sphere_area(double r) const override {
    return unit_sphere_area(dim() - 1) * std::pow(sol_->profile().phi(r), dim() - 1);
  }
  double drift(double r) const override {
    const auto& p = sol_->profile();
    return (dim() - 1) * p.dphi(r) / p.phi(r);
  }
  double spherical_mean(const RadialFunction& f, double rho, double r) const override {
    if (rho != 0.0) throw DomainError("RotSymProvider: spherical means only about the pole");
    return f(r);
  }
  double radial_extent(double t) const override {
    return std::min(sol_->r_max(), 6.0 * std::sqrt(t) + (dim() - 1) * 3.0 * t + 1.0);
  }
  double min_time() const override { return sol_->t_min(); }
  double max_time() const override { return sol_->t_end(); }
  std::string name() const override { return "rotsym(" + sol_->profile().name + ")"; }

  const RadialHeatSolution& solution() const { return *sol_; }

 private:
  std::shared_ptr<const RadialHeatSolution> sol_;
};

// ---------------------------------------------------------------------------
// Geometrically finite quotients

struct GroupDescriptor {
  int n = 3;
  double delta = 0.0;
  std::vector<int> cusp_ranks;
  bool has_maximal_cusp = false;

  void validate() const {
    if (n < 2) throw DomainError("GroupDescriptor: n must be >= 2");
    if (!(delta >= 0.0 && delta <= n - 1)) throw DomainError("GroupDescriptor: delta must lie in [0, n-1]");
    for (int r : cusp_ranks) {
      if (r < 1 || r > n - 1) throw DomainError("GroupDescriptor: cusp ranks must lie in [1, n-1]");
    }
  }
};

enum class GeomFiniteRule { I, II, ConvexCocompact, None };

inline std::string to_string(GeomFiniteRule r) {
  switch (r) {
    case GeomFiniteRule::I: return "i";
    case GeomFiniteRule::II: return "ii";
    case GeomFiniteRule::ConvexCocompact: return "convex_cocompact";
    case GeomFiniteRule::None: return "none";
  }
  return "none";
}

struct GeomFiniteVerdict {
  bool admissible = false;
  GeomFiniteRule rule = GeomFiniteRule::None;
};

/// Cusp-free groups pass as convex cocompact. Otherwise
///   (i)  delta < (n-1)/2, every rank < n-1, and no maximal cusp;
///   (ii) delta = (n-1)/2 + beta/2 with beta >= 0 and every rank < (n-1)^2 - beta^2.
inline GeomFiniteVerdict is_admissible_geomfinite(const GroupDescriptor& g) {
  g.validate();
  GeomFiniteVerdict v;
  if (g.cusp_ranks.empty()) {
    v.admissible = true;
    v.rule = GeomFiniteRule::ConvexCocompact;
    return v;
  }
  const int max_rank = *std::max_element(g.cusp_ranks.begin(), g.cusp_ranks.end());
  const double half = 0.5 * (g.n - 1);
  if (g.delta < half && max_rank < g.n - 1 && !g.has_maximal_cusp) {
    v.admissible = true;
    v.rule = GeomFiniteRule::I;
    return v;
  }
  if (g.delta >= half) {
    const double beta = 2.0 * g.delta - (g.n - 1);
    if (max_rank < (g.n - 1) * (g.n - 1) - beta * beta) {
      v.admissible = true;
      v.rule = GeomFiniteRule::II;
      return v;
    }
  }
  return v;
}

}  // namespace fraclap
