#pragma once

// Exact application of the operator (d/drho) / sinh(rho) to a small family of
// radial leaves. Results are kept as sums of monomials
//   coeff * rho^p * cosh(rho)^c * sinh(rho)^s * leaf_k(rho)
// and evaluated in log space so that large rho neither overflows nor loses
// the tiny Gaussian/Bessel factor.

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "fraclap/specfun.hpp"

namespace fraclap {

/// The function the operator starts from.
struct Leaf {
  enum class Kind {
    /// leaf_0 = cos(lambda rho), leaf_1 = sin(lambda rho)
    Trig,
    /// leaf_0 = exp(-rho^2 / (4 t))
    Gaussian,
    /// leaf_k = (c rho)^{-(mu+k)} K_{mu+k}(c rho)
    BesselChain,
  };
  Kind kind = Kind::Trig;
  double lambda = 0.0;
  double t = 1.0;
  double mu = 0.5;
  double c = 1.0;

  static Leaf cosine(double lambda) { return {Kind::Trig, lambda, 1.0, 0.5, 1.0}; }
  static Leaf gaussian(double t) { return {Kind::Gaussian, 0.0, t, 0.5, 1.0}; }
  static Leaf bessel(double mu, double c) { return {Kind::BesselChain, 0.0, 1.0, mu, c}; }
};

struct Monomial {
  double coeff = 0.0;
  int rho_pow = 0;
  int cosh_pow = 0;
  int sinh_pow = 0;
  int leaf = 0;
};

namespace detail {

inline long double log_sinh(long double x) {
  if (x < 1.0L) return std::log(std::sinh(x));
  return x + std::log1p(-std::exp(-2.0L * x)) - std::numbers::ln2_v<long double>;
}

inline long double log_cosh(long double x) {
  return x + std::log1p(std::exp(-2.0L * x)) - std::numbers::ln2_v<long double>;
}

}  // namespace detail

/// A finite sum of monomials over one leaf.
class RadialExpr {
 public:
  explicit RadialExpr(Leaf leaf) : leaf_(leaf), terms_{Monomial{1.0, 0, 0, 0, 0}} {}

  const Leaf& leaf() const { return leaf_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  RadialExpr& scale(double k) {
    for (auto& m : terms_) m.coeff *= k;
    return *this;
  }

  /// (d/drho) followed by division by sinh(rho).
  RadialExpr apply_d_over_sinh() const {
    std::map<std::tuple<int, int, int, int>, double> acc;
    auto add = [&](double c, int p, int ch, int sh, int leaf) {
      if (c == 0.0) return;
      acc[{p, ch, sh - 1, leaf}] += c;
    };
    for (const auto& m : terms_) {
      if (m.rho_pow != 0) add(m.coeff * m.rho_pow, m.rho_pow - 1, m.cosh_pow, m.sinh_pow, m.leaf);
      if (m.cosh_pow != 0) add(m.coeff * m.cosh_pow, m.rho_pow, m.cosh_pow - 1, m.sinh_pow + 1, m.leaf);
      if (m.sinh_pow != 0) add(m.coeff * m.sinh_pow, m.rho_pow, m.cosh_pow + 1, m.sinh_pow - 1, m.leaf);
      switch (leaf_.kind) {
        case Leaf::Kind::Trig:
          // d cos = -lambda sin, d sin = lambda cos
          add((m.leaf == 0 ? -1.0 : 1.0) * leaf_.lambda * m.coeff, m.rho_pow, m.cosh_pow, m.sinh_pow, 1 - m.leaf);
          break;
        case Leaf::Kind::Gaussian:
          add(-m.coeff / (2.0 * leaf_.t), m.rho_pow + 1, m.cosh_pow, m.sinh_pow, 0);
          break;
        case Leaf::Kind::BesselChain:
          add(-m.coeff * leaf_.c * leaf_.c, m.rho_pow + 1, m.cosh_pow, m.sinh_pow, m.leaf + 1);
          break;
      }
    }
    RadialExpr out(leaf_);
    out.terms_.clear();
    for (const auto& [key, c] : acc) {
      if (c == 0.0) continue;
      const auto [p, ch, sh, lf] = key;
      out.terms_.push_back({c, p, ch, sh, lf});
    }
    return out;
  }

  RadialExpr apply_d_over_sinh(int times) const {
    RadialExpr e = *this;
    for (int i = 0; i < times; ++i) e = e.apply_d_over_sinh();
    return e;
  }

  int max_leaf() const {
    int k = 0;
    for (const auto& m : terms_) k = std::max(k, m.leaf);
    return k;
  }

  /// Value at rho > 0.
  double operator()(double rho) const {
    if (!(rho > 0.0)) throw DomainError("RadialExpr: rho must be positive; use at_zero()");
    const long double r = rho;
    const long double lr = std::log(r);
    const long double lc = detail::log_cosh(r);
    const long double ls = detail::log_sinh(r);
    std::vector<long double> leaf_log;
    std::vector<long double> leaf_val(2, 0.0L);
    switch (leaf_.kind) {
      case Leaf::Kind::Trig:
        leaf_val[0] = std::cos(static_cast<long double>(leaf_.lambda) * r);
        leaf_val[1] = std::sin(static_cast<long double>(leaf_.lambda) * r);
        break;
      case Leaf::Kind::Gaussian:
        leaf_log.push_back(-r * r / (4.0L * leaf_.t));
        break;
      case Leaf::Kind::BesselChain: {
        const double s = leaf_.c * rho;
        const auto ks = bessel_K_scaled_sequence(leaf_.mu, s, max_leaf() + 1);
        for (std::size_t k = 0; k < ks.size(); ++k) {
          leaf_log.push_back(-(leaf_.mu + static_cast<double>(k)) * std::log(static_cast<long double>(s)) +
                             std::log(static_cast<long double>(ks[k])) - s);
        }
        break;
      }
    }
    long double sum = 0.0L;
    for (const auto& m : terms_) {
      long double lg = m.rho_pow * lr + m.cosh_pow * lc + m.sinh_pow * ls;
      long double factor = 1.0L;
      if (leaf_.kind == Leaf::Kind::Trig) {
        factor = leaf_val[static_cast<std::size_t>(m.leaf)];
      } else {
        lg += leaf_log[static_cast<std::size_t>(m.leaf)];
      }
      sum += static_cast<long double>(m.coeff) * factor * std::exp(lg);
    }
    return static_cast<double>(sum);
  }

  /// Limit rho -> 0+, by Richardson extrapolation in rho^2 (the expression is even).
  double at_zero() const {
    std::vector<double> samples;
    for (int k = 0; k < 5; ++k) samples.push_back((*this)(0.02 * std::exp2(-k)));
    const std::vector<double> exps = {2.0, 4.0, 6.0, 8.0};
    return richardson(samples, exps).value;
  }

  /// Value for rho >= 0.
  double eval(double rho) const { return rho > 0.0 ? (*this)(rho) : at_zero(); }

 private:
  Leaf leaf_;
  std::vector<Monomial> terms_;
};

}  // namespace fraclap
