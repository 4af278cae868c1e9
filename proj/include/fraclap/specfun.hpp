#pragma once

// Special functions: Gamma, modified Bessel functions of real order, the
// extension profile phi_gamma and the Neumann constant d_gamma.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace detail {

// Taylor coefficients of 1/Gamma(1+x) about x = 0.
inline constexpr std::array<double, 25> kRecipGammaTaylor = {
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
};

// Lanczos approximation, g = 7, n = 9.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with exact zeros at the integers.
inline double sin_pi(double x) {
  const double n = std::round(x);
  const double r = x - n;
  const double s = std::sin(std::numbers::pi * r);
  return (static_cast<long long>(n) % 2 == 0) ? s : -s;
}

}  // namespace detail

/// Gamma function. Lanczos approximation with reflection for x < 1/2.
inline double gamma_fn(double x) {
  using std::numbers::pi;
  if (std::isnan(x)) return x;
  if (detail::is_nonpositive_integer(x)) {
    throw DomainError("gamma_fn: pole at non-positive integer " + std::to_string(x));
  }
  if (x < 0.5) return pi / (detail::sin_pi(x) * gamma_fn(1.0 - x));
  if (x > 171.7) return std::numeric_limits<double>::infinity();
  // Integer arguments are exact factorials.
  if (x == std::floor(x) && x <= 30.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  const double z = x - 1.0;
  double acc = detail::kLanczosCoeff[0];
  for (std::size_t i = 1; i < detail::kLanczosCoeff.size(); ++i) {
    acc += detail::kLanczosCoeff[i] / (z + static_cast<double>(i));
  }
  const double t = z + detail::kLanczosG + 0.5;
  // t^(z+1/2) e^{-t} split to delay overflow near x ~ 170.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * pi) * half * (half * std::exp(-t)) * acc;
}

/// 1/Gamma(x), zero at the poles.
inline double recip_gamma(double x) {
  if (detail::is_nonpositive_integer(x)) return 0.0;
  return 1.0 / gamma_fn(x);
}

/// Order of a modified Bessel function. Any real value; K is even in nu.
struct BesselOrder {
  double nu = 0.0;
};

/// Value represented as mantissa * exp(exponent); used where exp(s) overflows.
struct ScaledReal {
  double mantissa = 0.0;
  double exponent = 0.0;
  double value() const { return mantissa * std::exp(exponent); }
};

namespace detail {

struct BesselIKScaled {
  double i_scaled;   // e^{-x} I_nu(x)
  double k_scaled;   // e^{x} K_nu(x)
  double k1_scaled;  // e^{x} K_{nu+1}(x)
};

// Temme's series (x < 2) or Steed's continued fraction (x >= 2) for
// K_mu, K_{mu+1} with |mu| <= 1/2, forward recurrence to K_nu, and I_nu from
// the continued fraction for I'/I plus the Wronskian. nu >= 0.
inline BesselIKScaled bessel_ik_scaled(double nu, double x) {
  using std::numbers::pi;
  constexpr double eps = 1e-16;
  constexpr double fpmin = 1e-300;
  constexpr int max_iter = 100000;

  const int nl = static_cast<int>(nu + 0.5);
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;

  // Continued fraction for I'_nu / I_nu.
  double h = std::max(nu * xi, fpmin);
  double b = xi2 * nu;
  double d = 0.0;
  double c = h;
  int it = 0;
  for (; it < max_iter; ++it) {
    b += xi2;
    d = 1.0 / (b + d);
    c = b + 1.0 / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  if (it >= max_iter) throw DomainError("bessel: continued fraction for I'/I did not converge");

  // Downward recurrence to order mu, unnormalised.
  double ril = fpmin;
  double ripl = h * ril;
  const double ril1 = ril;
  double fact = nu * xi;
  for (int l = nl; l >= 1; --l) {
    const double ritemp = fact * ril + ripl;
    fact -= xi;
    ripl = fact * ritemp + ril;
    ril = ritemp;
  }
  const double f = ripl / ril;

  double rkmu = 0.0;  // scaled by e^x
  double rk1 = 0.0;
  if (x < 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = pi * xmu;
    const double fct = (std::abs(pimu) < eps) ? 1.0 : pimu / std::sin(pimu);
    double dd = -std::log(x2);
    double e = xmu * dd;
    const double fct2 = (std::abs(e) < eps) ? 1.0 : std::sinh(e) / e;
    // gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
    double gam1 = 0.0;
    double gam2 = 0.0;
    double gampl = 0.0;
    double gammi = 0.0;
    {
      double p = 1.0;
      for (std::size_t k = 0; k < kRecipGammaTaylor.size(); ++k) {
        const double term = kRecipGammaTaylor[k] * p;
        gampl += term;
        gammi += (k % 2 == 0) ? term : -term;
        if (k % 2 == 0) {
          gam2 += term;
        } else {
          gam1 -= kRecipGammaTaylor[k] * (p / (xmu == 0.0 ? 1.0 : xmu));
        }
        p *= xmu;
      }
      if (xmu == 0.0) gam1 = -kRecipGammaTaylor[1];
    }
    double ff = fct * (gam1 * std::cosh(e) + gam2 * fct2 * dd);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double cc = 1.0;
    dd = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i < max_iter; ++i) {
      ff = (i * ff + p + q) / (i * i - xmu2);
      cc *= dd / i;
      p /= (i - xmu);
      q /= (i + xmu);
      const double del = cc * ff;
      sum += del;
      const double del1 = cc * (p - i * ff);
      sum1 += del1;
      if (std::abs(del) < std::abs(sum) * eps) break;
    }
    if (i >= max_iter) throw DomainError("bessel: Temme series did not converge");
    const double ex = std::exp(x);
    rkmu = sum * ex;
    rk1 = sum1 * xi2 * ex;
  } else {
    double bb = 2.0 * (1.0 + x);
    double dd = 1.0 / bb;
    double hh = dd;
    double delh = dd;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25 - xmu2;
    double q = a1;
    double cc = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 1;
    for (; i < max_iter; ++i) {
      a -= 2 * i;
      cc = -a * cc / (i + 1.0);
      const double qnew = (q1 - bb * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += cc * qnew;
      bb += 2.0;
      dd = 1.0 / (bb + a * dd);
      delh = (bb * dd - 1.0) * delh;
      hh += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < eps) break;
    }
    if (i >= max_iter) throw DomainError("bessel: Steed continued fraction did not converge");
    hh = a1 * hh;
    rkmu = std::sqrt(pi / (2.0 * x)) / s;
    rk1 = rkmu * (xmu + x + 0.5 - hh) * xi;
  }

  const double rkmup = xmu * xi * rkmu - rk1;
  // Wronskian I K' - I' K = -1/x, both factors carry compensating scalings.
  const double rimu = xi / (f * rkmu - rkmup);
  const double ri = (rimu * ril1) / ril;
  for (int i = 1; i <= nl; ++i) {
    const double rktemp = (xmu + i) * xi2 * rk1 + rkmu;
    rkmu = rk1;
    rk1 = rktemp;
  }
  return {ri, rkmu, rk1};
}

}  // namespace detail

/// e^{s} K_nu(s).
inline double bessel_K_scaled(BesselOrder order, double s) {
  if (!(s > 0.0)) throw DomainError("bessel_K: argument must be positive");
  return detail::bessel_ik_scaled(std::abs(order.nu), s).k_scaled;
}

/// Modified Bessel function of the second kind K_nu(s), s > 0.
inline double bessel_K(BesselOrder order, double s) {
  if (!(s > 0.0)) throw DomainError("bessel_K: argument must be positive");
  if (s > 745.0) return 0.0;
  return bessel_K_scaled(order, s) * std::exp(-s);
}

/// K_{nu}(s), K_{nu+1}(s), ..., K_{nu+count-1}(s), each multiplied by e^{s}.
inline std::vector<double> bessel_K_scaled_sequence(double nu, double s, int count) {
  if (!(s > 0.0)) throw DomainError("bessel_K: argument must be positive");
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  if (count <= 0) return out;
  // Upward recurrence is stable for K. Start from the non-negative order.
  double k0 = 0.0;
  double k1 = 0.0;
  double start = nu;
  if (nu >= 0.0) {
    const auto r = detail::bessel_ik_scaled(nu, s);
    k0 = r.k_scaled;
    k1 = r.k1_scaled;
  } else {
    // K_nu = K_{-nu}; K_{nu+1} = K_{-nu-1}
    k0 = detail::bessel_ik_scaled(-nu, s).k_scaled;
    k1 = detail::bessel_ik_scaled(std::abs(nu + 1.0), s).k_scaled;
  }
  out[0] = k0;
  if (count > 1) out[1] = k1;
  for (int i = 2; i < count; ++i) {
    const double order = start + (i - 1);
    out[static_cast<std::size_t>(i)] =
        out[static_cast<std::size_t>(i - 2)] + 2.0 * order / s * out[static_cast<std::size_t>(i - 1)];
  }
  return out;
}

/// e^{-s} I_nu(s).
inline double bessel_I_scaled(BesselOrder order, double s) {
  if (!(s > 0.0)) throw DomainError("bessel_I: argument must be positive");
  const double nu = order.nu;
  const auto r = detail::bessel_ik_scaled(std::abs(nu), s);
  if (nu >= 0.0 || nu == std::floor(nu)) return r.i_scaled;
  // I_{-nu} = I_nu + (2/pi) sin(nu pi) K_nu
  const double k = r.k_scaled * std::exp(-2.0 * s);
  return r.i_scaled + 2.0 / std::numbers::pi * detail::sin_pi(std::abs(nu)) * k;
}

/// I_nu(s) as mantissa * e^{exponent}; never overflows.
inline ScaledReal bessel_I_ex(BesselOrder order, double s) { return {bessel_I_scaled(order, s), s}; }

/// Modified Bessel function of the first kind I_nu(s), s > 0.
/// Throws std::overflow_error past s = 700; use bessel_I_ex there.
inline double bessel_I(BesselOrder order, double s) {
  if (!(s > 0.0)) throw DomainError("bessel_I: argument must be positive");
  if (s > 700.0) throw std::overflow_error("bessel_I: use bessel_I_ex for s > 700");
  return bessel_I_scaled(order, s) * std::exp(s);
}

/// Fractional order gamma with a = 1 - 2 gamma and d_gamma.
/// Operator use requires gamma in (0,1); kernel experiments accept (-1,1) \ {0}
/// and carry `extended = true`.
struct FracOrder {
  double gamma = 0.5;
  double a = 0.0;
  double d_gamma = 1.0;
  bool extended = false;

  static FracOrder make(double g);
  static FracOrder make_extended(double g);
};

/// d_gamma = 2^{2 gamma - 1} Gamma(gamma) / Gamma(1 - gamma), gamma in (0,1).
inline double d_gamma(double g) {
  if (!(g > 0.0 && g < 1.0)) throw DomainError("d_gamma: gamma must lie in (0,1)");
  return std::exp2(2.0 * g - 1.0) * gamma_fn(g) / gamma_fn(1.0 - g);
}

inline FracOrder FracOrder::make(double g) {
  if (!(g > 0.0 && g < 1.0)) {
    throw DomainError("fractional order must lie in (0,1), got " + std::to_string(g));
  }
  return FracOrder{g, 1.0 - 2.0 * g, fraclap::d_gamma(g), false};
}

inline FracOrder FracOrder::make_extended(double g) {
  if (g > 0.0 && g < 1.0) return make(g);
  if (!(g > -1.0 && g < 1.0) || g == 0.0) {
    throw DomainError("extended fractional order must lie in (-1,1) \\ {0}, got " + std::to_string(g));
  }
  return FracOrder{g, 1.0 - 2.0 * g, std::numeric_limits<double>::quiet_NaN(), true};
}

/// Extension profile phi_gamma(s) = 2^{1-gamma}/Gamma(gamma) s^gamma K_gamma(s);
/// phi(0) = 1, decreasing to 0.
inline double phi_gamma(const FracOrder& g, double s) {
  if (s < 0.0) throw DomainError("phi_gamma: s must be non-negative");
  if (s == 0.0) return 1.0;
  const double gm = g.gamma;
  if (gm == 0.5) return std::exp(-s);
  const double log_pref = (1.0 - gm) * std::numbers::ln2 - std::log(gamma_fn(gm)) + gm * std::log(s) - s;
  return std::exp(log_pref) * bessel_K_scaled({gm}, s);
}

/// phi_gamma'(s) = -2^{1-gamma}/Gamma(gamma) s^gamma K_{1-gamma}(s).
inline double phi_gamma_derivative(const FracOrder& g, double s) {
  if (s < 0.0) throw DomainError("phi_gamma_derivative: s must be non-negative");
  const double gm = g.gamma;
  if (s == 0.0) {
    if (gm > 0.5) return 0.0;
    if (gm == 0.5) return -1.0;
    return -std::numeric_limits<double>::infinity();
  }
  if (gm == 0.5) return -std::exp(-s);
  const double log_pref = (1.0 - gm) * std::numbers::ln2 - std::log(gamma_fn(gm)) + gm * std::log(s) - s;
  return -std::exp(log_pref) * bessel_K_scaled({1.0 - gm}, s);
}

/// Lower incomplete gamma function gamma(a, x) by its power series; a > 0, 0 <= x <= 30.
inline double lower_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw DomainError("lower_incomplete_gamma: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x > 30.0) throw DomainError("lower_incomplete_gamma: series used only for x <= 30");
  // gamma(a,x) = x^a e^{-x} sum_k x^k / (a (a+1) ... (a+k))
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 1000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return std::exp(a * std::log(x) - x) * sum;
}

/// Result of a Richardson extrapolation over a halving step sequence.
struct RichardsonResult {
  double value = 0.0;
  double error_estimate = 0.0;
  /// |consecutive diagonal differences| shrink monotonically.
  bool stabilized = true;
};

/// Extrapolates samples v[k] = F(h0 2^{-k}) to h -> 0, assuming
/// F(h) = L + c1 h^{p1} + c2 h^{p2} + ... with the given exponents.
inline RichardsonResult richardson(std::span<const double> samples, std::span<const double> exponents) {
  if (samples.empty()) throw DomainError("richardson: no samples");
  std::vector<double> row(samples.begin(), samples.end());
  const std::size_t levels = std::min(exponents.size(), samples.size() - 1);
  std::vector<double> diag{row.back()};
  for (std::size_t j = 0; j < levels; ++j) {
    const double w = std::exp2(exponents[j]);
    std::vector<double> next;
    next.reserve(row.size() - 1);
    for (std::size_t k = 1; k < row.size(); ++k) next.push_back((w * row[k] - row[k - 1]) / (w - 1.0));
    row = std::move(next);
    diag.push_back(row.back());
  }
  RichardsonResult out;
  out.value = diag.back();
  if (diag.size() >= 2) out.error_estimate = std::abs(diag[diag.size() - 1] - diag[diag.size() - 2]);
  for (std::size_t i = 2; i < diag.size(); ++i) {
    const double prev = std::abs(diag[i - 1] - diag[i - 2]);
    const double cur = std::abs(diag[i] - diag[i - 1]);
    if (cur > prev * 1.5 + 1e-15 * std::abs(out.value)) out.stabilized = false;
  }
  return out;
}

/// Correction exponents of s^a phi_gamma'(s) near 0: {2k - 2gamma} U {2k}, k >= 1, ascending.
inline std::vector<double> extension_flux_exponents(double g, int count) {
  std::vector<double> e;
  for (int k = 1; static_cast<int>(e.size()) < 4 * count; ++k) {
    e.push_back(2.0 * k - 2.0 * g);
    e.push_back(2.0 * k);
  }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }), e.end());
  e.resize(static_cast<std::size_t>(count));
  return e;
}

/// Limit of s^a phi_gamma'(s) as s -> 0 by Richardson extrapolation on s = 2^{-k}.
inline RichardsonResult extension_profile_flux_limit(const FracOrder& g, int k_min = 2, int k_max = 14) {
  std::vector<double> samples;
  for (int k = k_min; k <= k_max; ++k) {
    const double s = std::exp2(-k);
    samples.push_back(std::pow(s, g.a) * phi_gamma_derivative(g, s));
  }
  const auto exps = extension_flux_exponents(g.gamma, static_cast<int>(samples.size()) - 1);
  return richardson(samples, exps);
}

/// Surface area of the unit sphere S^{m} in R^{m+1}.
inline double unit_sphere_area(int m) {
  const double h = 0.5 * (m + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / gamma_fn(h);
}

}  // namespace fraclap
