#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>

#include "swipt/errors.hpp"

namespace swipt::math {

inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kTwoOverSqrtPi = 2.0 / kSqrtPi;

/// Imaginary error function erfi(z) = (2/sqrt(pi)) * int_0^z exp(t^2) dt.
/// Domain 0 <= z <= 30; throws RangeError where the value overflows a double
/// (z above roughly 26.7).
double erfi(double z);

/// ln(erfi(z)) for 0 < z <= 30 without overflow.
double log_erfi(double z);

/// ln(erfi(z) * sqrt(pi) / (2 z)), the log of erfi relative to its leading
/// Maclaurin term. Zero at z = 0 and equal to z^2 + ln(D(z)/z) for large z.
/// Valid for any finite z >= 0 (no upper cap); used by the multiplier solver
/// to evaluate the moment equation without cancellation.
double log_erfi_ratio(double z);

/// Dawson's integral D(z) = exp(-z^2) * int_0^z exp(t^2) dt, z >= 0.
double dawson(double z);

/// Differential entropy of N(0, sigma2) in nats.
double gaussian_entropy(double sigma2);

/// Standard normal cdf and survival function, both accurate in the tails.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

inline double normal_pdf(double x, double mean, double sd) {
  const double u = (x - mean) / sd;
  return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

struct QuadratureSpec {
  int panel_count = 4096;  // composite Simpson; even, >= 64
};

void validate(const QuadratureSpec& spec);

/// Composite Simpson estimate of int_lo^hi f.
template <class F>
double integrate(F&& f, double lo, double hi, QuadratureSpec spec = {}) {
  validate(spec);
  if (!(lo <= hi)) throw DomainError("integrate: lo must not exceed hi");
  if (lo == hi) return 0.0;
  const int n = spec.panel_count;
  const double h = (hi - lo) / n;
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < n; ++i) {
    const double v = f(lo + i * h);
    if (i % 2) {
      odd += v;
    } else {
      even += v;
    }
  }
  return h / 3.0 * (f(lo) + 4.0 * odd + 2.0 * even + f(hi));
}

/// Bisection on a sign-changing bracket. Stops when the bracket width is at
/// most tol * max(1, |x|) or can no longer shrink in floating point.
template <class G>
double bisect(G&& g, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw DomainError("bisect: tol must be positive");
  if (lo > hi) std::swap(lo, hi);
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) {
    throw BracketError("bisect: g has the same sign at both ends of [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  for (;;) {
    const double mid = lo + 0.5 * (hi - lo);
    if (hi - lo <= tol * std::fmax(1.0, std::fabs(mid)) || mid <= lo || mid >= hi) return mid;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
}

}  // namespace swipt::math
