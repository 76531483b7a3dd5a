#include "swipt/special_math.hpp"

#include <cmath>
#include <limits>

namespace swipt::math {
namespace {

constexpr double kSeriesLimit = 3.0;
constexpr double kAsymptoticFrom = 6.0;

// sum_{k>=1} z^{2k} / (k! (2k+1)), i.e. S(z) - 1 where erfi(z) = 2z S(z)/sqrt(pi).
double maclaurin_tail(double z) {
  const double z2 = z * z;
  double power = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    power *= z2 / k;
    const double term = power / (2 * k + 1);
    sum += term;
    if (term <= 1e-18 * sum) break;
  }
  return sum;
}

// D(z)/z as the mean of 1/(2K+1) under K ~ Poisson(z^2). The weights are
// accumulated relative to the mode and self-normalised, so no factorials
// or exp(-z^2) are ever formed.
double dawson_over_z_poisson(double z) {
  const double lambda = z * z;
  const auto mode = static_cast<long>(std::floor(lambda));
  double weight_sum = 1.0;
  double ratio_sum = 1.0 / (2.0 * mode + 1.0);
  double u = 1.0;
  for (long k = mode + 1;; ++k) {
    u *= lambda / k;
    weight_sum += u;
    ratio_sum += u / (2.0 * k + 1.0);
    if (u < 1e-20 * weight_sum) break;
  }
  u = 1.0;
  for (long k = mode; k > 0; --k) {
    u *= k / lambda;
    weight_sum += u;
    ratio_sum += u / (2.0 * (k - 1) + 1.0);
    if (u < 1e-20 * weight_sum) break;
  }
  return ratio_sum / weight_sum;
}

// D(z)/z from the asymptotic series (1/(2z^2)) sum (2k-1)!!/(2z^2)^k,
// truncated at the smallest term.
double dawson_over_z_asymptotic(double z) {
  const double two_z2 = 2.0 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 400; ++k) {
    const double next = term * (2.0 * k - 1.0) / two_z2;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum / two_z2;
}

double dawson_over_z(double z) {
  return z < kAsymptoticFrom ? dawson_over_z_poisson(z) : dawson_over_z_asymptotic(z);
}

void require_finite_nonnegative(double z, const char* what) {
  if (!std::isfinite(z) || z < 0.0) throw DomainError(std::string(what) + ": argument must be finite and >= 0");
}

}  // namespace

double log_erfi_ratio(double z) {
  require_finite_nonnegative(z, "log_erfi_ratio");
  if (z <= kSeriesLimit) return std::log1p(maclaurin_tail(z));
  return z * z + std::log(dawson_over_z(z));
}

double erfi(double z) {
  require_finite_nonnegative(z, "erfi");
  if (z > 30.0) throw DomainError("erfi: argument above 30");
  if (z <= kSeriesLimit) return kTwoOverSqrtPi * z * (1.0 + maclaurin_tail(z));
  const double log_value = std::log(kTwoOverSqrtPi * z) + log_erfi_ratio(z);
  if (log_value >= std::log(std::numeric_limits<double>::max())) {
    throw RangeError("erfi: value overflows double for z = " + std::to_string(z));
  }
  return std::exp(log_value);
}

double log_erfi(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("log_erfi: argument must be > 0");
  if (z > 30.0) throw DomainError("log_erfi: argument above 30");
  return std::log(kTwoOverSqrtPi * z) + log_erfi_ratio(z);
}

double dawson(double z) {
  require_finite_nonnegative(z, "dawson");
  if (z <= kSeriesLimit) return z * std::exp(-z * z) * (1.0 + maclaurin_tail(z));
  return z * dawson_over_z(z);
}

double gaussian_entropy(double sigma2) {
  if (!(sigma2 > 0.0)) throw DomainError("gaussian_entropy: variance must be positive");
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma2);
}

void validate(const QuadratureSpec& spec) {
  if (spec.panel_count < 64 || spec.panel_count % 2 != 0) {
    throw DomainError("QuadratureSpec: panel_count must be even and >= 64");
  }
}

}  // namespace swipt::math
