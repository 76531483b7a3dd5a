#include "swipt/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "swipt/errors.hpp"

namespace swipt {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void validate(const LinkBudget& lb) {
  const bool ok = lb.g_tx > 0.0 && lb.g_rx > 0.0 && lb.f_c > 0.0 && lb.d > 0.0 && lb.c_l > 0.0 &&
                  lb.rician_k >= 0.0 && std::isfinite(lb.g_tx * lb.g_rx * lb.f_c * lb.d * lb.c_l);
  if (!ok) throw InvariantError("link budget: gains, frequency, distance and c_l must be positive, K >= 0");
}

double large_scale_gain(const LinkBudget& lb) {
  validate(lb);
  return lb.c_l / (4.0 * std::numbers::pi * lb.d * lb.f_c) * std::sqrt(lb.g_tx * lb.g_rx);
}

std::mt19937_64 realization_stream(std::uint64_t master_seed, std::uint64_t index) {
  const std::uint64_t a = splitmix64(master_seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
  return std::mt19937_64(seq);
}

double sample_small_scale(double rician_k, std::mt19937_64& gen) {
  if (!(rician_k >= 0.0)) throw DomainError("sample_small_scale: Rician factor must be >= 0");
  const double los = std::sqrt(rician_k / (rician_k + 1.0));
  const double sd = std::sqrt(0.5 / (rician_k + 1.0));  // per real dimension
  std::normal_distribution<double> normal(0.0, sd);
  const double re = los + normal(gen);
  const double im = normal(gen);
  return std::hypot(re, im);
}

double effective_amplitude_cap(double amplitude, double h_mag, double rho_max_watts) {
  if (!(amplitude > 0.0 && h_mag > 0.0 && rho_max_watts > 0.0)) {
    throw DomainError("effective_amplitude_cap: arguments must be positive");
  }
  return std::min(amplitude, std::sqrt(rho_max_watts) / h_mag);
}

}  // namespace swipt
