#pragma once

#include <cstdint>
#include <random>

namespace swipt {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Line-of-sight link: h = h_tilde * h_hat with
/// h_tilde = c / (4 pi d f_c) * sqrt(G_T G_R) and Rician small-scale h_hat.
struct LinkBudget {
  double g_tx = 100.0;
  double g_rx = 100.0;
  double f_c = 100e9;     // Hz
  double d = 0.3;         // m
  double c_l = kSpeedOfLight;
  double rician_k = 1.0;  // line-of-sight to scattered power ratio
};

void validate(const LinkBudget& lb);

double large_scale_gain(const LinkBudget& lb);

/// Independent generator for realization `index`, derived from the master
/// seed with a counter-based mix so parallel draws do not depend on order.
std::mt19937_64 realization_stream(std::uint64_t master_seed, std::uint64_t index);

/// |h_hat| with h_hat = sqrt(K/(K+1)) + w, w ~ CN(0, 1/(K+1)); E|h_hat|^2 = 1.
double sample_small_scale(double rician_k, std::mt19937_64& gen);

/// min(A, sqrt(rho_max)/|h|): the largest amplitude respecting both the power
/// amplifier bound and breakdown. rho_max in watts.
double effective_amplitude_cap(double amplitude, double h_mag, double rho_max_watts);

}  // namespace swipt
