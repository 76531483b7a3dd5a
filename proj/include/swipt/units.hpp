#pragma once

#include <string_view>

namespace swipt::units {

/// "1e-8", "1e-8W", "0.5mW", "-50dBm" -> watts. Bare numbers are watts.
double parse_power(std::string_view text);

/// "100" (linear) or "20dB" -> linear gain.
double parse_gain(std::string_view text);

/// "1e11", "100GHz", "0.1THz", "1e11Hz" -> hertz.
double parse_frequency(std::string_view text);

/// "0.3", "0.3m", "30cm", "300mm" -> metres.
double parse_distance(std::string_view text);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace swipt::units
