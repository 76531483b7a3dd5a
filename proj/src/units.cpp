#include "swipt/units.hpp"

#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "swipt/errors.hpp"

namespace swipt::units {
namespace {

struct Suffix {
  std::string_view name;
  double scale;
};

// Splits "<number><suffix>" and returns the number together with the suffix.
std::pair<double, std::string_view> split(std::string_view text, std::string_view what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || !std::isfinite(value)) {
    throw InputError("cannot parse " + std::string(what) + " \"" + std::string(text) + "\"");
  }
  std::string_view rest(ptr, static_cast<std::size_t>(end - ptr));
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  return {value, rest};
}

template <std::size_t N>
double scaled(std::string_view text, std::string_view what, const Suffix (&table)[N]) {
  const auto [value, rest] = split(text, what);
  for (const Suffix& s : table) {
    if (rest == s.name) return value * s.scale;
  }
  throw InputError("unknown " + std::string(what) + " unit \"" + std::string(rest) + "\" in \"" + std::string(text) +
                   "\"");
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double parse_power(std::string_view text) {
  const auto [value, rest] = split(text, "power");
  if (rest == "dBm") return dbm_to_watts(value);
  static constexpr Suffix table[] = {{"", 1.0}, {"W", 1.0}, {"mW", 1e-3}, {"uW", 1e-6}, {"nW", 1e-9}};
  const double watts = scaled(text, "power", table);
  if (watts < 0.0) throw InputError("power must be >= 0: \"" + std::string(text) + "\"");
  return watts;
}

double parse_gain(std::string_view text) {
  const auto [value, rest] = split(text, "gain");
  if (rest == "dB" || rest == "dBi") return std::pow(10.0, value / 10.0);
  if (!rest.empty()) throw InputError("unknown gain unit \"" + std::string(rest) + "\"");
  if (!(value > 0.0)) throw InputError("linear gain must be > 0: \"" + std::string(text) + "\"");
  return value;
}

double parse_frequency(std::string_view text) {
  static constexpr Suffix table[] = {{"", 1.0}, {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}};
  const double hz = scaled(text, "frequency", table);
  if (!(hz > 0.0)) throw InputError("frequency must be > 0: \"" + std::string(text) + "\"");
  return hz;
}

double parse_distance(std::string_view text) {
  static constexpr Suffix table[] = {{"", 1.0}, {"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"km", 1e3}};
  const double m = scaled(text, "distance", table);
  if (!(m > 0.0)) throw InputError("distance must be > 0: \"" + std::string(text) + "\"");
  return m;
}

}  // namespace swipt::units
