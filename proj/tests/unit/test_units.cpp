#include <doctest.h>

#include "swipt/errors.hpp"
#include "swipt/units.hpp"

using namespace swipt;

TEST_CASE("power parsing") {
  CHECK(units::parse_power("-50dBm") == doctest::Approx(1e-8).epsilon(1e-14));
  CHECK(units::parse_power("30dBm") == doctest::Approx(1.0));
  CHECK(units::parse_power("1.5mW") == doctest::Approx(1.5e-3));
  CHECK(units::parse_power("2e-5W") == 2e-5);
  CHECK(units::parse_power("2e-5") == 2e-5);
  CHECK(units::parse_power(" 3 mW ") == doctest::Approx(3e-3));
  CHECK_THROWS_AS(units::parse_power("5 parsecs"), InputError);
  CHECK_THROWS_AS(units::parse_power("abc"), InputError);
  CHECK_THROWS_AS(units::parse_power("-1W"), InputError);
  CHECK(units::watts_to_dbm(units::dbm_to_watts(-37.5)) == doctest::Approx(-37.5));
}

TEST_CASE("gain, frequency, distance") {
  CHECK(units::parse_gain("20dB") == doctest::Approx(100.0));
  CHECK(units::parse_gain("100") == 100.0);
  CHECK_THROWS_AS(units::parse_gain("0"), InputError);
  CHECK(units::parse_frequency("100GHz") == doctest::Approx(1e11));
  CHECK(units::parse_frequency("0.1THz") == doctest::Approx(1e11));
  CHECK(units::parse_frequency("1e11") == 1e11);
  CHECK(units::parse_distance("30cm") == doctest::Approx(0.3));
  CHECK(units::parse_distance("0.3m") == 0.3);
  CHECK_THROWS_AS(units::parse_distance("-1m"), InputError);
  CHECK_THROWS_AS(units::parse_frequency("1 furlong"), InputError);
}
