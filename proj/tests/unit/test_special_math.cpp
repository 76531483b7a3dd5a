#include <doctest.h>

#include <cmath>

#include "swipt/errors.hpp"
#include "swipt/special_math.hpp"

using namespace swipt;

namespace {

// Maclaurin series of erfi in long double, summed until the terms vanish.
long double erfi_series(long double z) {
  long double term = z;
  long double sum = 0.0L;
  for (int n = 0; n < 400; ++n) {
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
    term *= z * z / (n + 1);
  }
  return 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * sum;
}

}  // namespace

TEST_CASE("erfi golden values") {
  // Reference values computed with 50-digit arithmetic.
  CHECK(math::erfi(1.0) == doctest::Approx(1.650425758797542876).epsilon(1e-15));
  CHECK(math::erfi(3.0) == doctest::Approx(1629.9946226015657).epsilon(1e-14));
  CHECK(math::log_erfi(10.0) == doctest::Approx(97.130114063608888).epsilon(1e-15));
  CHECK(math::erfi(0.0) == 0.0);
}

TEST_CASE("erfi agrees with the long-double series across branches") {
  for (double z = 0.05; z <= 6.0; z += 0.05) {
    const double ref = static_cast<double>(erfi_series(z));
    CHECK(std::fabs(math::erfi(z) - ref) <= 2e-14 * ref);
  }
}

TEST_CASE("log_erfi is continuous across the branch switches") {
  for (double z : {3.0, 6.0}) {
    const double a = math::log_erfi(z * (1 - 1e-12));
    const double b = math::log_erfi(z * (1 + 1e-12));
    // d/dz ln erfi(z) is about 2z here.
    CHECK(std::fabs(a - b) < 4 * z * z * 1e-12 + 1e-13);
  }
}

TEST_CASE("erfi domain and overflow") {
  CHECK_THROWS_AS(math::erfi(-1.0), DomainError);
  CHECK_THROWS_AS(math::erfi(28.0), RangeError);
  CHECK(std::isfinite(math::log_erfi(28.0)));
  // The ratio form has no overflow: ln(erfi(z) sqrt(pi)/(2z)) ~ z^2 - 2 ln z - ln 2.
  CHECK(math::log_erfi_ratio(1e4) == doctest::Approx(1e8 - 2 * std::log(1e4) - std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("log_erfi_ratio small-z expansion") {
  // erfi(z) sqrt(pi) / (2z) = 1 + z^2/3 + z^4/10 + ...
  const double z = 1e-4;
  CHECK(math::log_erfi_ratio(z) == doctest::Approx(z * z / 3.0).epsilon(1e-8));
  CHECK(math::log_erfi_ratio(0.0) == 0.0);
}

TEST_CASE("dawson function") {
  CHECK(math::dawson(1.0) == doctest::Approx(0.53807950691276841914).epsilon(1e-14));
  CHECK(math::dawson(10.0) == doctest::Approx(0.050253847187598).epsilon(1e-12));
}

TEST_CASE("gaussian entropy") {
  CHECK(math::gaussian_entropy(1.0) == doctest::Approx(0.5 * std::log(2 * M_PI * M_E)));
  CHECK_THROWS_AS(math::gaussian_entropy(0.0), DomainError);
}

TEST_CASE("simpson integrates cubics exactly") {
  const double v = math::integrate([](double x) { return x * x * x - 2 * x; }, 0.0, 2.0, {64});
  CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(math::integrate([](double x) { return x; }, 0.0, 1.0, {63}), DomainError);
}

TEST_CASE("bisect") {
  const double r = math::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-15);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(math::bisect([](double x) { return x * x + 1.0; }, 0.0, 2.0, 1e-12), BracketError);
  CHECK(math::bisect([](double x) { return x; }, 0.0, 1.0, 1e-12) == 0.0);
}
