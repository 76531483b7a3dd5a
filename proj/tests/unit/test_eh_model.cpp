#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "swipt/eh_model.hpp"
#include "swipt/errors.hpp"

using namespace swipt;

TEST_CASE("reference model golden values") {
  const EhModel m = EhModel::reference_rtd();
  CHECK(eval_psi(m, 0.0) == 0.0);
  // 50-digit references.
  CHECK(eval_psi(m, 1.8) == doctest::Approx(7.150582699227205e-5).epsilon(1e-14));
  CHECK(eval_psi(m, 2.4) == doctest::Approx(2.83287707763765e-5).epsilon(1e-13));
  CHECK(eval_psi(m, 0.9) == doctest::Approx(7.139620707916561e-5).epsilon(1e-14));
  CHECK(m.segments().size() == 2);
  CHECK(m.segments()[0].increasing());
  CHECK_FALSE(m.segments()[1].increasing());
}

TEST_CASE("psi is continuous at the breakpoint") {
  const EhModel m = EhModel::reference_rtd();
  const double left = m.segments()[0].eval(1.8);
  const double right = eval_psi(m, 1.8);
  CHECK(left == right);
  CHECK(std::fabs(eval_psi(m, 1.8 - 1e-12) - right) < 1e-15);
}

TEST_CASE("breakdown and domain errors") {
  const EhModel m = EhModel::reference_rtd();
  CHECK_THROWS_AS(eval_psi(m, 2.4000001), BreakdownError);
  CHECK_THROWS_AS(eval_psi(m, -1.0), DomainError);
  CHECK(eval_psi_watts(m, 1.8e-3) == eval_psi(m, 1.8));
}

TEST_CASE("p_max") {
  const EhModel m = EhModel::reference_rtd();
  CHECK(p_max(m, 2.4) == eval_psi(m, 1.8));
  CHECK(p_max(m, 1.0) == eval_psi(m, 1.0));
  CHECK(p_max(m, 0.0) == 0.0);
  CHECK_THROWS_AS(p_max(m, 3.0), BreakdownError);
}

TEST_CASE("first segment inverse round trip") {
  const EhModel m = EhModel::reference_rtd();
  for (double rho : {1e-6, 1e-3, 0.05, 0.3, 1.0, 1.7, 1.8}) {
    const double back = invert_first_segment(m, eval_psi(m, rho));
    // psi is very flat near the peak, so compare in psi.
    CHECK(eval_psi(m, back) == doctest::Approx(eval_psi(m, rho)).epsilon(1e-13));
  }
  CHECK(invert_first_segment(m, 0.0) == 0.0);
  CHECK(invert_first_segment(m, first_segment_peak(m)) == 1.8);
  CHECK_THROWS_AS(invert_first_segment(m, 1e-3), RangeError);
}

TEST_CASE("construction invariants") {
  const LogisticShape up{7e-5, 1.4, 0.8, 2000};
  const LogisticShape down{2e-5, 1.8, 0.4, 900};
  CHECK_NOTHROW(EhModel({1.0}, {up, down}, 2.0));
  CHECK_THROWS_AS(EhModel({1.0}, {up, up}, 2.0), InvariantError);
  CHECK_THROWS_AS(EhModel({1.0}, {down, down}, 2.0), InvariantError);
  CHECK_THROWS_AS(EhModel({2.5}, {up, down}, 2.0), InvariantError);
  CHECK_THROWS_AS(EhModel({}, {up, down}, 2.0), InvariantError);
  CHECK_THROWS_AS(EhModel({1.0}, {up, LogisticShape{2e-5, -1.0, 0.4, 900}}, 2.0), InvariantError);
  try {
    EhModel({1.0}, {up, up}, 2.0);
  } catch (const InvariantError& e) {
    CHECK(std::string(e.what()).find("monotonic") != std::string::npos);
  }
}

TEST_CASE("unit handling") {
  const EhModel mw = EhModel::reference_rtd();
  std::vector<LogisticShape> shapes;
  for (const auto& s : mw.segments()) {
    // theta (rho_mW)^alpha = theta (1e3 rho_W)^alpha
    shapes.push_back({s.shape.asymptote, s.shape.alpha, s.shape.beta, s.shape.theta * std::pow(1e3, s.shape.alpha)});
  }
  const EhModel w({1.8e-3}, shapes, 2.4e-3, RhoUnit::watt);
  CHECK(eval_psi(w, 1.2e-3) == doctest::Approx(eval_psi(mw, 1.2)).epsilon(1e-12));
  CHECK(w.rho_max_watts() == mw.rho_max_watts());
}

TEST_CASE("model JSON round trip is exact") {
  const EhModel m = EhModel::reference_rtd();
  const EhModel back = parse_model(serialize_model(m));
  REQUIRE(back.segments().size() == m.segments().size());
  for (double rho = 0.0; rho <= 2.4; rho += 0.01) CHECK(eval_psi(back, rho) == eval_psi(m, rho));
  const auto path = std::filesystem::temp_directory_path() / "swipt_model_roundtrip.json";
  save_model(m, path);
  CHECK(eval_psi(load_model(path), 2.0) == eval_psi(m, 2.0));
  std::filesystem::remove(path);
}

TEST_CASE("model JSON schema errors name the field") {
  auto message = [](const std::string& text) {
    try {
      parse_model(text);
    } catch (const SchemaError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("{").find("JSON") != std::string::npos);
  CHECK(message(R"({"units":{"rho":"mW","power":"W"},"rho_max":2.4,"breakpoints":[1.8],"segments":[)"
                R"({"B":7.16e-5,"alpha":1.432,"beta":0.778,"theta":2174.86},{"B":2.5e-5,"alpha":1.841,"beta":0.445}]})")
            .find("segments[1].theta") != std::string::npos);
  CHECK(message(R"({"units":{"rho":"dBm","power":"W"},"rho_max":2.4,"breakpoints":[],"segments":[]})")
            .find("units.rho") != std::string::npos);
  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), InputError);
}
