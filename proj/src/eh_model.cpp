#include "swipt/eh_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "swipt/errors.hpp"

namespace swipt {

std::string_view to_string(RhoUnit unit) { return unit == RhoUnit::milliwatt ? "mW" : "W"; }

RhoUnit parse_rho_unit(std::string_view text) {
  if (text == "mW") return RhoUnit::milliwatt;
  if (text == "W") return RhoUnit::watt;
  throw SchemaError("units.rho: expected \"mW\" or \"W\", got \"" + std::string(text) + "\"");
}

double LogisticSegment::eval(double rho) const {
  const double offset = rho - rho_lo;
  if (offset <= 0.0) return phi;
  // 1 - (1 + theta u^alpha)^(-beta), formed without cancellation for small u.
  const double rise = -std::expm1(-shape.beta * std::log1p(shape.theta * std::pow(offset, shape.alpha)));
  return phi + (shape.asymptote - phi) * rise;
}

EhModel::EhModel(std::vector<double> breakpoints, std::vector<LogisticShape> shapes, double rho_max,
                 RhoUnit rho_unit)
    : rho_max_(rho_max), rho_unit_(rho_unit) {
  if (!(std::isfinite(rho_max) && rho_max > 0.0)) throw InvariantError("rho_max must be finite and positive");
  if (shapes.empty()) throw InvariantError("model needs at least one segment");
  if (shapes.size() != breakpoints.size() + 1) {
    throw InvariantError("segment count must equal breakpoint count + 1");
  }
  segments_.reserve(shapes.size());
  double lo = 0.0;
  double phi = 0.0;
  for (std::size_t n = 0; n < shapes.size(); ++n) {
    const double hi = n + 1 < shapes.size() ? breakpoints[n] : rho_max;
    const std::string where = "segment " + std::to_string(n + 1);
    if (!(std::isfinite(hi) && lo < hi)) throw InvariantError(where + ": rho_lo < rho_hi violated");
    const LogisticShape& s = shapes[n];
    if (!(std::isfinite(s.asymptote) && std::isfinite(s.alpha) && std::isfinite(s.beta) && std::isfinite(s.theta))) {
      throw InvariantError(where + ": parameters must be finite");
    }
    if (!(s.alpha > 0.0 && s.beta > 0.0 && s.theta > 0.0)) {
      throw InvariantError(where + ": alpha, beta, theta > 0 violated");
    }
    LogisticSegment seg{s, lo, hi, phi};
    const bool want_increasing = n % 2 == 0;
    const bool ok = want_increasing ? s.asymptote > phi : s.asymptote < phi;
    if (!ok) {
      throw InvariantError(where + ": alternating monotonicity violated (expected " +
                           (want_increasing ? "increasing, B > Phi" : "decreasing, B < Phi") + ")");
    }
    segments_.push_back(seg);
    phi = seg.eval(hi);
    lo = hi;
  }
}

EhModel EhModel::reference_rtd() {
  return EhModel({1.8},
                 {LogisticShape{7.16e-5, 1.432, 0.778, 2174.86}, LogisticShape{2.5e-5, 1.841, 0.445, 956.75}},
                 2.4, RhoUnit::milliwatt);
}

std::vector<double> EhModel::breakpoints() const {
  std::vector<double> out;
  for (std::size_t n = 1; n < segments_.size(); ++n) out.push_back(segments_[n].rho_lo);
  return out;
}

double EhModel::watts_per_unit() const { return rho_unit_ == RhoUnit::milliwatt ? 1e-3 : 1.0; }

std::size_t EhModel::segment_index(double rho) const {
  const auto it = std::upper_bound(segments_.begin(), segments_.end(), rho,
                                   [](double r, const LogisticSegment& s) { return r < s.rho_lo; });
  return it == segments_.begin() ? 0 : static_cast<std::size_t>(it - segments_.begin()) - 1;
}

double eval_psi(const EhModel& model, double rho) {
  if (!(rho >= 0.0)) throw DomainError("eval_psi: rho must be >= 0");
  if (rho > model.rho_max()) {
    throw BreakdownError("eval_psi: rho = " + std::to_string(rho) + " exceeds rho_max = " +
                         std::to_string(model.rho_max()) + " (diode breakdown)");
  }
  return model.segments()[model.segment_index(rho)].eval(rho);
}

double eval_psi_watts(const EhModel& model, double rho_watts) {
  return eval_psi(model, model.to_model_units(rho_watts));
}

double p_max(const EhModel& model, double rho_cap) {
  if (!(rho_cap >= 0.0)) throw DomainError("p_max: rho_cap must be >= 0");
  if (rho_cap > model.rho_max()) throw BreakdownError("p_max: rho_cap exceeds rho_max");
  double best = eval_psi(model, rho_cap);
  for (const LogisticSegment& seg : model.segments()) {
    if (seg.rho_lo > rho_cap) break;
    if (seg.increasing()) best = std::max(best, seg.eval(std::min(seg.rho_hi, rho_cap)));
  }
  return best;
}

double first_segment_peak(const EhModel& model) {
  const LogisticSegment& first = model.segments().front();
  return first.eval(first.rho_hi);
}

double invert_first_segment(const EhModel& model, double target) {
  const LogisticSegment& seg = model.segments().front();
  const double peak = seg.eval(seg.rho_hi);
  if (!(target >= seg.phi)) throw RangeError("invert_first_segment: target below psi(0)");
  if (target > peak) {
    throw RangeError("invert_first_segment: target " + std::to_string(target) +
                     " W exceeds the first-segment maximum " + std::to_string(peak) + " W");
  }
  if (target == peak) return seg.rho_hi;
  if (target == seg.phi) return seg.rho_lo;
  const double frac = (target - seg.phi) / (seg.shape.asymptote - seg.phi);
  // (1 - frac)^(-1/beta) - 1 = theta u^alpha
  const double scaled = std::expm1(-std::log1p(-frac) / seg.shape.beta);
  const double rho = seg.rho_lo + std::pow(scaled / seg.shape.theta, 1.0 / seg.shape.alpha);
  return std::min(rho, seg.rho_hi);
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using nlohmann::json;

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError((path.empty() ? key : path + "." + key) + ": missing field");
  return *it;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw SchemaError((path.empty() ? key : path + "." + key) + ": expected a number");
  return v.get<double>();
}

}  // namespace

std::string serialize_model(const EhModel& model) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"units\": {\"rho\": \"" << to_string(model.rho_unit()) << "\", \"power\": \"W\"},\n";
  out << "  \"rho_max\": " << num(model.rho_max()) << ",\n";
  out << "  \"breakpoints\": [";
  const auto bps = model.breakpoints();
  for (std::size_t i = 0; i < bps.size(); ++i) out << (i ? ", " : "") << num(bps[i]);
  out << "],\n";
  out << "  \"segments\": [\n";
  const auto segs = model.segments();
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const LogisticShape& s = segs[i].shape;
    out << "    {\"B\": " << num(s.asymptote) << ", \"alpha\": " << num(s.alpha) << ", \"beta\": " << num(s.beta)
        << ", \"theta\": " << num(s.theta) << "}" << (i + 1 < segs.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

EhModel parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("model file is not valid JSON: ") + e.what());
  }
  const json& units = field(doc, "units", "");
  const json& rho_unit = field(units, "rho", "units");
  if (!rho_unit.is_string()) throw SchemaError("units.rho: expected a string");
  const json& power_unit = field(units, "power", "units");
  if (!power_unit.is_string() || power_unit.get<std::string>() != "W") {
    throw SchemaError("units.power: only \"W\" is supported");
  }
  const double rho_max = number(doc, "rho_max", "");

  const json& bps = field(doc, "breakpoints", "");
  if (!bps.is_array()) throw SchemaError("breakpoints: expected an array");
  std::vector<double> breakpoints;
  for (std::size_t i = 0; i < bps.size(); ++i) {
    if (!bps[i].is_number()) throw SchemaError("breakpoints[" + std::to_string(i) + "]: expected a number");
    breakpoints.push_back(bps[i].get<double>());
  }

  const json& segs = field(doc, "segments", "");
  if (!segs.is_array()) throw SchemaError("segments: expected an array");
  std::vector<LogisticShape> shapes;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string path = "segments[" + std::to_string(i) + "]";
    shapes.push_back({number(segs[i], "B", path), number(segs[i], "alpha", path), number(segs[i], "beta", path),
                      number(segs[i], "theta", path)});
  }
  return EhModel(std::move(breakpoints), std::move(shapes), rho_max, parse_rho_unit(rho_unit.get<std::string>()));
}

EhModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_model(text.str());
}

void save_model(const EhModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file " + path.string());
  out << serialize_model(model);
}

}  // namespace swipt
