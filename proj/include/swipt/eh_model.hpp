#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace swipt {

/// Unit of the logistic argument rho. Harvested power is always in watts.
enum class RhoUnit { milliwatt, watt };

std::string_view to_string(RhoUnit unit);
RhoUnit parse_rho_unit(std::string_view text);

/// Four free shape parameters of one 5-parameter logistic segment.
struct LogisticShape {
  double asymptote = 0.0;  // B, watts
  double alpha = 1.0;
  double beta = 1.0;
  double theta = 1.0;
};

/// One monotone piece of psi on [rho_lo, rho_hi):
///   phi(rho) = B + (Phi - B) * (1 + theta (rho - rho_lo)^alpha)^(-beta)
/// Phi is the value at the left end and is inherited from the previous piece.
struct LogisticSegment {
  LogisticShape shape;
  double rho_lo = 0.0;
  double rho_hi = 0.0;
  double phi = 0.0;

  double eval(double rho) const;
  bool increasing() const { return shape.asymptote > phi; }
};

/// Piecewise non-linear energy-harvesting transfer function psi(rho) on
/// [0, rho_max]. Immutable once built; the constructor derives every Phi from
/// the previous segment and rejects models that break the partition,
/// continuity or alternating-monotonicity invariants.
class EhModel {
 public:
  EhModel(std::vector<double> breakpoints, std::vector<LogisticShape> shapes, double rho_max,
          RhoUnit rho_unit = RhoUnit::milliwatt);

  /// Two-segment RTD receiver model with rho in milliwatts.
  static EhModel reference_rtd();

  std::span<const LogisticSegment> segments() const { return segments_; }
  std::vector<double> breakpoints() const;
  double rho_max() const { return rho_max_; }
  RhoUnit rho_unit() const { return rho_unit_; }

  /// Watts per model unit of rho.
  double watts_per_unit() const;
  double to_model_units(double watts) const { return watts / watts_per_unit(); }
  double to_watts(double rho) const { return rho * watts_per_unit(); }
  double rho_max_watts() const { return to_watts(rho_max_); }

  /// Segment containing rho: boundaries belong to the right-hand segment,
  /// rho_max to the last one.
  std::size_t segment_index(double rho) const;

 private:
  std::vector<LogisticSegment> segments_;
  double rho_max_;
  RhoUnit rho_unit_;
};

/// psi(rho) in watts; rho in model units. Throws BreakdownError above rho_max.
double eval_psi(const EhModel& model, double rho);

/// psi evaluated at a received power given in watts.
double eval_psi_watts(const EhModel& model, double rho_watts);

/// max of psi over [0, rho_cap] (model units).
double p_max(const EhModel& model, double rho_cap);

/// Largest value of the first (increasing) segment.
double first_segment_peak(const EhModel& model);

/// Unique rho in the first segment with psi(rho) = target (closed-form 5PL
/// inverse). Throws RangeError when target exceeds the first-segment peak.
double invert_first_segment(const EhModel& model, double target);

EhModel parse_model(std::string_view json_text);
std::string serialize_model(const EhModel& model);
EhModel load_model(const std::filesystem::path& path);
void save_model(const EhModel& model, const std::filesystem::path& path);

}  // namespace swipt
