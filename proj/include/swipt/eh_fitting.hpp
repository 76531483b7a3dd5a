#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "swipt/eh_model.hpp"
#include "swipt/errors.hpp"

namespace swipt {

/// One (rho, P_h) point of a measured or simulated transfer curve.
struct TransferSample {
  double rho = 0.0;  // model units
  double p_h = 0.0;  // watts
};

struct FitReport {
  EhModel model;
  double rmse = 0.0;  // watts, over all samples
  std::vector<double> per_segment_rmse;
  std::vector<int> per_segment_evaluations;
  int iterations = 0;  // total objective evaluations
};

struct FitOptions {
  int restarts = 16;
  int max_evaluations = 20000;  // per restart
  std::uint64_t seed = 20240501;
};

/// Raised when no restart converged; carries the best model found.
class FitError : public NumericError {
 public:
  FitError(const std::string& what, FitReport best) : NumericError(what), best_(std::move(best)) {}
  const FitReport& best_so_far() const { return best_; }

 private:
  FitReport best_;
};

/// Interior local extrema of the moving-average-smoothed curve. Samples must be
/// sorted by rho; window is odd and >= 3. Each extremum is snapped to the raw
/// sample of the same kind (max/min) within one window of the smoothed one.
std::vector<double> detect_breakpoints(std::span<const TransferSample> samples, std::size_t window = 5);

/// Moves each breakpoint into one of the two sample gaps next to it, wherever
/// a refit has the smallest RMSE (golden-section search per gap, reduced
/// restarts). Detected breakpoints sit on samples; the kink usually does not.
std::vector<double> refine_breakpoints(std::span<const TransferSample> samples, std::span<const double> breakpoints,
                                       double rho_max, RhoUnit rho_unit = RhoUnit::milliwatt,
                                       const FitOptions& options = {});

/// Per-segment least squares fit of {B, alpha, beta, theta}, left to right,
/// with Phi of each segment taken from the fitted previous segment.
FitReport fit_model(std::span<const TransferSample> samples, std::span<const double> breakpoints, double rho_max,
                    RhoUnit rho_unit = RhoUnit::milliwatt, const FitOptions& options = {});

/// Reads `rho,p_h` CSV (header required, `#` comments allowed). Throws
/// InputError naming the offending line.
std::vector<TransferSample> read_transfer_csv(std::istream& in);

/// Writes `segment,rmse,iterations`.
void write_fit_report_csv(std::ostream& out, const FitReport& report);

namespace detail {

struct SimplexResult {
  std::array<double, 4> best{};
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead on R^4 with restarts from the incumbent when the simplex
/// collapses. `trace`, if set, receives the best value after every iteration.
SimplexResult nelder_mead(const std::function<double(const std::array<double, 4>&)>& objective,
                          std::array<double, 4> start, double step, int max_evaluations,
                          const std::function<void(double)>& trace = {});

}  // namespace detail

}  // namespace swipt
