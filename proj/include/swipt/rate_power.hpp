#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "swipt/channel.hpp"
#include "swipt/eh_model.hpp"
#include "swipt/grid_pdf.hpp"
#include "swipt/information.hpp"

namespace swipt {

/// Fixed link state for one rate-power problem; everything but P_req.
struct LinkState {
  const EhModel& model;
  double a_bar;   // effective peak amplitude (volt-equivalent, 1-ohm reference)
  double h_mag;   // |h|
  double sigma2;  // output noise variance, watts
};

struct ProblemInstance {
  LinkState link;
  double p_req_bar;  // required average harvested power, watts
};

void validate(const ProblemInstance& inst);

struct Feasibility {
  bool feasible = false;
  double p_max_bar = 0.0;  // watts
};

/// Feasible iff 0 <= P_req <= P_max with P_max = max psi over [0, |h a_bar|^2].
Feasibility check_feasibility(const ProblemInstance& inst);

/// E_s{psi(|h s|^2)} in watts. Throws BreakdownError if the support of fs
/// reaches past rho_max.
double average_harvested_power(const GridPdf& fs, const EhModel& model, double h_mag);

/// LHS - RHS of the moment equation for mu2,
///   ln(1 + 2 mu2 P_req) + ln erfi(sqrt(mu2 P_max)) - 1/2 ln(4 P_max mu2 / pi) - mu2 P_max,
/// evaluated in the cancellation-free form ln(1+2tq) + ln(erfi(sqrt t) sqrt(pi)/(2 sqrt t)) - t
/// with t = mu2 P_max and q = P_req/P_max.
double moment_equation_residual(double mu2, double p_max_bar, double p_req_bar);

struct Mu2Solution {
  double mu2 = 0.0;
  double residual = 0.0;
  int sign_changes = 0;  // seen while scanning the bracket; > 1 means the root may not be unique
  int evaluations = 0;
};

/// Root mu2 >= 0 of the moment equation for P_req in [P_max/3, P_max).
/// Brackets from [1e-12, 1] by doubling the upper end (capped at 1e8/P_max),
/// then bisects in log(mu2). Returns 0 at P_req = P_max/3.
Mu2Solution solve_mu2(double p_max_bar, double p_req_bar);

enum class Regime { uniform, maxent, infeasible };
std::string_view to_string(Regime regime);

struct RateSolution {
  Regime regime = Regime::infeasible;
  double j_star = 0.0;  // nats; NaN when infeasible
  double mu0 = 0.0;
  double mu2 = 0.0;
  double p_max_bar = 0.0;
  double p_req_bar = 0.0;
  double p_harv_realized = 0.0;
  double moment_residual = 0.0;
  std::optional<GridPdf> fx;
  std::optional<GridPdf> fs;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  std::size_t grid_size = kDefaultGridSize;
  bool realize_input = true;  // build fs and the realised harvested power
};

RateSolution solve_rate(const ProblemInstance& inst, const SolveOptions& options = {});

struct SweepOptions {
  std::size_t grid_size = kDefaultGridSize;
  std::size_t fine_points = 100000;  // s-grid of the baseline pushforward
  bool exact_mi = true;
  bool realize_input = false;
  MiOptions mi;
};

struct RegionPoint {
  double p_req_bar = 0.0;
  double j_star = 0.0;
  double i_exact = 0.0;  // NaN when not computed
  double mu2 = 0.0;
  Regime regime = Regime::uniform;
};

/// Fractions of P_max at which a region is sampled: k/(n-1), with the last
/// point pulled in to 1 - 1e-6.
std::vector<double> region_fractions(std::size_t n_points);

/// Rate-power boundary: J* and the exact mutual information of the realised
/// output density at n_points requirements in [0, P_max), ascending.
std::vector<RegionPoint> sweep_region(const LinkState& link, std::size_t n_points, const SweepOptions& options = {});

struct BaselinePoint {
  double sigma_s = 0.0;
  double p_harv = 0.0;
  double i_exact = 0.0;
};

/// Truncated-Gaussian transmit symbols (mean a_bar/2 on [0, a_bar]) for each
/// sigma_s: harvested power and exact mutual information.
std::vector<BaselinePoint> sweep_baseline(const LinkState& link, std::span<const double> sigma_s,
                                          const SweepOptions& options = {});

enum class McMode { relative, fixed_abar };

struct MonteCarloConfig {
  LinkBudget link;
  double amplitude = 1.0;  // A, transmitter peak amplitude
  double sigma2 = 1e-8;
  std::size_t n_realizations = 1000;
  std::uint64_t seed = 1;
  McMode mode = McMode::relative;
  std::size_t n_points = 20;
  double fixed_a_bar = 1.0;  // used in fixed_abar mode
  SweepOptions sweep;
};

/// Region averaged over fading. Relative mode: per realization, P_req runs
/// over fractions of that realization's P_max and (P_req, J*, I, mu2) are
/// averaged across realizations. Fixed-abar mode: no fading, |h| = h_tilde,
/// user amplitude capped at breakdown.
std::vector<RegionPoint> monte_carlo_region(const EhModel& model, const MonteCarloConfig& config);

void write_region_csv(std::ostream& out, std::span<const RegionPoint> rows);
void write_montecarlo_csv(std::ostream& out, std::span<const RegionPoint> rows, std::size_t n_realizations,
                          std::uint64_t seed);
void write_baseline_csv(std::ostream& out, std::span<const BaselinePoint> rows);

}  // namespace swipt
