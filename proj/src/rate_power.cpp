#include "swipt/rate_power.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <ostream>

#include "swipt/distributions.hpp"
#include "swipt/errors.hpp"
#include "swipt/kernels.hpp"
#include "swipt/special_math.hpp"

namespace swipt {
namespace {

constexpr double kMu2Floor = 1e-12;
constexpr double kMu2Start = 1.0;
constexpr double kScaledMu2Cap = 1e8;  // cap on mu2 * P_max
constexpr double kLastFraction = 1.0 - 1e-6;

// Runs body(i) for i in [0, n) across threads; the first exception (lowest
// index) is rethrown after the loop.
template <class Body>
void parallel_indexed(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double second_moment(const GridPdf& fx) {
  return fx.expect([](double x) { return x * x; }) / fx.mass();
}

}  // namespace

void validate(const ProblemInstance& inst) {
  const LinkState& l = inst.link;
  if (!(l.a_bar > 0.0) || !std::isfinite(l.a_bar)) throw DomainError("a_bar must be positive");
  if (!(l.h_mag > 0.0) || !std::isfinite(l.h_mag)) throw DomainError("|h| must be positive");
  validate(NoiseSpec{l.sigma2});
  if (!(inst.p_req_bar >= 0.0)) throw DomainError("p_req_bar must be >= 0");
  kernels::received_rho(l.model, l.h_mag, l.a_bar);
}

Feasibility check_feasibility(const ProblemInstance& inst) {
  validate(inst);
  const LinkState& l = inst.link;
  const double p_max_bar = p_max(l.model, kernels::received_rho(l.model, l.h_mag, l.a_bar));
  return {inst.p_req_bar <= p_max_bar, p_max_bar};
}

double average_harvested_power(const GridPdf& fs, const EhModel& model, double h_mag) {
  std::vector<double> s(fs.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = fs.abscissa(i);
  std::vector<double> x(s.size());
  kernels::received_rho(model, h_mag, fs.hi());
  kernels::output_amplitudes_parallel(model, h_mag, s, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += fs.mass_of(i) * x[i] * x[i];
  return acc;
}

double moment_equation_residual(double mu2, double p_max_bar, double p_req_bar) {
  const double t = mu2 * p_max_bar;
  const double q = p_req_bar / p_max_bar;
  return std::log1p(2.0 * t * q) + math::log_erfi_ratio(std::sqrt(t)) - t;
}

Mu2Solution solve_mu2(double p_max_bar, double p_req_bar) {
  if (!(p_max_bar > 0.0) || !std::isfinite(p_max_bar)) throw DomainError("solve_mu2: p_max_bar must be positive");
  if (!(3.0 * p_req_bar >= p_max_bar)) throw DomainError("solve_mu2: p_req_bar below p_max_bar/3");
  if (!(p_req_bar < p_max_bar)) {
    throw BracketError("solve_mu2: p_req_bar >= p_max_bar; mu2 diverges (residual stays positive)");
  }
  Mu2Solution sol;
  if (3.0 * p_req_bar == p_max_bar) return sol;

  // Work in t = mu2 * P_max where the equation is scale free.
  const double q = p_req_bar / p_max_bar;
  auto residual = [&](double t) {
    ++sol.evaluations;
    return std::log1p(2.0 * t * q) + math::log_erfi_ratio(std::sqrt(t)) - t;
  };

  double t_lo = kMu2Floor * p_max_bar;
  double r_lo = residual(t_lo);
  while (r_lo <= 0.0 && t_lo > 1e-300) {
    if (r_lo == 0.0) {
      sol.mu2 = t_lo / p_max_bar;
      return sol;
    }
    t_lo *= 1e-3;
    r_lo = residual(t_lo);
  }
  if (!(r_lo > 0.0)) throw BracketError("solve_mu2: residual not positive at the lower bracket end (pattern -,-)");

  double t_hi = std::max(kMu2Start * p_max_bar, 2.0 * t_lo);
  double r_hi = residual(t_hi);
  while (r_hi > 0.0) {
    t_lo = t_hi;
    r_lo = r_hi;
    t_hi *= 2.0;
    if (t_hi > kScaledMu2Cap) {
      throw BracketError("solve_mu2: residual still positive at mu2 = 1e8/P_max (pattern +,+); P_req too close to P_max");
    }
    r_hi = residual(t_hi);
  }
  sol.sign_changes = 1;
  // Look a few doublings further for a second crossing.
  double r_prev = r_hi;
  for (double t = 2.0 * t_hi; t <= kScaledMu2Cap && t <= 16.0 * t_hi; t *= 2.0) {
    const double r = residual(t);
    if ((r > 0.0) != (r_prev > 0.0)) ++sol.sign_changes;
    r_prev = r;
  }

  const double u = math::bisect([&](double v) { return residual(std::exp(v)); }, std::log(t_lo), std::log(t_hi), 1e-15);
  const double t = std::exp(u);
  sol.mu2 = t / p_max_bar;
  sol.residual = residual(t);
  return sol;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::uniform:
      return "uniform";
    case Regime::maxent:
      return "maxent";
    case Regime::infeasible:
      return "infeasible";
  }
  return "infeasible";
}

RateSolution solve_rate(const ProblemInstance& inst, const SolveOptions& options) {
  const Feasibility feas = check_feasibility(inst);
  const LinkState& l = inst.link;
  RateSolution sol;
  sol.p_max_bar = feas.p_max_bar;
  sol.p_req_bar = inst.p_req_bar;
  if (!feas.feasible) {
    sol.regime = Regime::infeasible;
    sol.j_star = std::numeric_limits<double>::quiet_NaN();
    return sol;
  }
  const NoiseSpec noise{l.sigma2};
  const double p_max_bar = feas.p_max_bar;
  if (!(p_max_bar > 0.0)) {
    // Zero amplitude cap or a model that never harvests: only P_req = 0 is feasible
    // and nothing can be conveyed.
    sol.regime = Regime::uniform;
    sol.j_star = 0.0;
    return sol;
  }

  if (3.0 * inst.p_req_bar <= p_max_bar) {
    sol.regime = Regime::uniform;
    sol.mu0 = 0.5 * std::log(p_max_bar);
    sol.j_star = 0.5 * std::log1p(p_max_bar / (2.0 * std::numbers::pi * std::numbers::e * noise.sigma2));
    sol.fx = uniform_output_pdf(p_max_bar, options.grid_size);
  } else {
    const Mu2Solution root = solve_mu2(p_max_bar, inst.p_req_bar);
    if (root.sign_changes > 1) {
      sol.warnings.push_back("moment equation changed sign " + std::to_string(root.sign_changes) +
                             " times during bracketing; root may not be unique");
    }
    sol.regime = Regime::maxent;
    sol.mu2 = root.mu2;
    sol.moment_residual = root.residual;
    sol.mu0 = maxent_mu0(root.mu2, p_max_bar, inst.p_req_bar);
    sol.j_star = epi_rate(sol.mu0 - sol.mu2 * inst.p_req_bar, noise);
    sol.fx = maxent_output_pdf({sol.mu0, sol.mu2, p_max_bar, inst.p_req_bar}, options.grid_size);
  }

  sol.p_harv_realized = second_moment(*sol.fx);
  if (options.realize_input) {
    try {
      sol.fs = map_output_to_input_pdf(*sol.fx, l.model, l.h_mag, options.grid_size, l.a_bar);
      sol.p_harv_realized = average_harvested_power(*sol.fs, l.model, l.h_mag);
    } catch (const RangeError& e) {
      sol.warnings.push_back(std::string("transmit density not realisable on the first segment: ") + e.what());
    }
  }
  return sol;
}

std::vector<double> region_fractions(std::size_t n_points) {
  if (n_points < 2) throw DomainError("region sweep needs at least 2 points");
  std::vector<double> f(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    f[k] = k + 1 == n_points ? kLastFraction : static_cast<double>(k) / static_cast<double>(n_points - 1);
  }
  return f;
}

namespace {

RegionPoint solve_point(const LinkState& link, double p_req, const SweepOptions& options) {
  const RateSolution sol =
      solve_rate({link, p_req}, SolveOptions{options.grid_size, options.realize_input});
  RegionPoint pt{p_req, sol.j_star, std::numeric_limits<double>::quiet_NaN(), sol.mu2, sol.regime};
  if (options.exact_mi && sol.fx) {
    MiOptions mi = options.mi;
    mi.parallel = false;  // points already run in parallel
    pt.i_exact = mutual_information(*sol.fx, NoiseSpec{link.sigma2}, mi);
  }
  return pt;
}

}  // namespace

std::vector<RegionPoint> sweep_region(const LinkState& link, std::size_t n_points, const SweepOptions& options) {
  const std::vector<double> fractions = region_fractions(n_points);
  const double p_max_bar = check_feasibility({link, 0.0}).p_max_bar;
  std::vector<RegionPoint> rows(n_points);
  parallel_indexed(n_points, [&](std::size_t k) { rows[k] = solve_point(link, fractions[k] * p_max_bar, options); });
  return rows;
}

std::vector<BaselinePoint> sweep_baseline(const LinkState& link, std::span<const double> sigma_s,
                                          const SweepOptions& options) {
  if (sigma_s.empty()) throw DomainError("sweep_baseline: sigma_s list is empty");
  validate(ProblemInstance{link, 0.0});
  std::vector<BaselinePoint> rows(sigma_s.size());
  parallel_indexed(sigma_s.size(), [&](std::size_t k) {
    const GridPdf fs = truncated_gaussian_pdf(link.a_bar, sigma_s[k], options.grid_size);
    const GridPdf fx =
        pushforward_input_to_output(fs, link.model, link.h_mag, options.grid_size, options.fine_points);
    MiOptions mi = options.mi;
    mi.parallel = false;
    rows[k] = {sigma_s[k], average_harvested_power(fs, link.model, link.h_mag),
               mutual_information(fx, NoiseSpec{link.sigma2}, mi)};
  });
  return rows;
}

std::vector<RegionPoint> monte_carlo_region(const EhModel& model, const MonteCarloConfig& config) {
  const double h_tilde = large_scale_gain(config.link);
  if (config.mode == McMode::fixed_abar) {
    const double a_bar = effective_amplitude_cap(config.fixed_a_bar, h_tilde, model.rho_max_watts());
    return sweep_region({model, a_bar, h_tilde, config.sigma2}, config.n_points, config.sweep);
  }
  if (config.n_realizations < 1) throw DomainError("monte_carlo_region: need at least one realization");
  const std::vector<double> fractions = region_fractions(config.n_points);
  const std::size_t n_real = config.n_realizations;
  const std::size_t n_pts = fractions.size();
  std::vector<RegionPoint> all(n_real * n_pts);

  // Fading draws are made up front, one independent stream per realization.
  std::vector<double> h_mag(n_real);
  for (std::size_t r = 0; r < n_real; ++r) {
    auto gen = realization_stream(config.seed, r);
    h_mag[r] = h_tilde * sample_small_scale(config.link.rician_k, gen);
  }
  std::vector<double> p_max_bar(n_real);
  std::vector<double> a_bar(n_real);
  for (std::size_t r = 0; r < n_real; ++r) {
    a_bar[r] = effective_amplitude_cap(config.amplitude, h_mag[r], model.rho_max_watts());
    p_max_bar[r] = check_feasibility({{model, a_bar[r], h_mag[r], config.sigma2}, 0.0}).p_max_bar;
  }
  parallel_indexed(all.size(), [&](std::size_t idx) {
    const std::size_t r = idx / n_pts;
    const std::size_t k = idx % n_pts;
    all[idx] = solve_point({model, a_bar[r], h_mag[r], config.sigma2}, fractions[k] * p_max_bar[r], config.sweep);
  });

  std::vector<RegionPoint> mean(n_pts);
  for (std::size_t k = 0; k < n_pts; ++k) {
    RegionPoint acc{0.0, 0.0, 0.0, 0.0, all[k].regime};
    for (std::size_t r = 0; r < n_real; ++r) {
      const RegionPoint& p = all[r * n_pts + k];
      acc.p_req_bar += p.p_req_bar;
      acc.j_star += p.j_star;
      acc.i_exact += p.i_exact;
      acc.mu2 += p.mu2;
    }
    const auto n = static_cast<double>(n_real);
    mean[k] = {acc.p_req_bar / n, acc.j_star / n, acc.i_exact / n, acc.mu2 / n, acc.regime};
  }
  return mean;
}

namespace {

void write_region_row(std::ostream& out, const RegionPoint& p) {
  out << p.p_req_bar << ',' << p.j_star << ',' << p.i_exact << ',' << p.mu2 << ',' << to_string(p.regime);
}

}  // namespace

void write_region_csv(std::ostream& out, std::span<const RegionPoint> rows) {
  const auto old = out.precision(17);
  out << "p_req_W,j_star_nats,i_exact_nats,mu2,regime\n";
  for (const RegionPoint& p : rows) {
    write_region_row(out, p);
    out << '\n';
  }
  out.precision(old);
}

void write_montecarlo_csv(std::ostream& out, std::span<const RegionPoint> rows, std::size_t n_realizations,
                          std::uint64_t seed) {
  const auto old = out.precision(17);
  out << "p_req_W,j_star_nats,i_exact_nats,mu2,regime,n_realizations,seed\n";
  for (const RegionPoint& p : rows) {
    write_region_row(out, p);
    out << ',' << n_realizations << ',' << seed << '\n';
  }
  out.precision(old);
}

void write_baseline_csv(std::ostream& out, std::span<const BaselinePoint> rows) {
  const auto old = out.precision(17);
  out << "sigma_s,p_harv_W,i_exact_nats\n";
  for (const BaselinePoint& p : rows) out << p.sigma_s << ',' << p.p_harv << ',' << p.i_exact << '\n';
  out.precision(old);
}

}  // namespace swipt
