#include "swipt/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "swipt/channel.hpp"
#include "swipt/distributions.hpp"
#include "swipt/eh_fitting.hpp"
#include "swipt/eh_model.hpp"
#include "swipt/errors.hpp"
#include "swipt/rate_power.hpp"
#include "swipt/units.hpp"

namespace swipt::cli {
namespace {

struct Globals {
  std::string model_path;
  std::string output_path;
  std::uint64_t seed = 1;
  std::size_t grid_size = kDefaultGridSize;
};

struct LinkFlags {
  std::optional<double> a_bar;
  double amplitude = 1.0;
  std::string g_tx = "100";
  std::string g_rx = "100";
  std::string f_c = "100GHz";
  std::string distance = "0.3m";
  std::optional<double> h_mag;
  std::string sigma2 = "-50dBm";
};

struct Link {
  EhModel model;
  double a_bar;
  double h_mag;
  double sigma2;
  LinkState state() const { return {model, a_bar, h_mag, sigma2}; }
};

void add_link_flags(CLI::App* cmd, LinkFlags& f) {
  cmd->add_option("--abar", f.a_bar, "effective peak amplitude Abar in volts; overrides --amplitude");
  cmd->add_option("--amplitude", f.amplitude, "transmitter peak amplitude A in volts, capped at breakdown")
      ->capture_default_str();
  cmd->add_option("--gt", f.g_tx, "transmit antenna gain, linear or with dB suffix")->capture_default_str();
  cmd->add_option("--gr", f.g_rx, "receive antenna gain, linear or with dB suffix")->capture_default_str();
  cmd->add_option("--fc", f.f_c, "carrier frequency, Hz/kHz/MHz/GHz/THz suffix")->capture_default_str();
  cmd->add_option("--distance", f.distance, "link distance, m/cm/mm suffix")->capture_default_str();
  cmd->add_option("--hmag", f.h_mag, "channel magnitude |h|; overrides the link budget");
  cmd->add_option("--sigma2", f.sigma2, "output noise variance, W/mW/dBm suffix")->capture_default_str();
}

LinkBudget budget_from(const LinkFlags& f) {
  LinkBudget lb;
  lb.g_tx = units::parse_gain(f.g_tx);
  lb.g_rx = units::parse_gain(f.g_rx);
  lb.f_c = units::parse_frequency(f.f_c);
  lb.d = units::parse_distance(f.distance);
  validate(lb);
  return lb;
}

EhModel load(const Globals& g) {
  return g.model_path.empty() ? EhModel::reference_rtd() : load_model(g.model_path);
}

Link resolve_link(const Globals& g, const LinkFlags& f) {
  EhModel model = load(g);
  const double h = f.h_mag ? *f.h_mag : large_scale_gain(budget_from(f));
  if (!(h > 0.0)) throw InputError("--hmag must be > 0");
  if (f.a_bar && !(*f.a_bar >= 0.0)) throw InputError("--abar must be >= 0");
  if (!(f.amplitude >= 0.0)) throw InputError("--amplitude must be >= 0");
  const double a_bar = f.a_bar ? *f.a_bar : effective_amplitude_cap(f.amplitude, h, model.rho_max_watts());
  const double sigma2 = units::parse_power(f.sigma2);
  if (!(sigma2 > 0.0)) throw InputError("--sigma2 must be > 0");
  return {std::move(model), a_bar, h, sigma2};
}

void with_output(const Globals& g, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  if (g.output_path.empty()) {
    body(out);
    return;
  }
  std::ofstream file(g.output_path, std::ios::binary);
  if (!file) throw InputError("cannot open output file " + g.output_path);
  body(file);
  if (!file) throw InputError("failed writing " + g.output_path);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" ", used) != std::string::npos) {
      throw InputError("cannot parse number \"" + item + "\" in list \"" + text + "\"");
    }
    values.push_back(v);
  }
  return values;
}

void print_key(std::ostream& out, const char* key, double value) { out << key << '=' << value << '\n'; }

// ---------------------------------------------------------------------------

struct FitFlags {
  std::string input;
  std::string breakpoints = "auto";
  std::optional<double> rho_max;
  std::string rho_unit = "mW";
  std::string report;
  int restarts = 16;
  int max_evaluations = 20000;
  std::size_t window = 5;
};

int cmd_ehfit(const Globals& g, const FitFlags& f, std::ostream& out, std::ostream& err) {
  std::ifstream in(f.input);
  if (!in) throw InputError("cannot open input file " + f.input);
  std::vector<TransferSample> samples = read_transfer_csv(in);
  if (samples.empty()) throw InsufficientDataError(f.input + ": no data rows");
  std::stable_sort(samples.begin(), samples.end(),
                   [](const TransferSample& a, const TransferSample& b) { return a.rho < b.rho; });
  const double rho_max = f.rho_max ? *f.rho_max : samples.back().rho;
  const FitOptions options{f.restarts, f.max_evaluations, g.seed};
  const RhoUnit unit = parse_rho_unit(f.rho_unit);
  const std::vector<double> breakpoints =
      f.breakpoints == "auto" ? refine_breakpoints(samples, detect_breakpoints(samples, f.window), rho_max, unit, options)
                              : parse_list(f.breakpoints);

  auto emit = [&](const FitReport& report) {
    with_output(g, out, [&](std::ostream& o) { o << serialize_model(report.model); });
    if (!f.report.empty()) {
      std::ofstream rep(f.report);
      if (!rep) throw InputError("cannot open report file " + f.report);
      write_fit_report_csv(rep, report);
    }
    std::ostream& summary = g.output_path.empty() ? err : out;
    summary.precision(17);
    summary << "segments=" << report.model.segments().size() << '\n';
    summary << "breakpoints=";
    const std::vector<double> bps = report.model.breakpoints();
    for (std::size_t i = 0; i < bps.size(); ++i) summary << (i ? "," : "") << bps[i];
    summary << '\n';
    print_key(summary, "rmse_W", report.rmse);
    summary << "evaluations=" << report.iterations << '\n';
  };

  try {
    emit(fit_model(samples, breakpoints, rho_max, unit, options));
  } catch (const FitError& e) {
    emit(e.best_so_far());
    throw;
  }
  return 0;
}

struct EvalFlags {
  std::vector<double> rho;
  std::size_t points = 0;
};

int cmd_eheval(const Globals& g, const EvalFlags& f, std::ostream& out) {
  const EhModel model = load(g);
  std::vector<double> rho = f.rho;
  if (f.points == 1) throw InputError("--points must be 0 or >= 2");
  for (std::size_t k = 0; k < f.points; ++k) {
    rho.push_back(k + 1 == f.points ? model.rho_max()
                                    : model.rho_max() * static_cast<double>(k) / static_cast<double>(f.points - 1));
  }
  if (rho.empty()) throw InputError("eheval: give --rho values or --points");
  for (double r : rho) {
    if (!(r >= 0.0)) throw InputError("eheval: rho must be >= 0");
  }
  with_output(g, out, [&](std::ostream& o) {
    o.precision(17);
    o << "rho,p_h\n";
    for (double r : rho) o << r << ',' << eval_psi(model, r) << '\n';
  });
  return 0;
}

int cmd_feasible(const Globals& g, const LinkFlags& lf, const std::string& preq, std::ostream& out) {
  const Link link = resolve_link(g, lf);
  const double p_req = units::parse_power(preq);
  const Feasibility feas = check_feasibility({link.state(), p_req});
  with_output(g, out, [&](std::ostream& o) {
    o.precision(17);
    o << "feasible=" << (feas.feasible ? "true" : "false") << '\n';
    print_key(o, "p_req_W", p_req);
    print_key(o, "p_max_W", feas.p_max_bar);
    print_key(o, "a_bar_V", link.a_bar);
    print_key(o, "h_mag", link.h_mag);
  });
  return 0;
}

int cmd_rate(const Globals& g, const LinkFlags& lf, const std::string& preq, std::ostream& out, std::ostream& err) {
  const Link link = resolve_link(g, lf);
  const double p_req = units::parse_power(preq);
  const RateSolution sol = solve_rate({link.state(), p_req}, SolveOptions{g.grid_size, true});
  with_output(g, out, [&](std::ostream& o) {
    o.precision(17);
    o << "regime=" << to_string(sol.regime) << '\n';
    print_key(o, "j_star_nats", sol.j_star);
    print_key(o, "mu0", sol.mu0);
    print_key(o, "mu2", sol.mu2);
    print_key(o, "p_req_W", sol.p_req_bar);
    print_key(o, "p_max_W", sol.p_max_bar);
    print_key(o, "p_harv_realized_W", sol.p_harv_realized);
    print_key(o, "moment_residual", sol.moment_residual);
    print_key(o, "a_bar_V", link.a_bar);
    print_key(o, "h_mag", link.h_mag);
    print_key(o, "sigma2_W", link.sigma2);
  });
  for (const std::string& w : sol.warnings) err << "warning: " << w << '\n';
  return 0;
}

struct SweepFlags {
  std::size_t points = 50;
  bool no_exact_mi = false;
  std::size_t fine_points = 100000;
};

SweepOptions sweep_options(const Globals& g, const SweepFlags& f) {
  SweepOptions o;
  o.grid_size = g.grid_size;
  o.fine_points = f.fine_points;
  o.exact_mi = !f.no_exact_mi;
  return o;
}

int cmd_region(const Globals& g, const LinkFlags& lf, const SweepFlags& sf, std::ostream& out) {
  const Link link = resolve_link(g, lf);
  const std::vector<RegionPoint> rows = sweep_region(link.state(), sf.points, sweep_options(g, sf));
  with_output(g, out, [&](std::ostream& o) { write_region_csv(o, rows); });
  return 0;
}

struct BaselineFlags {
  std::string sigma_s;
  std::size_t count = 20;
};

int cmd_baseline(const Globals& g, const LinkFlags& lf, const SweepFlags& sf, const BaselineFlags& bf,
                 std::ostream& out) {
  const Link link = resolve_link(g, lf);
  std::vector<double> sigma_s;
  if (!bf.sigma_s.empty()) {
    sigma_s = parse_list(bf.sigma_s);
  } else {
    if (bf.count < 2) throw InputError("--count must be >= 2");
    // Log-spaced from Abar/100 to 2 Abar.
    for (std::size_t k = 0; k < bf.count; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(bf.count - 1);
      sigma_s.push_back(link.a_bar * std::pow(10.0, -2.0 + t * std::log10(200.0)));
    }
  }
  for (double s : sigma_s) {
    if (!(s > 0.0)) throw InputError("sigma_s values must be > 0");
  }
  const std::vector<BaselinePoint> rows = sweep_baseline(link.state(), sigma_s, sweep_options(g, sf));
  with_output(g, out, [&](std::ostream& o) { write_baseline_csv(o, rows); });
  return 0;
}

struct McFlags {
  std::size_t realizations = 1000;
  double rician_k = 1.0;
  std::string mode = "relative";
  std::size_t points = 20;
};

int cmd_montecarlo(const Globals& g, const LinkFlags& lf, const SweepFlags& sf, const McFlags& mf,
                   std::ostream& out) {
  const EhModel model = load(g);
  MonteCarloConfig config;
  config.link = budget_from(lf);
  config.link.rician_k = mf.rician_k;
  validate(config.link);
  if (mf.mode == "relative") {
    config.mode = McMode::relative;
  } else if (mf.mode == "fixed-abar") {
    config.mode = McMode::fixed_abar;
  } else {
    throw InputError("--mode must be relative or fixed-abar");
  }
  config.amplitude = lf.amplitude;
  config.fixed_a_bar = lf.a_bar ? *lf.a_bar : lf.amplitude;
  config.sigma2 = units::parse_power(lf.sigma2);
  if (!(config.sigma2 > 0.0)) throw InputError("--sigma2 must be > 0");
  if (mf.realizations < 1) throw InputError("--realizations must be >= 1");
  config.n_realizations = mf.realizations;
  config.seed = g.seed;
  config.n_points = mf.points;
  config.sweep = sweep_options(g, sf);
  const std::vector<RegionPoint> rows = monte_carlo_region(model, config);
  const std::size_t n_reported = config.mode == McMode::fixed_abar ? 1 : config.n_realizations;
  with_output(g, out, [&](std::ostream& o) { write_montecarlo_csv(o, rows, n_reported, g.seed); });
  return 0;
}

int cmd_export_pdf(const Globals& g, const LinkFlags& lf, const std::string& preq, const std::string& which,
                   std::ostream& out, std::ostream& err) {
  const Link link = resolve_link(g, lf);
  const double p_req = units::parse_power(preq);
  const RateSolution sol = solve_rate({link.state(), p_req}, SolveOptions{g.grid_size, which == "input"});
  if (sol.regime == Regime::infeasible) {
    err << "regime=infeasible: no density to export\n";
    return 0;
  }
  const std::optional<GridPdf>& pdf = which == "input" ? sol.fs : sol.fx;
  if (!pdf) throw RangeError("export-pdf: input density not realisable for this model");
  with_output(g, out, [&](std::ostream& o) { write_pdf_csv(o, *pdf); });
  for (const std::string& w : sol.warnings) err << "warning: " << w << '\n';
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"THz SWIPT rate-power tradeoff with a non-linear RTD energy harvester", "swipt"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--model", g.model_path, "EH model JSON; defaults to the built-in two-segment RTD model");
  app.add_option("--output", g.output_path, "write the result here instead of stdout");
  app.add_option("--seed", g.seed, "master RNG seed (unsigned)")->capture_default_str();
  app.add_option("--grid-size", g.grid_size, "density grid points")->capture_default_str()->check(
      CLI::Range(std::size_t{3}, std::size_t{100000000}));

  FitFlags fit;
  auto* ehfit = app.add_subcommand("ehfit", "fit the piecewise logistic EH model to rho,p_h CSV data");
  ehfit->add_option("--input", fit.input, "CSV with header rho,p_h (rho in model units, p_h in W)")->required();
  ehfit->add_option("--breakpoints", fit.breakpoints,
                    "\"auto\" (detect, then refine between samples) or comma-separated rho values")
      ->capture_default_str();
  ehfit->add_option("--rho-max", fit.rho_max, "breakdown rho in model units; defaults to the largest sample");
  ehfit->add_option("--rho-unit", fit.rho_unit, "unit of rho: mW or W")->capture_default_str();
  ehfit->add_option("--report", fit.report, "also write segment,rmse,iterations CSV here");
  ehfit->add_option("--restarts", fit.restarts, "random restarts per segment")->capture_default_str();
  ehfit->add_option("--max-evaluations", fit.max_evaluations, "objective evaluations per restart")
      ->capture_default_str();
  ehfit->add_option("--window", fit.window, "moving-average window for breakpoint detection (odd)")
      ->capture_default_str();

  EvalFlags eval;
  auto* eheval = app.add_subcommand("eheval", "evaluate psi(rho); writes rho,p_h CSV (p_h in W)");
  eheval->add_option("--rho", eval.rho, "received power values in model units")->delimiter(',');
  eheval->add_option("--points", eval.points, "also sample N evenly spaced points over [0, rho_max]");

  LinkFlags link;
  std::string preq = "0";
  std::string which = "output";
  SweepFlags sweep;
  BaselineFlags baseline_flags;
  McFlags mc;

  auto* feasible = app.add_subcommand("feasible", "check whether a harvested-power requirement is achievable");
  add_link_flags(feasible, link);
  feasible->add_option("--preq", preq, "required average harvested power, W/mW/dBm suffix")->required();

  auto* rate = app.add_subcommand("rate", "optimal rate J* for one requirement; prints key=value lines");
  add_link_flags(rate, link);
  rate->add_option("--preq", preq, "required average harvested power, W/mW/dBm suffix")->required();

  auto* region = app.add_subcommand("region", "rate-power boundary CSV (powers in W, rates in nats)");
  add_link_flags(region, link);
  region->add_option("--points", sweep.points, "requirements sampled over [0, P_max)")->capture_default_str();
  region->add_flag("--no-exact-mi", sweep.no_exact_mi, "skip the exact mutual information column");

  auto* base = app.add_subcommand("baseline", "truncated-Gaussian input baseline CSV (sigma_s in V, power in W)");
  add_link_flags(base, link);
  base->add_option("--sigma-s", baseline_flags.sigma_s, "comma-separated input standard deviations in V");
  base->add_option("--count", baseline_flags.count, "log-spaced sigma_s values over [Abar/100, 2 Abar]")
      ->capture_default_str();
  base->add_option("--fine-points", sweep.fine_points, "input grid for the output pushforward")
      ->capture_default_str();

  auto* montecarlo = app.add_subcommand("montecarlo", "region averaged over Rician fading (CSV, W and nats)");
  add_link_flags(montecarlo, link);
  montecarlo->add_option("--realizations", mc.realizations, "channel realizations")->capture_default_str();
  montecarlo->add_option("--rician-k", mc.rician_k, "Rician factor K (linear)")->capture_default_str();
  montecarlo->add_option("--mode", mc.mode, "relative or fixed-abar")->capture_default_str();
  montecarlo->add_option("--points", mc.points, "requirements per realization")->capture_default_str();
  montecarlo->add_flag("--no-exact-mi", sweep.no_exact_mi, "skip the exact mutual information column");

  auto* export_pdf = app.add_subcommand("export-pdf", "optimal density as x,density CSV (amplitudes in V)");
  add_link_flags(export_pdf, link);
  export_pdf->add_option("--preq", preq, "required average harvested power, W/mW/dBm suffix")->required();
  export_pdf->add_option("--which", which, "output (f_x) or input (f_s)")
      ->check(CLI::IsMember({"output", "input"}))
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*ehfit) return cmd_ehfit(g, fit, out, err);
    if (*eheval) return cmd_eheval(g, eval, out);
    if (*feasible) return cmd_feasible(g, link, preq, out);
    if (*rate) return cmd_rate(g, link, preq, out, err);
    if (*region) return cmd_region(g, link, sweep, out);
    if (*base) return cmd_baseline(g, link, sweep, baseline_flags, out);
    if (*montecarlo) return cmd_montecarlo(g, link, sweep, mc, out);
    if (*export_pdf) return cmd_export_pdf(g, link, preq, which, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace swipt::cli
