// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifdef SWIPT_HAVE_OPENMP
#include <omp.h>
#endif

#include "swipt/channel.hpp"
#include "swipt/distributions.hpp"
#include "swipt/eh_fitting.hpp"
#include "swipt/eh_model.hpp"
#include "swipt/information.hpp"
#include "swipt/rate_power.hpp"
#include "swipt/special_math.hpp"

using namespace swipt;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail += " [over budget]";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %-34s %7.2fs/%gs  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, budget_s, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------------------
// Oracles, written independently of the library.

constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// erfi by its Maclaurin series: every term is positive, so long double
// summation is accurate for any z; `terms` = 0 sums to convergence.
long double erfi_series(long double z, int terms = 0) {
  long double term = z;  // z^(2n+1) / n!
  long double sum = 0.0L;
  const int limit = terms > 0 ? terms : 100000;
  for (int n = 0; n < limit; ++n) {
    const long double add = term / (2 * n + 1);
    sum += add;
    if (terms == 0 && add < 1e-21L * sum) break;
    term *= z * z / (n + 1);
  }
  return 2.0L / std::sqrt(kPiL) * sum;
}

// erfi(z) ~ e^{z^2} / (z sqrt(pi)) * sum_k (2k-1)!! / (2z^2)^k, truncated at its smallest term.
long double erfi_asymptotic(long double z) {
  const long double x = 2.0L * z * z;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    const long double next = term * (2 * k - 1) / x;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  return std::exp(z * z) / (z * std::sqrt(kPiL)) * sum;
}

// LHS - RHS of the moment equation evaluated literally.
long double moment_residual_naive(long double mu2, long double p, long double preq) {
  return std::log(1.0L + 2.0L * mu2 * preq) + std::log(erfi_series(std::sqrt(mu2 * p))) -
         0.5L * std::log(4.0L * p * mu2 / kPiL) - mu2 * p;
}

// Entropy of exp(-mu0 + mu2 x^2) on [0, sqrt(P)] by Simpson on the analytic density.
double maxent_entropy_oracle(double mu0, double mu2, double p) {
  const int n = 200000;
  const double top = std::sqrt(p);
  const double h = top / n;
  long double acc = 0.0L;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    const long double logf = -mu0 + mu2 * x * x;
    const long double f = std::exp(logf);
    const int w = (i == 0 || i == n) ? 1 : (i % 2 ? 4 : 2);
    acc += w * (-f * logf);
  }
  return static_cast<double>(acc * h / 3.0L);
}

double ref_h_tilde() { return large_scale_gain(LinkBudget{}); }

}  // namespace

int main() {
  const EhModel model = EhModel::reference_rtd();

  criterion(1, "moment-equation solver", 5.0, [] {
    double worst_res = 0.0;
    double worst_norm = 0.0;
    double worst_moment = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double p = std::pow(10.0, -6.0 + 7.0 * i / 19.0);
      for (int j = 0; j < 20; ++j) {
        const double q = 0.34 + (0.99 - 0.34) * j / 19.0;
        const double preq = q * p;
        const Mu2Solution s = solve_mu2(p, preq);
        worst_res = std::max(worst_res, static_cast<double>(std::fabs(moment_residual_naive(s.mu2, p, preq))));
        const double mu0 = maxent_mu0(s.mu2, p, preq);
        const GridPdf f = maxent_output_pdf({mu0, s.mu2, p, preq});
        worst_norm = std::max(worst_norm, std::fabs(f.mass() - 1.0));
        const double m2 = f.expect([](double x) { return x * x; });
        worst_moment = std::max(worst_moment, std::fabs(m2 - preq) / preq);
      }
    }
    return Outcome{worst_res < 1e-9 && worst_norm < 1e-6 && worst_moment < 1e-5,
                   fmt("max|res|=%.2e", worst_res) + fmt(" max|mass-1|=%.2e", worst_norm) +
                       fmt(" max rel moment err=%.2e", worst_moment)};
  });

  criterion(2, "regime-boundary continuity", 1.0, [&] {
    double worst_gap = 0.0;
    double worst_mu2 = 0.0;
    const double h = ref_h_tilde();
    for (double a_bar : {0.2, 0.4, std::sqrt(model.rho_max_watts()) / h}) {
      const LinkState link{model, a_bar, h, 1e-8};
      const double p = check_feasibility({link, 0.0}).p_max_bar;
      const double eps = 1e-8 * p;
      const RateSolution below = solve_rate({link, p / 3 - eps}, {kDefaultGridSize, false});
      const RateSolution above = solve_rate({link, p / 3 + eps}, {kDefaultGridSize, false});
      if (below.regime != Regime::uniform || above.regime != Regime::maxent) return Outcome{false, "wrong regimes"};
      worst_gap = std::max(worst_gap, std::fabs(below.j_star - above.j_star));
      const Mu2Solution near = solve_mu2(p, p / 3 + 1e-6 * p);
      worst_mu2 = std::max(worst_mu2, near.mu2 * p);
    }
    return Outcome{worst_gap < 1e-6 && worst_mu2 < 1e-4,
                   fmt("max|dJ|=%.2e nats", worst_gap) + fmt(" max mu2*P=%.2e", worst_mu2)};
  });

  criterion(3, "max-entropy entropy identity", 1.0, [] {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    double worst_oracle = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double p = std::pow(10.0, -6.0 + 6.0 * u(gen));
      const double preq = (0.34 + 0.65 * u(gen)) * p;
      const double mu2 = solve_mu2(p, preq).mu2;
      const double mu0 = maxent_mu0(mu2, p, preq);
      const double identity = mu0 - mu2 * preq;
      const double quad = differential_entropy(maxent_output_pdf({mu0, mu2, p, preq}));
      worst = std::max(worst, std::fabs(quad - identity));
      worst_oracle = std::max(worst_oracle, std::fabs(maxent_entropy_oracle(mu0, mu2, p) - identity));
    }
    return Outcome{worst < 1e-6 && worst_oracle < 1e-6,
                   fmt("max|h-(mu0-mu2 Preq)|=%.2e", worst) + fmt(" (independent quadrature %.2e)", worst_oracle)};
  });

  criterion(4, "EPI bound below exact MI", 30.0, [&] {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 1e300;
    int optimal_count = 0;
    for (int i = 0; i < 100; ++i) {
      const double p = eval_psi(model, 1.8) * (0.2 + 0.8 * u(gen));
      const double top = std::sqrt(p);
      const NoiseSpec noise{p * std::pow(10.0, -5.0 + 5.0 * u(gen))};
      GridPdf f = GridPdf::from_cell_masses(0.0, 1.0, {1.0});
      if (i % 4 == 3) {
        const double preq = p * (u(gen) < 0.3 ? 0.3 * u(gen) : 0.34 + 0.65 * u(gen));
        if (3 * preq <= p) {
          f = uniform_output_pdf(p);
        } else {
          const double mu2 = solve_mu2(p, preq).mu2;
          f = maxent_output_pdf({maxent_mu0(mu2, p, preq), mu2, p, preq});
        }
        ++optimal_count;
      } else {
        const int parts = 1 + static_cast<int>(3 * u(gen));
        std::vector<double> masses(2000, 0.0);
        for (int c = 0; c < parts; ++c) {
          const double mean = top * u(gen);
          const double sd = top * std::pow(10.0, -2.5 + 2.5 * u(gen));
          const double w = 0.1 + u(gen);
          std::vector<double> comp(masses.size());
          double total = 0.0;
          for (std::size_t k = 0; k < comp.size(); ++k) {
            const double lo = top * k / comp.size();
            const double hi = top * (k + 1) / comp.size();
            comp[k] = math::normal_cdf((hi - mean) / sd) - math::normal_cdf((lo - mean) / sd);
            total += comp[k];
          }
          for (std::size_t k = 0; k < comp.size(); ++k) masses[k] += w * comp[k] / total;
        }
        f = GridPdf::from_cell_masses(0.0, top, masses);
      }
      const double info = mutual_information(f, noise);
      const double bound = epi_rate(differential_entropy(f), noise);
      worst = std::min(worst, info - bound);
    }
    return Outcome{worst >= -1e-6, fmt("min(I-J)=%.3e nats", worst) + " over 100 pdfs (" +
                                       std::to_string(optimal_count) + " optimal)"};
  });

  criterion(5, "feasibility witness", 1.0, [&] {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = ref_h_tilde();
    const double cap = std::sqrt(model.rho_max_watts()) / h;
    double worst = 0.0;
    bool infeasible_ok = true;
    bool within_cap = true;
    for (int i = 0; i < 50; ++i) {
      const double a_bar = cap * (0.05 + 0.95 * u(gen));
      const LinkState link{model, a_bar, h, 1e-8};
      const Feasibility f = check_feasibility({link, 0.0});
      const double preq = f.p_max_bar * u(gen);
      if (!check_feasibility({link, preq}).feasible) return Outcome{false, "feasible request reported infeasible"};
      const double s0 = std::sqrt(model.to_watts(invert_first_segment(model, preq))) / h;
      within_cap = within_cap && s0 <= a_bar * (1 + 1e-12);
      const double harvested = eval_psi_watts(model, h * s0 * h * s0);
      worst = std::max(worst, std::fabs(harvested - preq) / f.p_max_bar);
      for (double over : {1 + 1e-9, 1.5, 10.0}) {
        infeasible_ok = infeasible_ok && !check_feasibility({link, f.p_max_bar * over}).feasible &&
                        solve_rate({link, f.p_max_bar * over}).regime == Regime::infeasible;
      }
    }
    return Outcome{worst < 1e-9 && infeasible_ok && within_cap,
                   fmt("max|Pharv-Preq|/Pmax=%.2e", worst) + (infeasible_ok ? " infeasible ok" : " infeasible WRONG")};
  });

  criterion(6, "EH model fidelity", 1.0, [&] {
    const bool zero = eval_psi(model, 0.0) == 0.0;
    const double at = eval_psi(model, 1.8);
    const double left = model.segments()[0].eval(1.8);
    const double cont = std::max(std::fabs(left - at), std::fabs(eval_psi(model, 1.8 - 1e-12) - at)) / at;
    bool signs = true;
    const int n = 100000;
    double prev = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double rho = 2.4 * k / n;
      const double v = eval_psi(model, rho);
      signs = signs && (rho <= 1.8 ? v > prev : v < prev);
      prev = v;
    }
    double worst_pmax = 0.0;
    for (double rho_cap : {0.3, 1.0, 1.8, 2.0, 2.4}) {
      double scan = 0.0;
      for (int k = 0; k <= n; ++k) scan = std::max(scan, eval_psi(model, rho_cap * k / n));
      worst_pmax = std::max(worst_pmax, std::fabs(p_max(model, rho_cap) - scan) / scan);
    }
    return Outcome{zero && cont < 1e-8 && signs && worst_pmax < 1e-10,
                   std::string(zero ? "psi(0)=0" : "psi(0)!=0") + fmt(" continuity=%.1e", cont) +
                       (signs ? " signs ok" : " signs WRONG") + fmt(" p_max vs scan=%.1e", worst_pmax)};
  });

  criterion(7, "fit round trip", 60.0, [&] {
    std::vector<TransferSample> data;
    for (int i = 0; i < 400; ++i) {
      const double rho = 2.4 * i / 399;
      data.push_back({rho, eval_psi(model, rho)});
    }
    const std::vector<double> detected = refine_breakpoints(data, detect_breakpoints(data), 2.4);
    const FitReport clean = fit_model(data, detected, 2.4);

    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> noise(-1e-7, 1e-7);
    std::vector<TransferSample> noisy = data;
    for (auto& s : noisy) s.p_h = std::max(0.0, s.p_h + noise(gen));
    const double bp[] = {1.8};
    const FitReport rough = fit_model(noisy, bp, 2.4);
    double truth_sq = 0.0;
    for (const auto& s : data) {
      const double r = eval_psi(rough.model, s.rho) - s.p_h;
      truth_sq += r * r;
    }
    const double truth_rmse = std::sqrt(truth_sq / data.size());
    const bool ok = detected.size() == 1 && clean.rmse <= 1e-8 && rough.rmse <= 3e-7 && truth_rmse <= 3e-7;
    return Outcome{ok, fmt("noiseless rmse=%.2e W", clean.rmse) + fmt(" noisy rmse=%.2e W", rough.rmse) +
                           fmt(" (vs true curve %.2e W)", truth_rmse) +
                           fmt(" detected breakpoint=%.6g", detected.empty() ? NAN : detected[0])};
  });

  criterion(8, "region and baseline structure", 300.0, [&] {
    MonteCarloConfig cfg;
    cfg.mode = McMode::fixed_abar;
    cfg.sigma2 = 1e-8;
    cfg.n_points = 50;
    const double h = large_scale_gain(cfg.link);
    cfg.fixed_a_bar = 0.75;
    const auto a = monte_carlo_region(model, cfg);
    cfg.fixed_a_bar = 1.0;
    const auto b = monte_carlo_region(model, cfg);
    double diff = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      diff = std::max({diff, std::fabs(a[k].j_star - b[k].j_star), std::fabs(a[k].i_exact - b[k].i_exact),
                       std::fabs(a[k].p_req_bar - b[k].p_req_bar)});
    }
    const double p = check_feasibility({{model, std::sqrt(model.rho_max_watts()) / h, h, 1e-8}, 0.0}).p_max_bar;
    bool monotone = true;
    bool flat = true;
    for (std::size_t k = 1; k < b.size(); ++k) {
      monotone = monotone && b[k].j_star <= b[k - 1].j_star;
      if (b[k].p_req_bar <= p / 3) flat = flat && b[k].j_star == b[0].j_star;
    }

    const double a_bar = effective_amplitude_cap(1.0, h, model.rho_max_watts());
    const LinkState link{model, a_bar, h, 1e-8};
    std::vector<double> sigma_s;
    for (int k = 0; k < 20; ++k) sigma_s.push_back(a_bar * std::pow(10.0, -2.0 + k * std::log10(200.0) / 19));
    const auto base = sweep_baseline(link, sigma_s, cfg.sweep);
    double worst = -1e300;
    int above = 0;
    std::string worst_at;
    for (const BaselinePoint& bp : base) {
      // Optimized region evaluated at exactly the baseline's harvested power.
      const RateSolution sol = solve_rate({link, bp.p_harv}, {kDefaultGridSize, false});
      const double i_opt = mutual_information(*sol.fx, NoiseSpec{1e-8});
      if (bp.i_exact > i_opt + 1e-6) ++above;
      if (bp.i_exact - i_opt > worst) {
        worst = bp.i_exact - i_opt;
        worst_at = fmt(" at sigma_s=%.4g", bp.sigma_s) + fmt(" (Pharv=%.4f Pmax)", bp.p_harv / p);
      }
    }
    const bool informative = base.front().p_harv != base.back().p_harv;
    return Outcome{diff <= 1e-9 && monotone && flat && worst <= 1e-6 && informative,
                   fmt("|region(0.75)-region(1.0)|=%.1e", diff) + (monotone ? " monotone" : " NOT monotone") +
                       (flat ? " flat" : " NOT flat") + fmt(" max(I_base-I_opt)=%.2e nats", worst) + worst_at + ", " +
                       std::to_string(above) + "/20 baseline points above"};
  });

  criterion(9, "Monte Carlo determinism", 600.0, [&] {
    MonteCarloConfig cfg;
    cfg.n_realizations = 100;
    cfg.seed = 20240501;
    cfg.sigma2 = 1e-8;
    auto table = [&](const MonteCarloConfig& c) {
      std::ostringstream out;
      write_montecarlo_csv(out, monte_carlo_region(model, c), c.n_realizations, c.seed);
      return out.str();
    };
    const std::string first = table(cfg);
#ifdef SWIPT_HAVE_OPENMP
    const int threads = omp_get_max_threads();
    omp_set_num_threads(threads + 1);
#endif
    const std::string second = table(cfg);
#ifdef SWIPT_HAVE_OPENMP
    omp_set_num_threads(threads);
#endif
    const bool identical = first == second;

    cfg.link.rician_k = 1e12;
    cfg.n_realizations = 1;
    const auto mc = monte_carlo_region(model, cfg);
    const double h = large_scale_gain(cfg.link);
    const double a_bar = std::min(cfg.amplitude, std::sqrt(model.rho_max_watts()) / h);
    const auto direct = sweep_region({model, a_bar, h, cfg.sigma2}, cfg.n_points, cfg.sweep);
    double diff = 0.0;
    for (std::size_t k = 0; k < mc.size(); ++k) {
      diff = std::max({diff, std::fabs(mc[k].j_star - direct[k].j_star),
                       std::fabs(mc[k].i_exact - direct[k].i_exact),
                       std::fabs(mc[k].p_req_bar - direct[k].p_req_bar) / direct.back().p_req_bar});
    }
    return Outcome{identical && diff <= 1e-9,
                   std::string(identical ? "byte-identical" : "DIFFERENT") + " (" + std::to_string(first.size()) +
                       " bytes, thread count varied)" + fmt(" no-fading diff=%.1e", diff)};
  });

  criterion(10, "erfi oracle", 1.0, [] {
    double worst_series = 0.0;
    double worst_series30 = 0.0;
    for (int k = 0; k <= 2000; ++k) {
      const double z = 0.01 + (3.0 - 0.01) * k / 2000;
      const long double ref = erfi_series(z);
      worst_series = std::max(worst_series, static_cast<double>(std::fabs(math::erfi(z) - ref) / ref));
      const long double ref30 = erfi_series(z, 30);
      worst_series30 = std::max(worst_series30, static_cast<double>(std::fabs(math::erfi(z) - ref30) / ref30));
    }
    double worst_asym = 0.0;
    for (int k = 0; k <= 1500; ++k) {
      const double z = 5.0 + 15.0 * k / 1500;
      const long double ref = erfi_asymptotic(z);
      worst_asym = std::max(worst_asym, static_cast<double>(std::fabs(math::erfi(z) - ref) / ref));
    }
    return Outcome{worst_series < 1e-10 && worst_asym < 1e-8,
                   fmt("series rel=%.1e", worst_series) + fmt(" asymptotic rel=%.1e", worst_asym) +
                       fmt(" (30-term truncation alone: %.1e)", worst_series30)};
  });

  std::printf("%s: %d of 10 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
