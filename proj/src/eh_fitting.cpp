#include "swipt/eh_fitting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <string>

namespace swipt {

// ---------------------------------------------------------------------------
// Breakpoint detection

std::vector<double> detect_breakpoints(std::span<const TransferSample> samples, std::size_t window) {
  if (samples.size() < 9) throw InsufficientDataError("detect_breakpoints: need at least 9 samples");
  if (window < 3 || window % 2 == 0) throw InputError("detect_breakpoints: window must be odd and >= 3");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (samples[i].rho < samples[i - 1].rho) throw InputError("detect_breakpoints: samples must be sorted by rho");
  }
  const std::size_t n = samples.size();
  const std::size_t half = window / 2;
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i >= half ? i - half : 0;
    const std::size_t b = std::min(n - 1, i + half);
    double acc = 0.0;
    for (std::size_t k = a; k <= b; ++k) acc += samples[k].p_h;
    smooth[i] = acc / static_cast<double>(b - a + 1);
  }
  const auto [lo_it, hi_it] = std::minmax_element(smooth.begin(), smooth.end());
  // Reversals smaller than this are treated as flat noise.
  const double threshold = 0.02 * (*hi_it - *lo_it);

  struct Extremum {
    std::size_t index;
    bool is_max;
  };
  std::vector<Extremum> found;
  int dir = 0;
  std::size_t hi_idx = 0;
  std::size_t lo_idx = 0;
  std::size_t ext = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double v = smooth[i];
    if (dir == 0) {
      if (v > smooth[hi_idx]) hi_idx = i;
      if (v < smooth[lo_idx]) lo_idx = i;
      if (smooth[hi_idx] - smooth[lo_idx] > threshold) {
        dir = hi_idx > lo_idx ? 1 : -1;
        ext = dir > 0 ? hi_idx : lo_idx;
      }
    } else if (dir > 0) {
      if (v > smooth[ext]) {
        ext = i;
      } else if (smooth[ext] - v > threshold) {
        found.push_back({ext, true});
        dir = -1;
        ext = i;
      }
    } else {
      if (v < smooth[ext]) {
        ext = i;
      } else if (v - smooth[ext] > threshold) {
        found.push_back({ext, false});
        dir = 1;
        ext = i;
      }
    }
  }

  std::vector<double> breakpoints;
  for (const Extremum& e : found) {
    const std::size_t a = e.index >= window ? e.index - window : 0;
    const std::size_t b = std::min(n - 1, e.index + window);
    std::size_t best = e.index;
    for (std::size_t k = a; k <= b; ++k) {
      const bool better = e.is_max ? samples[k].p_h > samples[best].p_h : samples[k].p_h < samples[best].p_h;
      if (better) best = k;
    }
    if (best > 0 && best + 1 < n) breakpoints.push_back(samples[best].rho);
  }
  return breakpoints;
}

// ---------------------------------------------------------------------------
// Nelder-Mead

namespace detail {

SimplexResult nelder_mead(const std::function<double(const std::array<double, 4>&)>& objective,
                          std::array<double, 4> start, double step, int max_evaluations,
                          const std::function<void(double)>& trace) {
  constexpr std::size_t kDim = 4;
  using Point = std::array<double, kDim>;
  SimplexResult result;
  auto eval = [&](const Point& p) {
    ++result.evaluations;
    const double v = objective(p);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };

  std::array<Point, kDim + 1> simplex;
  std::array<double, kDim + 1> values{};
  auto init = [&](const Point& origin, double size) {
    simplex[0] = origin;
    values[0] = eval(origin);
    for (std::size_t i = 0; i < kDim; ++i) {
      simplex[i + 1] = origin;
      simplex[i + 1][i] += size;
      values[i + 1] = eval(simplex[i + 1]);
    }
  };
  init(start, step);

  double restart_best = std::numeric_limits<double>::max();
  int collapses = 0;
  while (result.evaluations < max_evaluations) {
    std::array<std::size_t, kDim + 1> order{};
    for (std::size_t i = 0; i <= kDim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[kDim];
    const std::size_t second = order[kDim - 1];
    if (trace) trace(values[best]);

    double spread = 0.0;
    for (std::size_t i = 0; i <= kDim; ++i) {
      for (std::size_t d = 0; d < kDim; ++d) spread = std::max(spread, std::fabs(simplex[i][d] - simplex[best][d]));
    }
    const double fspread = values[worst] - values[best];
    if (spread < 1e-10 || fspread <= 1e-15 * std::fabs(values[best]) + 1e-300) {
      // Collapsed: restart around the incumbent; stop once a restart no longer helps.
      ++collapses;
      if (values[best] >= restart_best * (1.0 - 1e-9) || collapses > 20) {
        result.converged = true;
        break;
      }
      restart_best = values[best];
      const Point origin = simplex[best];
      const double value = values[best];
      init(origin, 0.05 * step);
      if (values[0] > value) values[0] = value;
      continue;
    }

    Point centroid{};
    for (std::size_t i = 0; i <= kDim; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < kDim; ++d) centroid[d] += simplex[i][d] / kDim;
    }
    auto along = [&](double t) {
      Point p;
      for (std::size_t d = 0; d < kDim; ++d) p[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
      return p;
    };

    const Point reflected = along(-1.0);
    const double fr = eval(reflected);
    if (fr < values[best]) {
      const Point expanded = along(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Point contracted = along(outside ? -0.5 : 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= kDim; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < kDim; ++d) simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
      values[i] = eval(simplex[i]);
    }
  }

  const auto it = std::min_element(values.begin(), values.end());
  result.best = simplex[static_cast<std::size_t>(it - values.begin())];
  result.value = *it;
  return result;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Segment fitting

namespace {

struct SegmentData {
  std::vector<double> u;  // (rho - rho_lo) / width
  std::vector<double> p;  // p_h / scale
};

// Decoded segment in normalised coordinates (u in [0,1], power / scale).
struct NormalisedShape {
  double asymptote;
  double alpha;
  double beta;
  double theta;
};

NormalisedShape decode(const std::array<double, 4>& v, double phi, bool increasing) {
  const double asymptote = increasing ? phi + std::exp(v[0]) : phi / (1.0 + std::exp(-v[0]));
  return {asymptote, std::exp(v[1]), std::exp(v[2]), std::exp(v[3])};
}

double eval_normalised(const NormalisedShape& s, double phi, double u) {
  if (u <= 0.0) return phi;
  return phi + (s.asymptote - phi) * -std::expm1(-s.beta * std::log1p(s.theta * std::pow(u, s.alpha)));
}

struct SegmentFit {
  NormalisedShape shape;
  double sse;
  int evaluations;
  bool converged;
};

SegmentFit fit_segment(const SegmentData& data, double phi, bool increasing, std::size_t segment,
                       const FitOptions& options) {
  auto objective = [&](const std::array<double, 4>& v) {
    const NormalisedShape s = decode(v, phi, increasing);
    double sse = 0.0;
    for (std::size_t i = 0; i < data.u.size(); ++i) {
      const double r = eval_normalised(s, phi, data.u[i]) - data.p[i];
      sse += r * r;
    }
    return sse;
  };

  const auto [pmin_it, pmax_it] = std::minmax_element(data.p.begin(), data.p.end());
  const int restarts = std::max(1, options.restarts);
  std::vector<detail::SimplexResult> runs(static_cast<std::size_t>(restarts));

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                      static_cast<std::uint32_t>(segment), static_cast<std::uint32_t>(r)};
    std::mt19937_64 gen(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto log_uniform = [&](double a, double b) { return std::log(a) + unit(gen) * (std::log(b) - std::log(a)); };
    std::array<double, 4> start{};
    if (increasing) {
      start[0] = std::log(std::max(*pmax_it - phi, 1e-6)) + (unit(gen) - 0.5);
    } else {
      const double frac = std::clamp(*pmin_it / phi * (0.5 + 0.5 * unit(gen)), 1e-3, 1.0 - 1e-3);
      start[0] = std::log(frac / (1.0 - frac));
    }
    start[1] = log_uniform(0.5, 4.0);
    start[2] = log_uniform(0.2, 3.0);
    start[3] = log_uniform(0.1, 1e5);
    runs[static_cast<std::size_t>(r)] = detail::nelder_mead(objective, start, 0.5, options.max_evaluations);
  }

  std::size_t best = 0;
  int evaluations = 0;
  bool any_converged = false;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    evaluations += runs[r].evaluations;
    any_converged = any_converged || runs[r].converged;
    if (runs[r].value < runs[best].value) best = r;
  }
  return {decode(runs[best].best, phi, increasing), runs[best].value, evaluations, any_converged};
}

}  // namespace

FitReport fit_model(std::span<const TransferSample> samples, std::span<const double> breakpoints, double rho_max,
                    RhoUnit rho_unit, const FitOptions& options) {
  if (!(rho_max > 0.0)) throw InputError("fit_model: rho_max must be positive");
  std::vector<double> edges{0.0};
  for (double b : breakpoints) {
    if (!(b > edges.back() && b < rho_max)) {
      throw InputError("fit_model: breakpoints must be ascending and strictly inside (0, rho_max)");
    }
    edges.push_back(b);
  }
  edges.push_back(rho_max);
  double scale = 0.0;
  for (const TransferSample& s : samples) {
    if (!(s.rho >= 0.0 && s.rho <= rho_max) || !(s.p_h >= 0.0)) {
      throw InputError("fit_model: samples need 0 <= rho <= rho_max and p_h >= 0");
    }
    scale = std::max(scale, s.p_h);
  }
  if (!(scale > 0.0)) throw InputError("fit_model: all harvested powers are zero");

  const std::size_t n_seg = edges.size() - 1;
  std::vector<LogisticShape> shapes;
  std::vector<int> evaluations;
  bool all_converged = true;
  double phi = 0.0;  // normalised
  for (std::size_t n = 0; n < n_seg; ++n) {
    const double lo = edges[n];
    const double hi = edges[n + 1];
    const double width = hi - lo;
    SegmentData data;
    for (const TransferSample& s : samples) {
      const bool inside = s.rho >= lo && (n + 1 == n_seg ? s.rho <= hi : s.rho < hi);
      if (inside) {
        data.u.push_back((s.rho - lo) / width);
        data.p.push_back(s.p_h / scale);
      }
    }
    if (data.u.size() < 5) {
      throw InsufficientDataError("fit_model: segment " + std::to_string(n + 1) + " has fewer than 5 samples");
    }
    const bool increasing = n % 2 == 0;
    const SegmentFit fit = fit_segment(data, phi, increasing, n, options);
    all_converged = all_converged && fit.converged;
    evaluations.push_back(fit.evaluations);
    // theta_hat u^alpha = theta (rho - lo)^alpha with u = (rho - lo)/width.
    shapes.push_back({fit.shape.asymptote * scale, fit.shape.alpha, fit.shape.beta,
                      fit.shape.theta / std::pow(width, fit.shape.alpha)});
    phi = eval_normalised(fit.shape, phi, 1.0);
  }

  std::vector<double> inner(edges.begin() + 1, edges.end() - 1);
  std::optional<EhModel> model;
  try {
    model.emplace(inner, shapes, rho_max, rho_unit);
  } catch (const InvariantError& e) {
    throw FitError(std::string("fit_model: fitted parameters violate the model invariants: ") + e.what(),
                   FitReport{EhModel::reference_rtd(), std::numeric_limits<double>::infinity(), {}, evaluations, 0});
  }

  FitReport report{*model, 0.0, std::vector<double>(n_seg, 0.0), evaluations, 0};
  std::vector<std::size_t> counts(n_seg, 0);
  double total = 0.0;
  for (const TransferSample& s : samples) {
    const double r = eval_psi(*model, s.rho) - s.p_h;
    const std::size_t seg = model->segment_index(s.rho);
    report.per_segment_rmse[seg] += r * r;
    ++counts[seg];
    total += r * r;
  }
  for (std::size_t n = 0; n < n_seg; ++n) {
    report.per_segment_rmse[n] = counts[n] ? std::sqrt(report.per_segment_rmse[n] / static_cast<double>(counts[n])) : 0.0;
  }
  report.rmse = std::sqrt(total / static_cast<double>(samples.size()));
  for (int e : evaluations) report.iterations += e;
  if (!all_converged) {
    throw FitError("fit_model: no restart converged within " + std::to_string(options.max_evaluations) +
                       " evaluations",
                   report);
  }
  return report;
}

std::vector<double> refine_breakpoints(std::span<const TransferSample> samples, std::span<const double> breakpoints,
                                       double rho_max, RhoUnit rho_unit, const FitOptions& options) {
  std::vector<double> rho;
  for (const TransferSample& s : samples) rho.push_back(s.rho);
  std::sort(rho.begin(), rho.end());
  rho.erase(std::unique(rho.begin(), rho.end()), rho.end());
  FitOptions quick = options;
  quick.restarts = std::max(4, options.restarts / 4);
  std::vector<double> current(breakpoints.begin(), breakpoints.end());

  for (std::size_t b = 0; b < current.size(); ++b) {
    auto cost = [&](double at) {
      std::vector<double> trial = current;
      trial[b] = at;
      try {
        return fit_model(samples, trial, rho_max, rho_unit, quick).rmse;
      } catch (const FitError& e) {
        return e.best_so_far().rmse;
      } catch (const std::runtime_error&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    // The cost jumps whenever a sample changes segment, so search each gap
    // next to the detected sample separately; inside a gap it is smooth.
    const auto it = std::lower_bound(rho.begin(), rho.end(), current[b]);
    const std::size_t k = static_cast<std::size_t>(it - rho.begin());
    const double lo_limit = b > 0 ? current[b - 1] : 0.0;
    const double hi_limit = b + 1 < current.size() ? current[b + 1] : rho_max;
    double best_x = current[b];
    double best_f = cost(best_x);
    for (int side = -1; side <= 1; side += 2) {
      double lo = 0.0;
      double hi = 0.0;
      if (side < 0) {
        if (k == 0) continue;
        lo = rho[k - 1];
        hi = k < rho.size() ? rho[k] : rho_max;
      } else {
        if (k + 1 >= rho.size()) continue;
        lo = rho[k];
        hi = rho[k + 1];
      }
      const double pad = 1e-9 * (hi - lo);
      lo = std::max(lo + pad, lo_limit + 1e-9 * rho_max);
      hi = std::min(hi - pad, hi_limit - 1e-9 * rho_max);
      if (!(hi > lo)) continue;
      const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = hi - ratio * (hi - lo);
      double x2 = lo + ratio * (hi - lo);
      double f1 = cost(x1);
      double f2 = cost(x2);
      for (int iter = 0; iter < 60 && hi - lo > 1e-10 * rho_max; ++iter) {
        if (f1 < best_f) {
          best_f = f1;
          best_x = x1;
        }
        if (f2 < best_f) {
          best_f = f2;
          best_x = x2;
        }
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - ratio * (hi - lo);
          f1 = cost(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + ratio * (hi - lo);
          f2 = cost(x2);
        }
      }
      if (f1 < best_f) {
        best_f = f1;
        best_x = x1;
      }
    }
    current[b] = best_x;
  }
  return current;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

double parse_field(const std::string& text, std::size_t line_no, const char* name) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line_no) + ": cannot parse " + name + " value \"" + text + "\"");
  }
  return v;
}

}  // namespace

std::vector<TransferSample> read_transfer_csv(std::istream& in) {
  std::vector<TransferSample> out;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto comma = t.find(',');
    if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
      throw InputError("line " + std::to_string(line_no) + ": expected exactly two comma-separated fields");
    }
    const std::string a = trim(std::string_view(t).substr(0, comma));
    const std::string b = trim(std::string_view(t).substr(comma + 1));
    if (!header) {
      if (a != "rho" || b != "p_h") throw InputError("line " + std::to_string(line_no) + ": expected header rho,p_h");
      header = true;
      continue;
    }
    TransferSample s{parse_field(a, line_no, "rho"), parse_field(b, line_no, "p_h")};
    if (s.rho < 0.0 || s.p_h < 0.0) throw InputError("line " + std::to_string(line_no) + ": values must be >= 0");
    out.push_back(s);
  }
  if (!header) throw InputError("transfer CSV: missing header rho,p_h");
  return out;
}

void write_fit_report_csv(std::ostream& out, const FitReport& report) {
  const auto old = out.precision(17);
  out << "segment,rmse,iterations\n";
  for (std::size_t n = 0; n < report.per_segment_rmse.size(); ++n) {
    out << n + 1 << ',' << report.per_segment_rmse[n] << ','
        << (n < report.per_segment_evaluations.size() ? report.per_segment_evaluations[n] : 0) << '\n';
  }
  out.precision(old);
}

}  // namespace swipt
