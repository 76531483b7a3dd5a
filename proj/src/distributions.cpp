#include "swipt/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "swipt/errors.hpp"
#include "swipt/kernels.hpp"
#include "swipt/special_math.hpp"

namespace swipt {
namespace {

std::size_t odd_count(std::size_t n) { return std::max<std::size_t>(3, n | 1U); }

// Exponent below which the max-entropy density is treated as zero.
constexpr double kNegligibleExponent = 40.0;

}  // namespace

double maxent_mu0(double mu2, double p_max_bar, double p_req_bar) {
  return mu2 * p_max_bar + std::log(std::sqrt(p_max_bar) / (1.0 + 2.0 * mu2 * p_req_bar));
}

GridPdf uniform_output_pdf(double p_max_bar, std::size_t grid_size) {
  if (!(p_max_bar > 0.0)) throw DomainError("uniform_output_pdf: p_max_bar must be positive");
  const double top = std::sqrt(p_max_bar);
  return GridPdf::from_nodes(0.0, top, std::vector<double>(odd_count(grid_size), 1.0 / top));
}

GridPdf maxent_output_pdf(const MaxEntParams& params, std::size_t grid_size) {
  if (!(params.p_max_bar > 0.0)) throw DomainError("maxent_output_pdf: p_max_bar must be positive");
  if (!(params.mu2 >= 0.0)) throw DomainError("maxent_output_pdf: mu2 must be >= 0");
  if (!(params.p_req_bar >= 0.0 && params.p_req_bar <= params.p_max_bar)) {
    throw DomainError("maxent_output_pdf: need 0 <= p_req_bar <= p_max_bar");
  }
  const double top = std::sqrt(params.p_max_bar);
  double bottom = 0.0;
  if (params.mu2 > 0.0 && kNegligibleExponent / params.mu2 < params.p_max_bar) {
    bottom = std::sqrt(params.p_max_bar - kNegligibleExponent / params.mu2);
  }
  // -mu0 + mu2 x^2 regrouped around x = top to keep large mu2 accurate.
  const double peak_exponent = params.mu2 * params.p_max_bar - params.mu0;
  const std::size_t m = odd_count(grid_size);
  const double step = (top - bottom) / static_cast<double>(m - 1);
  std::vector<double> density(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double x = i + 1 == m ? top : bottom + static_cast<double>(i) * step;
    density[i] = std::exp(peak_exponent + params.mu2 * (x - top) * (x + top));
  }
  GridPdf pdf = GridPdf::from_nodes(bottom, top, std::move(density));
  if (std::fabs(pdf.mass() - 1.0) > 1e-4) {
    throw InconsistencyError("maxent_output_pdf: density integrates to " + std::to_string(pdf.mass()) +
                             "; (mu0, mu2) do not solve the moment equations");
  }
  return pdf;
}

GridPdf map_output_to_input_pdf(const GridPdf& fx, const EhModel& model, double h_mag, std::size_t grid_size,
                                double a_bar) {
  if (!(h_mag > 0.0)) throw DomainError("map_output_to_input_pdf: |h| must be positive");
  if (fx.lo() < 0.0) throw RangeError("map_output_to_input_pdf: output amplitudes must be >= 0");
  const LogisticSegment& first = model.segments().front();
  const double peak = first_segment_peak(model);
  auto preimage = [&](double x) {
    double target = x * x;
    if (target > peak) {
      if (target > peak * (1.0 + 1e-12)) {
        throw RangeError("map_output_to_input_pdf: x = " + std::to_string(x) +
                         " has no preimage on the first segment of psi");
      }
      target = peak;
    }
    return std::sqrt(model.to_watts(invert_first_segment(model, target))) / h_mag;
  };
  const double s_lo = preimage(fx.lo());
  const double s_hi = preimage(fx.hi());
  if (s_hi > a_bar * (1.0 + 1e-12)) {
    throw RangeError("map_output_to_input_pdf: required amplitude " + std::to_string(s_hi) +
                     " exceeds the amplitude cap " + std::to_string(a_bar));
  }
  if (!(s_hi > s_lo)) throw RangeError("map_output_to_input_pdf: degenerate input support");

  const std::size_t cells = std::max<std::size_t>(1, grid_size);
  const double width = (s_hi - s_lo) / static_cast<double>(cells);
  std::vector<double> masses(cells);
  double prev = fx.cdf(fx.lo());
  for (std::size_t k = 0; k < cells; ++k) {
    const double s = k + 1 == cells ? s_hi : s_lo + static_cast<double>(k + 1) * width;
    const double rho = std::min(model.to_model_units(h_mag * s * h_mag * s), first.rho_hi);
    const double cur = k + 1 == cells ? fx.cdf(fx.hi()) : fx.cdf(std::sqrt(first.eval(rho)));
    masses[k] = std::max(0.0, cur - prev);
    prev = std::max(prev, cur);
  }
  return GridPdf::from_cell_masses(s_lo, s_hi, std::move(masses));
}

GridPdf pushforward_input_to_output(const GridPdf& fs, const EhModel& model, double h_mag, std::size_t bins,
                                   std::size_t fine_points) {
  if (bins == 0) throw DomainError("pushforward_input_to_output: bins must be positive");
  if (fs.lo() < 0.0) throw DomainError("pushforward_input_to_output: amplitudes must be >= 0");
  const std::size_t n = std::max<std::size_t>(fine_points, 2);
  std::vector<double> s(n + 1);
  const double ds = (fs.hi() - fs.lo()) / static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) s[k] = k == n ? fs.hi() : fs.lo() + static_cast<double>(k) * ds;
  std::vector<double> x(n + 1);
  kernels::output_amplitudes_parallel(model, h_mag, s, x);

  const auto [x_min_it, x_max_it] = std::minmax_element(x.begin(), x.end());
  double x_lo = *x_min_it;
  double x_hi = *x_max_it;
  if (!(x_hi > x_lo)) {
    const double pad = std::max(1e-12, 1e-9 * x_hi);
    x_lo = std::max(0.0, x_lo - pad);
    x_hi += pad;
  }
  const double bin_width = (x_hi - x_lo) / static_cast<double>(bins);
  auto bin_of = [&](double v) {
    return std::min(static_cast<std::size_t>(std::max(0.0, (v - x_lo) / bin_width)), bins - 1);
  };

  std::vector<double> masses(bins, 0.0);
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double cur = k + 1 == n ? fs.mass() : fs.cdf(s[k + 1]);
    const double m = std::max(0.0, cur - prev);
    prev = std::max(prev, cur);
    if (m == 0.0) continue;
    const double a = std::min(x[k], x[k + 1]);
    const double b = std::max(x[k], x[k + 1]);
    const std::size_t first = bin_of(a);
    const std::size_t last = bin_of(b);
    if (first == last || b - a <= 1e-15 * (x_hi - x_lo)) {
      masses[first] += m;
      continue;
    }
    for (std::size_t j = first; j <= last; ++j) {
      const double lo = std::max(a, x_lo + static_cast<double>(j) * bin_width);
      const double hi = std::min(b, x_lo + static_cast<double>(j + 1) * bin_width);
      if (hi > lo) masses[j] += m * (hi - lo) / (b - a);
    }
  }
  return GridPdf::from_cell_masses(x_lo, x_hi, std::move(masses));
}

GridPdf truncated_gaussian_pdf(double a_bar, double sigma_s, std::size_t grid_size) {
  if (!(a_bar > 0.0) || !(sigma_s > 0.0)) throw DomainError("truncated_gaussian_pdf: a_bar and sigma_s must be > 0");
  const std::size_t cells = std::max<std::size_t>(1, grid_size);
  const double mean = 0.5 * a_bar;
  const double width = a_bar / static_cast<double>(cells);
  std::vector<double> masses(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    const double lo = (static_cast<double>(k) * width - mean) / sigma_s;
    const double hi = ((k + 1 == cells ? a_bar : static_cast<double>(k + 1) * width) - mean) / sigma_s;
    masses[k] = lo > 0.0 ? math::normal_sf(lo) - math::normal_sf(hi) : math::normal_cdf(hi) - math::normal_cdf(lo);
  }
  return GridPdf::from_cell_masses(0.0, a_bar, std::move(masses));
}

}  // namespace swipt
