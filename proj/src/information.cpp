#include "swipt/information.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "swipt/errors.hpp"
#include "swipt/kernels.hpp"
#include "swipt/special_math.hpp"

namespace swipt {
namespace {

// Phi(a) - Phi(b) for a >= b, taken from the tail that avoids cancellation.
double normal_interval(double a, double b) {
  if (b > 0.0) return math::normal_sf(b) - math::normal_sf(a);
  return math::normal_cdf(a) - math::normal_cdf(b);
}

}  // namespace

void validate(const NoiseSpec& noise) {
  if (!(noise.sigma2 > 0.0) || !std::isfinite(noise.sigma2)) throw DomainError("noise variance must be positive");
}

double differential_entropy(const GridPdf& pdf) {
  double h = 0.0;
  for (std::size_t i = 0; i < pdf.size(); ++i) {
    const double f = pdf.density()[i];
    if (f > 0.0) h -= pdf.weight(i) * f * std::log(f);
  }
  return h;
}

double epi_rate(double h_x, const NoiseSpec& noise) {
  validate(noise);
  const double a = 2.0 * h_x - std::log(2.0 * std::numbers::pi * std::numbers::e * noise.sigma2);
  // 1/2 softplus(a)
  if (a > 30.0) return 0.5 * (a + std::log1p(std::exp(-a)));
  return 0.5 * std::log1p(std::exp(a));
}

OutputDensity output_density(const GridPdf& fx, const NoiseSpec& noise, const MiOptions& options) {
  validate(noise);
  if (!(options.y_step_fraction > 0.0)) throw DomainError("y_step_fraction must be positive");
  if (options.y_step_fraction > 0.25) {
    throw ResolutionError("y-grid step " + std::to_string(options.y_step_fraction) +
                          " sigma exceeds sigma/4; refine the output grid");
  }
  const double sigma = std::sqrt(noise.sigma2);
  const double dx = fx.step();
  const bool cells = fx.layout() == GridLayout::cells;
  if (!cells && dx > 0.25 * sigma) {
    throw ResolutionError("node spacing exceeds sigma/4; use a finer input grid");
  }

  // Common lattice of spacing unit: inputs sit every `rate` units, outputs
  // every `stride` units, so the Gaussian kernel depends only on the offset.
  const double target = options.y_step_fraction * sigma;
  const std::size_t rate = dx > target ? static_cast<std::size_t>(std::ceil(dx / target)) : 1;
  const double unit = dx / static_cast<double>(rate);
  const std::size_t stride = rate == 1 ? std::max<std::size_t>(1, static_cast<std::size_t>(target / dx)) : 1;
  const double dy = unit * static_cast<double>(stride);

  const std::size_t n = fx.size();
  const auto lead = static_cast<std::size_t>(std::ceil(options.padding_sigmas * sigma / unit));
  const double anchor = fx.lo();  // node 0 or left edge of cell 0
  const double y0 = anchor - static_cast<double>(lead) * unit;
  const double y_end = fx.hi() + options.padding_sigmas * sigma;
  auto out_count = static_cast<std::size_t>(std::ceil((y_end - y0) / dy)) + 1;
  if (out_count % 2 == 0) ++out_count;

  const double mass = fx.mass();
  if (!(mass > 0.0)) throw InvariantError("mutual_information: input density has zero mass");
  std::vector<double> coeff(n);
  for (std::size_t i = 0; i < n; ++i) coeff[i] = (cells ? fx.density()[i] : fx.mass_of(i)) / mass;

  kernels::StridedConvolution conv{coeff, {}, stride, rate};
  const std::size_t klen = kernels::required_kernel_length(conv, out_count);
  OutputDensity result{y0, dy, std::vector<double>(out_count)};

  if (klen > out_count * n) {
    // Support much narrower than a y-step: most lattice offsets would never
    // be read, so evaluate the sum directly.
    const auto count = static_cast<std::ptrdiff_t>(out_count);
#pragma omp parallel for schedule(static) if (options.parallel)
    for (std::ptrdiff_t j = 0; j < count; ++j) {
      const double y = y0 + static_cast<double>(j) * dy;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double gap = y - (anchor + static_cast<double>(i) * dx);
        acc += coeff[i] * (cells ? normal_interval(gap / sigma, (gap - dx) / sigma) : math::normal_pdf(gap, 0.0, sigma));
      }
      result.values[static_cast<std::size_t>(j)] = acc;
    }
    return result;
  }

  std::vector<double> kernel(klen);
  const auto offset_min = -static_cast<std::ptrdiff_t>(lead) - static_cast<std::ptrdiff_t>((n - 1) * rate);
  for (std::size_t k = 0; k < klen; ++k) {
    const double gap = static_cast<double>(offset_min + static_cast<std::ptrdiff_t>(k)) * unit;  // y - anchor_i
    kernel[k] = cells ? normal_interval(gap / sigma, (gap - dx) / sigma) : math::normal_pdf(gap, 0.0, sigma);
  }
  conv.kernel = kernel;

  if (options.parallel) {
    kernels::convolve_parallel(conv, result.values);
  } else {
    kernels::convolve_serial(conv, result.values);
  }
  return result;
}

double mutual_information(const GridPdf& fx, const NoiseSpec& noise, const MiOptions& options) {
  const OutputDensity fy = output_density(fx, noise, options);
  const std::size_t m = fy.values.size();
  double h_y = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double f = fy.values[j];
    if (!(f > 0.0)) continue;
    const double w = (j == 0 || j + 1 == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    h_y -= w * f * std::log(f);
  }
  h_y *= fy.dy / 3.0;
  const double info = h_y - math::gaussian_entropy(noise.sigma2);
  if (info < 0.0) {
    if (info >= -1e-9) return 0.0;
    throw InconsistencyError("mutual_information: negative value " + std::to_string(info) +
                             " nats; the grids are under-resolved");
  }
  return info;
}

}  // namespace swipt
