#include "swipt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swipt/errors.hpp"

#ifdef SWIPT_HAVE_OPENMP
#include <omp.h>
#endif

namespace swipt::kernels {
namespace {

void check_shapes(const StridedConvolution& conv, std::size_t out_count) {
  if (conv.coeff.empty() || out_count == 0) return;
  if (conv.kernel.size() < required_kernel_length(conv, out_count)) {
    throw DomainError("convolve: kernel shorter than the index range it must cover");
  }
}

inline double convolve_one(const StridedConvolution& conv, std::size_t j) {
  const std::size_t n = conv.coeff.size();
  const double* k = conv.kernel.data() + j * conv.out_stride + (n - 1) * conv.coeff_rate;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += conv.coeff[i] * k[-static_cast<std::ptrdiff_t>(i * conv.coeff_rate)];
  return acc;
}

double max_amplitude(std::span<const double> s) {
  double top = 0.0;
  for (double v : s) {
    if (!(v >= 0.0)) throw DomainError("output_amplitudes: amplitudes must be >= 0");
    top = std::max(top, v);
  }
  return top;
}

}  // namespace

std::size_t required_kernel_length(const StridedConvolution& conv, std::size_t out_count) {
  if (conv.coeff.empty() || out_count == 0) return 0;
  return (out_count - 1) * conv.out_stride + (conv.coeff.size() - 1) * conv.coeff_rate + 1;
}

void convolve_serial(const StridedConvolution& conv, std::span<double> out) {
  check_shapes(conv, out.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = conv.coeff.empty() ? 0.0 : convolve_one(conv, j);
}

void convolve_parallel(const StridedConvolution& conv, std::span<double> out) {
  check_shapes(conv, out.size());
  if (conv.coeff.empty()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < count; ++j) out[j] = convolve_one(conv, static_cast<std::size_t>(j));
}

double received_rho(const EhModel& model, double h_mag, double s) {
  const double rho = model.to_model_units(h_mag * s * h_mag * s);
  if (rho > model.rho_max()) {
    if (rho <= model.rho_max() * (1.0 + 1e-12)) return model.rho_max();
    throw BreakdownError("received power " + std::to_string(model.to_watts(rho)) +
                         " W exceeds the breakdown bound " + std::to_string(model.rho_max_watts()) + " W");
  }
  return rho;
}

void output_amplitudes_serial(const EhModel& model, double h_mag, std::span<const double> s, std::span<double> x) {
  if (x.size() != s.size()) throw DomainError("output_amplitudes: size mismatch");
  received_rho(model, h_mag, max_amplitude(s));
  for (std::size_t i = 0; i < s.size(); ++i) x[i] = std::sqrt(eval_psi(model, received_rho(model, h_mag, s[i])));
}

void output_amplitudes_parallel(const EhModel& model, double h_mag, std::span<const double> s, std::span<double> x) {
  if (x.size() != s.size()) throw DomainError("output_amplitudes: size mismatch");
  received_rho(model, h_mag, max_amplitude(s));
  const auto count = static_cast<std::ptrdiff_t>(s.size());
  // Inputs were validated above, so the evaluation below cannot throw.
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const double rho = std::min(model.to_model_units(h_mag * s[i] * h_mag * s[i]), model.rho_max());
    x[i] = std::sqrt(model.segments()[model.segment_index(rho)].eval(rho));
  }
}

int max_threads() {
#ifdef SWIPT_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace swipt::kernels
