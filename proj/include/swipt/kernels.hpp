#pragma once

#include <cstddef>
#include <span>

#include "swipt/eh_model.hpp"

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; both use the same per-output summation order, so their
// results are bit-identical regardless of thread count.
namespace swipt::kernels {

/// out[j] = sum_i coeff[i] * kernel[j * out_stride + (n - 1 - i) * coeff_rate],
/// with n = coeff.size(). The kernel is a sampled function of the integer
/// offset between an output point and an input point.
struct StridedConvolution {
  std::span<const double> coeff;
  std::span<const double> kernel;
  std::size_t out_stride = 1;
  std::size_t coeff_rate = 1;
};

std::size_t required_kernel_length(const StridedConvolution& conv, std::size_t out_count);

void convolve_serial(const StridedConvolution& conv, std::span<double> out);
void convolve_parallel(const StridedConvolution& conv, std::span<double> out);

/// x[i] = sqrt(psi(|h s[i]|^2)). Throws BreakdownError before any work if some
/// amplitude drives the receiver past rho_max.
void output_amplitudes_serial(const EhModel& model, double h_mag, std::span<const double> s, std::span<double> x);
void output_amplitudes_parallel(const EhModel& model, double h_mag, std::span<const double> s, std::span<double> x);

/// Received power |h s|^2 in model units. Values within 1e-12 relative above
/// rho_max (rounding from the amplitude cap) are clamped onto rho_max.
double received_rho(const EhModel& model, double h_mag, double s);

int max_threads();

}  // namespace swipt::kernels
