#pragma once

#include <cstddef>
#include <vector>

#include "swipt/grid_pdf.hpp"

namespace swipt {

/// Output noise n ~ N(0, sigma2), sigma2 in watts.
struct NoiseSpec {
  double sigma2 = 1e-8;
};

void validate(const NoiseSpec& noise);

/// -int f ln f (nats) under the grid quadrature; 0 ln 0 = 0.
double differential_entropy(const GridPdf& pdf);

/// Entropy-power lower bound 1/2 ln(1 + e^{2 h_x} / (2 pi e sigma2)).
double epi_rate(double h_x, const NoiseSpec& noise);

struct MiOptions {
  double y_step_fraction = 1.0 / 16.0;  // y-grid step as a fraction of sigma; at most 1/4
  double padding_sigmas = 8.0;          // y-range beyond the support on each side
  bool parallel = true;
};

/// Density of y = x + n sampled on y0 + j*dy, j < values.size() (odd count).
struct OutputDensity {
  double y0 = 0.0;
  double dy = 0.0;
  std::vector<double> values;
};

OutputDensity output_density(const GridPdf& fx, const NoiseSpec& noise, const MiOptions& options = {});

/// I(x; x + n) = h(y) - h(n) in nats. Node-layout densities are treated as
/// Simpson-weighted point masses and must have a step of at most sigma/4;
/// cell-layout densities are convolved exactly (box * Gaussian).
double mutual_information(const GridPdf& fx, const NoiseSpec& noise, const MiOptions& options = {});

}  // namespace swipt
