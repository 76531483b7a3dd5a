#pragma once

#include <cstddef>
#include <limits>

#include "swipt/eh_model.hpp"
#include "swipt/grid_pdf.hpp"

namespace swipt {

/// Multipliers of the maximum-entropy output density exp(-mu0 + mu2 x^2) on
/// [0, sqrt(p_max_bar)] with E{x^2} = p_req_bar.
struct MaxEntParams {
  double mu0 = 0.0;
  double mu2 = 0.0;
  double p_max_bar = 0.0;
  double p_req_bar = 0.0;
};

/// mu0 = mu2 P_max + ln(sqrt(P_max) / (1 + 2 mu2 P_req)), the normaliser that
/// pairs with a root mu2 of the moment equation.
double maxent_mu0(double mu2, double p_max_bar, double p_req_bar);

/// Uniform density 1/sqrt(P_max) on [0, sqrt(P_max)] (node layout).
GridPdf uniform_output_pdf(double p_max_bar, std::size_t grid_size = kDefaultGridSize);

/// exp(-mu0 + mu2 x^2) on [0, sqrt(P_max)] (node layout). For large mu2 the
/// grid starts where the density has fallen below e^-40 of its peak so the
/// nodes resolve the mass. Throws InconsistencyError when the sampled density
/// is off normalisation by more than 1e-4.
GridPdf maxent_output_pdf(const MaxEntParams& params, std::size_t grid_size = kDefaultGridSize);

/// Realises an output-amplitude density as a transmit-amplitude density
/// through the first (increasing) segment of psi: s = sqrt(psi^-1(x^2)) / |h|.
/// Cell masses are exact cdf differences of fx, so total mass is preserved.
/// Throws RangeError when the support of fx has no first-segment preimage
/// within the amplitude cap.
GridPdf map_output_to_input_pdf(const GridPdf& fx, const EhModel& model, double h_mag,
                                std::size_t grid_size = kDefaultGridSize,
                                double a_bar = std::numeric_limits<double>::infinity());

/// Distribution of x = sqrt(psi(|h s|^2)) for s ~ fs. Each sub-interval of a
/// fine s-grid carries its exact mass, spread uniformly over the x-interval
/// it maps to; non-monotone psi simply accumulates mass from every branch.
GridPdf pushforward_input_to_output(const GridPdf& fs, const EhModel& model, double h_mag, std::size_t bins,
                                   std::size_t fine_points = 100000);

/// N(a_bar/2, sigma_s^2) restricted to [0, a_bar] and renormalised, with
/// exact cell masses (cell layout).
GridPdf truncated_gaussian_pdf(double a_bar, double sigma_s, std::size_t grid_size = kDefaultGridSize);

}  // namespace swipt
