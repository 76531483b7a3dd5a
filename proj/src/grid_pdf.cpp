#include "swipt/grid_pdf.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "swipt/errors.hpp"

namespace swipt {

GridPdf::GridPdf(double lo, double hi, GridLayout layout, std::vector<double> density)
    : lo_(lo), hi_(hi), layout_(layout), density_(std::move(density)) {
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) throw InvariantError("GridPdf: need finite lo < hi");
  for (double d : density_) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InvariantError("GridPdf: density must be finite and >= 0");
  }
  if (layout_ == GridLayout::nodes) {
    if (density_.size() < 3 || density_.size() % 2 == 0) {
      throw InvariantError("GridPdf: node layout needs an odd count >= 3");
    }
    step_ = (hi_ - lo_) / static_cast<double>(density_.size() - 1);
  } else {
    if (density_.empty()) throw InvariantError("GridPdf: cell layout needs at least one cell");
    step_ = (hi_ - lo_) / static_cast<double>(density_.size());
  }
  build_prefix();
}

GridPdf GridPdf::from_nodes(double lo, double hi, std::vector<double> density) {
  return GridPdf(lo, hi, GridLayout::nodes, std::move(density));
}

GridPdf GridPdf::from_cells(double lo, double hi, std::vector<double> density) {
  return GridPdf(lo, hi, GridLayout::cells, std::move(density));
}

GridPdf GridPdf::from_cell_masses(double lo, double hi, std::vector<double> masses) {
  double total = 0.0;
  for (double m : masses) total += m;
  if (!(total > 0.0)) throw InvariantError("GridPdf: cell masses must have positive total");
  const double width = (hi - lo) / static_cast<double>(masses.size());
  for (double& m : masses) m = m / total / width;
  return GridPdf(lo, hi, GridLayout::cells, std::move(masses));
}

GridPdf GridPdf::spike(double lo, double hi, std::size_t cells, double at) {
  if (cells == 0) throw InvariantError("GridPdf: spike needs at least one cell");
  std::vector<double> density(cells, 0.0);
  const double width = (hi - lo) / static_cast<double>(cells);
  const auto idx = static_cast<std::size_t>(std::clamp((at - lo) / width, 0.0, static_cast<double>(cells - 1)));
  density[idx] = 1.0 / width;
  return GridPdf(lo, hi, GridLayout::cells, std::move(density));
}

double GridPdf::abscissa(std::size_t i) const {
  return layout_ == GridLayout::nodes ? lo_ + static_cast<double>(i) * step_
                                      : lo_ + (static_cast<double>(i) + 0.5) * step_;
}

double GridPdf::weight(std::size_t i) const {
  if (layout_ == GridLayout::cells) return step_;
  if (i == 0 || i + 1 == density_.size()) return step_ / 3.0;
  return (i % 2 ? 4.0 : 2.0) * step_ / 3.0;
}

double GridPdf::mass() const { return prefix_.back(); }

void GridPdf::build_prefix() {
  if (layout_ == GridLayout::cells) {
    prefix_.assign(density_.size() + 1, 0.0);
    for (std::size_t i = 0; i < density_.size(); ++i) prefix_[i + 1] = prefix_[i] + density_[i] * step_;
    return;
  }
  const std::size_t pairs = (density_.size() - 1) / 2;
  prefix_.assign(pairs + 1, 0.0);
  for (std::size_t k = 0; k < pairs; ++k) {
    const double f0 = density_[2 * k];
    const double f1 = density_[2 * k + 1];
    const double f2 = density_[2 * k + 2];
    prefix_[k + 1] = prefix_[k] + step_ / 3.0 * (f0 + 4.0 * f1 + f2);
  }
}

double GridPdf::cdf(double x) const {
  if (!(x > lo_)) return 0.0;
  if (x >= hi_) return prefix_.back();
  if (layout_ == GridLayout::cells) {
    const auto i = std::min(static_cast<std::size_t>((x - lo_) / step_), density_.size() - 1);
    const double edge = lo_ + static_cast<double>(i) * step_;
    return prefix_[i] + density_[i] * (x - edge);
  }
  const std::size_t pairs = prefix_.size() - 1;
  const auto k = std::min(static_cast<std::size_t>((x - lo_) / (2.0 * step_)), pairs - 1);
  const double t = (x - (lo_ + 2.0 * static_cast<double>(k) * step_)) / step_;
  const double f0 = density_[2 * k];
  const double f1 = density_[2 * k + 1];
  const double f2 = density_[2 * k + 2];
  const double a = 0.5 * (-3.0 * f0 + 4.0 * f1 - f2);
  const double b = 0.5 * (f0 - 2.0 * f1 + f2);
  return prefix_[k] + step_ * t * (f0 + t * (a / 2.0 + t * b / 3.0));
}

double GridPdf::density_at(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  if (layout_ == GridLayout::cells) {
    const auto i = std::min(static_cast<std::size_t>((x - lo_) / step_), density_.size() - 1);
    return density_[i];
  }
  const std::size_t pairs = prefix_.size() - 1;
  const auto k = std::min(static_cast<std::size_t>((x - lo_) / (2.0 * step_)), pairs - 1);
  const double t = (x - (lo_ + 2.0 * static_cast<double>(k) * step_)) / step_;
  const double f0 = density_[2 * k];
  const double f1 = density_[2 * k + 1];
  const double f2 = density_[2 * k + 2];
  const double a = 0.5 * (-3.0 * f0 + 4.0 * f1 - f2);
  const double b = 0.5 * (f0 - 2.0 * f1 + f2);
  return std::max(0.0, f0 + t * (a + t * b));
}

GridPdf GridPdf::normalized() const {
  const double m = mass();
  if (!(m > 0.0)) throw InvariantError("GridPdf: cannot normalise a zero-mass density");
  std::vector<double> d(density_);
  for (double& v : d) v /= m;
  return GridPdf(lo_, hi_, layout_, std::move(d));
}

double total_variation(const GridPdf& a, const GridPdf& b, std::size_t cells) {
  const double lo = std::min(a.lo(), b.lo());
  const double hi = std::max(a.hi(), b.hi());
  const double width = (hi - lo) / static_cast<double>(cells);
  double tv = 0.0;
  double fa_prev = 0.0;
  double fb_prev = 0.0;
  for (std::size_t i = 1; i <= cells; ++i) {
    const double x = i == cells ? hi : lo + static_cast<double>(i) * width;
    const double fa = a.cdf(x);
    const double fb = b.cdf(x);
    tv += std::fabs((fa - fa_prev) - (fb - fb_prev));
    fa_prev = fa;
    fb_prev = fb;
  }
  return 0.5 * tv;
}

void write_pdf_csv(std::ostream& out, const GridPdf& pdf) {
  const auto old = out.precision(17);
  out << "x,density\n";
  for (std::size_t i = 0; i < pdf.size(); ++i) out << pdf.abscissa(i) << ',' << pdf.density()[i] << '\n';
  out.precision(old);
}

}  // namespace swipt
