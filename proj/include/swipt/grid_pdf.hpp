#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace swipt {

inline constexpr std::size_t kDefaultGridSize = 4001;

/// How the density samples relate to the support.
///  - nodes: M (odd) samples at lo + i (hi-lo)/(M-1), integrated by composite
///    Simpson; used for smooth analytic densities.
///  - cells: M piecewise-constant cells of width (hi-lo)/M, integrated exactly;
///    used for histograms and exact-mass constructions.
enum class GridLayout { nodes, cells };

/// Probability density on a uniform grid over [lo, hi]. Immutable.
class GridPdf {
 public:
  static GridPdf from_nodes(double lo, double hi, std::vector<double> density);
  static GridPdf from_cells(double lo, double hi, std::vector<double> density);
  /// Cells whose masses (not densities) are given; masses are rescaled to sum to one.
  static GridPdf from_cell_masses(double lo, double hi, std::vector<double> masses);
  /// Single-cell spike of width (hi-lo)/cells containing `at`.
  static GridPdf spike(double lo, double hi, std::size_t cells, double at);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  GridLayout layout() const { return layout_; }
  std::size_t size() const { return density_.size(); }
  /// Node spacing or cell width.
  double step() const { return step_; }
  std::span<const double> density() const { return density_; }

  /// Node position or cell centre.
  double abscissa(std::size_t i) const;
  /// Quadrature weight: Simpson weight for nodes, cell width for cells.
  double weight(std::size_t i) const;
  /// Probability carried by sample i (weight * density).
  double mass_of(std::size_t i) const { return weight(i) * density_[i]; }

  double mass() const;

  /// Expectation of g(x) under the grid quadrature.
  template <class G>
  double expect(G&& g) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < density_.size(); ++i) {
      if (density_[i] != 0.0) acc += mass_of(i) * g(abscissa(i));
    }
    return acc;
  }

  /// Cumulative mass up to x. Piecewise linear for cells; for nodes the
  /// integral of the per-panel-pair quadratic interpolant, so cdf(hi) equals
  /// the Simpson mass.
  double cdf(double x) const;

  /// Density at x: cell value, or the quadratic interpolant between nodes.
  double density_at(double x) const;

  GridPdf normalized() const;

 private:
  GridPdf(double lo, double hi, GridLayout layout, std::vector<double> density);
  void build_prefix();

  double lo_;
  double hi_;
  GridLayout layout_;
  double step_;
  std::vector<double> density_;
  std::vector<double> prefix_;  // cumulative mass at cell edges / even nodes
};

/// Total variation distance estimated on a common partition of `cells` bins.
double total_variation(const GridPdf& a, const GridPdf& b, std::size_t cells = 20000);

/// Writes `x,density` rows.
void write_pdf_csv(std::ostream& out, const GridPdf& pdf);

}  // namespace swipt
