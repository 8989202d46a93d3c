#ifndef DRIFTLAB_DENSITY_HPP
#define DRIFTLAB_DENSITY_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "driftlab/error.hpp"

namespace driftlab {

/// A point in the environmental plane the densities live on.
struct EnvPoint {
  double temperature = 0.0;   // degC
  double reference_co2 = 0.0;  // ppm
};

/// The desired density P_desired: uniform over a closed rectangle in
/// (temperature, co2). Boundary points count as inside.
struct UniformRectDensity {
  std::array<double, 2> temp_range{0.0, 20.0};
  std::array<double, 2> co2_range{400.0, 500.0};

  void validate() const;

  double area() const noexcept {
    return (temp_range[1] - temp_range[0]) * (co2_range[1] - co2_range[0]);
  }

  bool contains(double temperature, double co2) const noexcept {
    return temperature >= temp_range[0] && temperature <= temp_range[1] &&
           co2 >= co2_range[0] && co2 <= co2_range[1];
  }

  double operator()(double temperature, double co2) const noexcept {
    return contains(temperature, co2) ? 1.0 / area() : 0.0;
  }
};

/// The estimated environmental density P_original: a normalized 2-D
/// histogram. Cells are lower-edge inclusive; the overall top edge belongs
/// to the last cell so estimation and pointwise evaluation agree on every
/// input point.
struct HistogramDensity2D {
  std::vector<double> temp_edges;  // ascending, size n_temp()+1
  std::vector<double> co2_edges;   // ascending, size n_co2()+1
  std::vector<double> bin_prob;    // row-major [ti * n_co2() + ci], sums to 1

  std::size_t n_temp() const noexcept { return temp_edges.size() - 1; }
  std::size_t n_co2() const noexcept { return co2_edges.size() - 1; }

  double cell_area(std::size_t ti, std::size_t ci) const noexcept {
    return (temp_edges[ti + 1] - temp_edges[ti]) *
           (co2_edges[ci + 1] - co2_edges[ci]);
  }

  double mass(std::size_t ti, std::size_t ci) const noexcept {
    return bin_prob[ti * n_co2() + ci];
  }

  /// Cell index along one axis, or SIZE_MAX when outside the edges.
  static std::size_t axis_cell(std::span<const double> edges, double value);

  /// Probability density at a point; 0 outside the support.
  double operator()(double temperature, double co2) const noexcept;
};

/// Builds the histogram estimate of P_original. Edges span the data range
/// extended outward to whole multiples of the bin widths; each cell's mass
/// is count/n. Throws EmptyInput on an empty point set.
HistogramDensity2D estimate_histogram(std::span<const EnvPoint> points,
                                      double temp_bin_width,
                                      double co2_bin_width);

/// Fraction of the desired rectangle's area covered by histogram cells with
/// positive mass. 1.0 means the resampling target is fully supported by the
/// data; anything less flags regions the resampled set cannot represent.
double coverage_diagnostic(const HistogramDensity2D& original,
                           const UniformRectDensity& desired);

}  // namespace driftlab

#endif  // DRIFTLAB_DENSITY_HPP
