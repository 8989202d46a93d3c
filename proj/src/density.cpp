#include "driftlab/density.hpp"

#include <algorithm>
#include <cmath>

namespace driftlab {

namespace {

// Edges from lo to hi on whole multiples of width, covering [min, max].
std::vector<double> make_edges(double min_value, double max_value,
                               double width) {
  const double lo = std::floor(min_value / width) * width;
  double hi = std::ceil(max_value / width) * width;
  if (hi <= lo) hi = lo + width;  // all data on one boundary
  const auto bins =
      static_cast<std::size_t>(std::llround((hi - lo) / width));
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    edges[i] = lo + static_cast<double>(i) * width;
  return edges;
}

}  // namespace

void UniformRectDensity::validate() const {
  if (!(temp_range[0] < temp_range[1]) || !(co2_range[0] < co2_range[1]))
    throw DriftError(ErrorCode::InvalidConfig,
                     "uniform density rectangle is degenerate");
}

std::size_t HistogramDensity2D::axis_cell(std::span<const double> edges,
                                          double value) {
  const std::size_t cells = edges.size() - 1;
  if (value < edges.front() || value > edges.back()) return SIZE_MAX;
  if (value == edges.back()) return cells - 1;  // top edge closes the last cell
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

double HistogramDensity2D::operator()(double temperature,
                                      double co2) const noexcept {
  const std::size_t ti = axis_cell(temp_edges, temperature);
  const std::size_t ci = axis_cell(co2_edges, co2);
  if (ti == SIZE_MAX || ci == SIZE_MAX) return 0.0;
  return mass(ti, ci) / cell_area(ti, ci);
}

HistogramDensity2D estimate_histogram(std::span<const EnvPoint> points,
                                      double temp_bin_width,
                                      double co2_bin_width) {
  if (points.empty())
    throw DriftError(ErrorCode::EmptyInput, "no points to estimate from");
  if (!(temp_bin_width > 0.0) || !(co2_bin_width > 0.0))
    throw DriftError(ErrorCode::InvalidConfig, "bin widths must be > 0");

  double t_min = points[0].temperature, t_max = points[0].temperature;
  double c_min = points[0].reference_co2, c_max = points[0].reference_co2;
  for (const EnvPoint& p : points) {
    t_min = std::min(t_min, p.temperature);
    t_max = std::max(t_max, p.temperature);
    c_min = std::min(c_min, p.reference_co2);
    c_max = std::max(c_max, p.reference_co2);
  }

  HistogramDensity2D hist;
  hist.temp_edges = make_edges(t_min, t_max, temp_bin_width);
  hist.co2_edges = make_edges(c_min, c_max, co2_bin_width);
  hist.bin_prob.assign(hist.n_temp() * hist.n_co2(), 0.0);

  const double unit = 1.0 / static_cast<double>(points.size());
  for (const EnvPoint& p : points) {
    const std::size_t ti =
        HistogramDensity2D::axis_cell(hist.temp_edges, p.temperature);
    const std::size_t ci =
        HistogramDensity2D::axis_cell(hist.co2_edges, p.reference_co2);
    hist.bin_prob[ti * hist.n_co2() + ci] += unit;
  }
  return hist;
}

double coverage_diagnostic(const HistogramDensity2D& original,
                           const UniformRectDensity& desired) {
  desired.validate();
  double covered = 0.0;
  for (std::size_t ti = 0; ti < original.n_temp(); ++ti) {
    const double t0 = std::max(original.temp_edges[ti], desired.temp_range[0]);
    const double t1 =
        std::min(original.temp_edges[ti + 1], desired.temp_range[1]);
    if (t1 <= t0) continue;
    for (std::size_t ci = 0; ci < original.n_co2(); ++ci) {
      if (original.mass(ti, ci) <= 0.0) continue;
      const double c0 = std::max(original.co2_edges[ci], desired.co2_range[0]);
      const double c1 =
          std::min(original.co2_edges[ci + 1], desired.co2_range[1]);
      if (c1 <= c0) continue;
      covered += (t1 - t0) * (c1 - c0);
    }
  }
  return covered / desired.area();
}

}  // namespace driftlab
