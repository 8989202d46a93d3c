#include "driftlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include "driftlab/error.hpp"

namespace driftlab {

double nearest_rank_quantile(std::span<const double> sorted_ascending,
                             double q) {
  if (sorted_ascending.empty())
    throw DriftError(ErrorCode::EmptyInput, "quantile of empty data");
  if (!(q > 0.0 && q <= 1.0))
    throw DriftError(ErrorCode::InvalidConfig, "quantile must be in (0, 1]");
  const auto n = sorted_ascending.size();
  // ceil(q*n) with a hair of slack: binary rounding of decimal quantiles
  // (0.999 * 1000 = 1000.0000...2) must not bump the mathematical rank.
  auto rank = static_cast<std::size_t>(
      std::ceil(q * static_cast<double>(n) * (1.0 - 1e-12)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted_ascending[rank - 1];
}

double mean(std::span<const double> values) {
  if (values.empty())
    throw DriftError(ErrorCode::EmptyInput, "mean of empty data");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

namespace {

// Midpoint median of a sorted, nonempty range.
double median_sorted(std::span<const double> sorted) {
  const auto n = sorted.size();
  return n % 2 == 1 ? sorted[n / 2]
                    : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

}  // namespace

BoxStats box_stats(std::vector<double> values) {
  if (values.empty())
    throw DriftError(ErrorCode::EmptyInput, "box stats of empty data");
  std::sort(values.begin(), values.end());
  std::span<const double> all{values};

  BoxStats box;
  box.median = median_sorted(all);
  const auto n = values.size();
  if (n == 1) {
    box.q1 = box.q3 = box.median;
  } else {
    const auto half = n / 2;  // middle element excluded for odd n
    box.q1 = median_sorted(all.subspan(0, half));
    box.q3 = median_sorted(all.subspan(n - half, half));
  }

  const double iqr = box.q3 - box.q1;
  const double lo_fence = box.q1 - 1.5 * iqr;
  const double hi_fence = box.q3 + 1.5 * iqr;
  box.whisker_lo = box.median;
  box.whisker_hi = box.median;
  for (double v : values) {
    if (v >= lo_fence) {
      box.whisker_lo = v;  // first value inside the fence (sorted order)
      break;
    }
  }
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    if (*it <= hi_fence) {
      box.whisker_hi = *it;
      break;
    }
  }
  for (double v : values)
    if (v < lo_fence || v > hi_fence) box.outliers.push_back(v);
  return box;
}

}  // namespace driftlab
