#ifndef DRIFTLAB_STATS_HPP
#define DRIFTLAB_STATS_HPP

#include <span>
#include <vector>

namespace driftlab {

/// Nearest-rank empirical quantile: the value at rank ceil(q*n) of the
/// ascending sort (1-based), for q in (0, 1]. Input must be sorted.
double nearest_rank_quantile(std::span<const double> sorted_ascending,
                             double q);

double mean(std::span<const double> values);

/// Population standard deviation (divide by n, not n-1).
double population_std(std::span<const double> values);

/// Tukey-style box summary. Median is the midpoint convention (average of
/// the two central order statistics for even n); quartiles are medians of
/// the lower/upper halves excluding the middle element for odd n. Whiskers
/// sit on the most extreme data points within 1.5*IQR of the quartiles;
/// everything beyond is listed in `outliers`.
struct BoxStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
  std::vector<double> outliers;
};

BoxStats box_stats(std::vector<double> values);

}  // namespace driftlab

#endif  // DRIFTLAB_STATS_HPP
