#ifndef DRIFTLAB_METRICS_HPP
#define DRIFTLAB_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/resample.hpp"
#include "driftlab/sensor_model.hpp"
#include "driftlab/stats.hpp"
#include "driftlab/types.hpp"

namespace driftlab {

/// Sample RMSE sqrt(mean((f(x) - y)^2)) over observations.
double rmse(std::span<const Observation> observations, const Estimator& f,
            EstimatorStats* stats = nullptr);
double rmse(const SensorSeries& series, const Estimator& f,
            EstimatorStats* stats = nullptr);
double rmse(const ResampledSeries& series, const Estimator& f,
            EstimatorStats* stats = nullptr);

/// Months with ESS below this are evaluated but flagged unreliable.
inline constexpr double kLowConfidenceEss = 10.0;

/// One sensor-month of the drift evaluation. `gap = true` marks months that
/// could not be evaluated (no data in the desired support); their resampled
/// fields are meaningless and they are excluded from fleet statistics.
struct MonthEval {
  MonthKey month;
  std::size_t n_original = 0;
  std::size_t n_resampled = 0;
  double rmse_original = 0.0;
  double rmse_resampled = 0.0;
  double rmse_difference = 0.0;  // original - resampled
  double ess = 0.0;
  double coverage = 0.0;  // desired-rectangle area fraction with data
  bool low_confidence = false;
  bool gap = false;
  std::vector<std::uint32_t> provenance;  // source index per draw
};

/// Resampling seed for one sensor-month, derived from the global seed so
/// that adding or removing sensors never perturbs another sensor's draws.
std::uint64_t month_seed(std::uint64_t global_seed, std::string_view sensor_id,
                         const MonthKey& month);

/// The core monthly protocol: per calendar month, estimate P_original from
/// that month's points, weight against the configured desired density,
/// resample, and evaluate RMSE on both the original and the resampled data.
/// The sensor series must already be preprocessed (aligned and
/// outlier-filtered).
std::vector<MonthEval> monthly_drift_eval(const SensorSeries& sensor,
                                          const EvalConfig& config,
                                          const Estimator& estimator);

struct SensorReport {
  std::string sensor_id;
  std::vector<MonthEval> months;
};

/// Across-sensor statistics for one month. The +/- 1 std band uses the
/// population deviation: the evaluated sensors are the whole fleet, not a
/// sample of one.
struct FleetMonthStats {
  MonthKey month;
  std::size_t n_sensors = 0;
  double mean_rmse_resampled = 0.0;
  double std_rmse_resampled = 0.0;
  BoxStats difference_box;
};

struct DriftReport {
  std::vector<SensorReport> sensors;
  std::vector<FleetMonthStats> fleet;
  /// Mean over sensors of the maximum absolute monthly RMSE difference.
  double mean_max_abs_difference = 0.0;
};

DriftReport fleet_aggregate(std::vector<SensorReport> sensors);

struct ScatterPoint {
  std::int64_t timestamp = 0;
  double temperature = 0.0;
  double error = 0.0;  // f(x) - y, signed
};

/// Per-observation signed error with temperature and timestamp; the
/// plot-ready form of the error-vs-temperature scatter.
std::vector<ScatterPoint> error_temperature_scatter(const SensorSeries& series,
                                                    const Estimator& f);

enum class Channel { temperature, reference_co2 };

/// Plot-ready monthly distribution summary (violin-plot stand-in):
/// nearest-rank quantiles plus extremes and counts.
struct DistributionSummary {
  MonthKey month;
  std::size_t count = 0;
  double min = 0.0;
  double p1 = 0.0, p5 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p95 = 0.0,
         p99 = 0.0;
  double max = 0.0;
};

std::vector<DistributionSummary> monthly_distribution_summary(
    const SensorSeries& series, Channel channel);

}  // namespace driftlab

#endif  // DRIFTLAB_METRICS_HPP
