#include "driftlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "driftlab/rng.hpp"

namespace driftlab {

double rmse(std::span<const Observation> observations, const Estimator& f,
            EstimatorStats* stats) {
  if (observations.empty())
    throw DriftError(ErrorCode::EmptySeries, "rmse of empty series");
  double sum_sq = 0.0;
  for (const Observation& obs : observations) {
    const double err = f.predict(obs, stats) - obs.reference_co2;
    sum_sq += err * err;
  }
  return std::sqrt(sum_sq / static_cast<double>(observations.size()));
}

double rmse(const SensorSeries& series, const Estimator& f,
            EstimatorStats* stats) {
  return rmse(std::span<const Observation>{series.observations}, f, stats);
}

double rmse(const ResampledSeries& series, const Estimator& f,
            EstimatorStats* stats) {
  return rmse(std::span<const Observation>{series.observations}, f, stats);
}

std::uint64_t month_seed(std::uint64_t global_seed, std::string_view sensor_id,
                         const MonthKey& month) {
  return rng::substream(global_seed, "resample", rng::fnv1a(sensor_id),
                        static_cast<std::uint64_t>(month.index()));
}

std::vector<MonthEval> monthly_drift_eval(const SensorSeries& sensor,
                                          const EvalConfig& config,
                                          const Estimator& estimator) {
  config.validate();
  if (sensor.empty())
    throw DriftError(ErrorCode::EmptySeries, "nothing to evaluate");

  const UniformRectDensity desired{config.desired_temp_range,
                                   config.desired_co2_range};
  desired.validate();

  std::vector<MonthEval> results;
  for (const auto& [key, month_series] : partition_by_month(sensor)) {
    MonthEval eval;
    eval.month = key;
    eval.n_original = month_series.size();
    eval.rmse_original = rmse(month_series, estimator);

    std::vector<EnvPoint> points;
    points.reserve(month_series.size());
    for (const Observation& obs : month_series.observations)
      points.push_back(EnvPoint{obs.temperature, obs.reference_co2});

    const HistogramDensity2D original = estimate_histogram(
        points, config.temp_bin_width, config.co2_bin_width);
    eval.coverage = coverage_diagnostic(original, desired);

    try {
      const WeightedSet weights = compute_weights(points, desired, original);
      eval.ess = effective_sample_size(weights);
      eval.low_confidence = eval.ess < kLowConfidenceEss;

      ResamplePlan plan;
      plan.count = config.resample_count;
      plan.seed = month_seed(config.rng_seed, sensor.sensor_id, key);
      const ResampledSeries drawn = resample(month_series, weights, plan);

      eval.n_resampled = drawn.size();
      eval.rmse_resampled = rmse(drawn, estimator);
      eval.rmse_difference = eval.rmse_original - eval.rmse_resampled;
      eval.provenance = drawn.source_indices;
    } catch (const DriftError& e) {
      if (e.code() != ErrorCode::ZeroWeightSum) throw;
      // No data in the desired support: report a gap, not an error.
      eval.gap = true;
      eval.rmse_resampled = std::numeric_limits<double>::quiet_NaN();
      eval.rmse_difference = std::numeric_limits<double>::quiet_NaN();
      eval.ess = 0.0;
    }
    results.push_back(std::move(eval));
  }
  return results;
}

DriftReport fleet_aggregate(std::vector<SensorReport> sensors) {
  if (sensors.empty())
    throw DriftError(ErrorCode::EmptyInput, "no sensor reports to aggregate");

  DriftReport report;
  report.sensors = std::move(sensors);

  std::map<MonthKey, std::vector<const MonthEval*>> by_month;
  for (const SensorReport& sr : report.sensors)
    for (const MonthEval& me : sr.months)
      if (!me.gap) by_month[me.month].push_back(&me);

  for (const auto& [key, evals] : by_month) {
    FleetMonthStats stats;
    stats.month = key;
    stats.n_sensors = evals.size();
    std::vector<double> resampled, differences;
    resampled.reserve(evals.size());
    differences.reserve(evals.size());
    for (const MonthEval* me : evals) {
      resampled.push_back(me->rmse_resampled);
      differences.push_back(me->rmse_difference);
    }
    stats.mean_rmse_resampled = mean(resampled);
    stats.std_rmse_resampled = population_std(resampled);
    stats.difference_box = box_stats(std::move(differences));
    report.fleet.push_back(std::move(stats));
  }

  // Mean over sensors of max-over-months |difference|; sensors with no
  // evaluable month contribute nothing.
  double sum_max = 0.0;
  std::size_t counted = 0;
  for (const SensorReport& sr : report.sensors) {
    double max_abs = -1.0;
    for (const MonthEval& me : sr.months)
      if (!me.gap) max_abs = std::max(max_abs, std::abs(me.rmse_difference));
    if (max_abs >= 0.0) {
      sum_max += max_abs;
      ++counted;
    }
  }
  report.mean_max_abs_difference =
      counted > 0 ? sum_max / static_cast<double>(counted) : 0.0;
  return report;
}

std::vector<ScatterPoint> error_temperature_scatter(const SensorSeries& series,
                                                    const Estimator& f) {
  if (series.empty())
    throw DriftError(ErrorCode::EmptySeries, "scatter of empty series");
  std::vector<ScatterPoint> points;
  points.reserve(series.size());
  for (const Observation& obs : series.observations)
    points.push_back(ScatterPoint{obs.timestamp, obs.temperature,
                                  f.predict(obs) - obs.reference_co2});
  return points;
}

std::vector<DistributionSummary> monthly_distribution_summary(
    const SensorSeries& series, Channel channel) {
  if (series.empty())
    throw DriftError(ErrorCode::EmptySeries, "summary of empty series");

  std::vector<DistributionSummary> out;
  for (const auto& [key, month_series] : partition_by_month(series)) {
    std::vector<double> values;
    values.reserve(month_series.size());
    for (const Observation& obs : month_series.observations)
      values.push_back(channel == Channel::temperature ? obs.temperature
                                                       : obs.reference_co2);
    std::sort(values.begin(), values.end());

    DistributionSummary s;
    s.month = key;
    s.count = values.size();
    s.min = values.front();
    s.max = values.back();
    s.p1 = nearest_rank_quantile(values, 0.01);
    s.p5 = nearest_rank_quantile(values, 0.05);
    s.p25 = nearest_rank_quantile(values, 0.25);
    s.p50 = nearest_rank_quantile(values, 0.50);
    s.p75 = nearest_rank_quantile(values, 0.75);
    s.p95 = nearest_rank_quantile(values, 0.95);
    s.p99 = nearest_rank_quantile(values, 0.99);
    out.push_back(s);
  }
  return out;
}

}  // namespace driftlab
