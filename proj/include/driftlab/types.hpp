#ifndef DRIFTLAB_TYPES_HPP
#define DRIFTLAB_TYPES_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftlab/error.hpp"
#include "driftlab/time.hpp"

namespace driftlab {

/// Plausibility bounds for the temperature channel. These reject corrupt
/// records, not out-of-spec operation: cold ambient readings are legitimate
/// data even when the sensor is outside its rated range.
inline constexpr double kMinPlausibleTempC = -60.0;
inline constexpr double kMaxPlausibleTempC = 80.0;

/// One time-aligned record. `ir_signal` is the filtered IR intensity the
/// estimator inverts; `sensor_co2` is a precomputed concentration for
/// datasets that expose only the sensor's own CO2 output. At least one of
/// the two must be present.
struct Observation {
  std::int64_t timestamp = 0;  // Unix seconds, UTC
  double temperature = 0.0;    // deg C, sensor-measured
  std::optional<double> ir_signal;   // dimensionless, > 0
  std::optional<double> sensor_co2;  // ppm
  double reference_co2 = 0.0;        // ppm, co-located reference

  bool operator==(const Observation&) const = default;
};

/// Checks all Observation invariants; returns the input untouched on success.
/// Throws DriftError with NonPositiveIr, NonFinite, MissingSignal or
/// OutOfRange.
const Observation& validate_observation(const Observation& obs);

/// Ordered observations from one physical sensor. All observations share a
/// presence pattern: either every one carries ir_signal, or every one
/// carries sensor_co2 (or both).
struct SensorSeries {
  std::string sensor_id;
  std::vector<Observation> observations;
  std::int64_t cadence_s = 0;  // nominal sampling interval

  std::size_t size() const noexcept { return observations.size(); }
  bool empty() const noexcept { return observations.empty(); }

  bool has_ir() const noexcept {
    return !observations.empty() && observations.front().ir_signal.has_value();
  }
  bool has_sensor_co2() const noexcept {
    return !observations.empty() &&
           observations.front().sensor_co2.has_value();
  }

  /// Validates every observation plus the series-level invariants
  /// (strictly increasing timestamps, uniform presence pattern).
  void validate() const;
};

/// Per-sensor series keyed by sensor id.
struct Dataset {
  std::map<std::string, SensorSeries> series;

  std::size_t sensor_count() const noexcept { return series.size(); }
};

/// Evaluation protocol parameters. Defaults follow the reference protocol:
/// ten-minute averages, 99.9% outlier percentile, uniform desired density
/// over [0,20] degC x [400,500] ppm, 500 resamples per month, 2 degC x
/// 10 ppm histogram bins.
struct EvalConfig {
  std::int64_t averaging_window_s = 600;
  double outlier_quantile = 0.999;
  std::array<double, 2> desired_temp_range{0.0, 20.0};
  std::array<double, 2> desired_co2_range{400.0, 500.0};
  int resample_count = 500;
  std::uint64_t rng_seed = 0;
  double temp_bin_width = 2.0;  // degC
  double co2_bin_width = 10.0;  // ppm

  /// Throws DriftError{InvalidConfig} on degenerate ranges or non-positive
  /// window/count/bin widths.
  void validate() const;
};

/// Splits a series into UTC calendar months, preserving in-month order.
/// The union of the buckets is exactly the input.
std::map<MonthKey, SensorSeries> partition_by_month(const SensorSeries& series);

}  // namespace driftlab

#endif  // DRIFTLAB_TYPES_HPP
