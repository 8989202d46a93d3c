#include "driftlab/types.hpp"

#include <cmath>

namespace driftlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveIr: return "NonPositiveIr";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::MissingSignal: return "MissingSignal";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DegenerateWindow: return "DegenerateWindow";
    case ErrorCode::NonPhysicalTemperature: return "NonPhysicalTemperature";
    case ErrorCode::ZeroWeightSum: return "ZeroWeightSum";
    case ErrorCode::OriginalZeroAtPoint: return "OriginalZeroAtPoint";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyAfterFiltering: return "EmptyAfterFiltering";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

const Observation& validate_observation(const Observation& obs) {
  if (!obs.ir_signal && !obs.sensor_co2)
    throw DriftError(ErrorCode::MissingSignal,
                     "observation carries neither ir_signal nor sensor_co2");
  if (!std::isfinite(obs.temperature) || !std::isfinite(obs.reference_co2) ||
      (obs.ir_signal && !std::isfinite(*obs.ir_signal)) ||
      (obs.sensor_co2 && !std::isfinite(*obs.sensor_co2)))
    throw DriftError(ErrorCode::NonFinite, "non-finite field in observation");
  if (obs.ir_signal && *obs.ir_signal <= 0.0)
    throw DriftError(ErrorCode::NonPositiveIr, "ir_signal must be > 0");
  if (obs.reference_co2 < 0.0)
    throw DriftError(ErrorCode::OutOfRange, "reference_co2 must be >= 0");
  if (obs.temperature < kMinPlausibleTempC ||
      obs.temperature > kMaxPlausibleTempC)
    throw DriftError(ErrorCode::OutOfRange,
                     "temperature outside plausibility bounds [-60, 80] degC");
  return obs;
}

void SensorSeries::validate() const {
  const bool want_ir = has_ir();
  const bool want_co2 = has_sensor_co2();
  std::int64_t prev = 0;
  bool first = true;
  for (const Observation& obs : observations) {
    validate_observation(obs);
    if (!first && obs.timestamp <= prev)
      throw DriftError(ErrorCode::OutOfRange,
                       "timestamps not strictly increasing in series " +
                           sensor_id);
    if (obs.ir_signal.has_value() != want_ir ||
        obs.sensor_co2.has_value() != want_co2)
      throw DriftError(ErrorCode::MissingSignal,
                       "mixed signal presence pattern in series " + sensor_id);
    prev = obs.timestamp;
    first = false;
  }
}

void EvalConfig::validate() const {
  if (averaging_window_s <= 0)
    throw DriftError(ErrorCode::InvalidConfig, "averaging window must be > 0");
  if (!(outlier_quantile > 0.0 && outlier_quantile <= 1.0))
    throw DriftError(ErrorCode::InvalidConfig,
                     "outlier quantile must be in (0, 1]");
  if (!(desired_temp_range[0] < desired_temp_range[1]))
    throw DriftError(ErrorCode::InvalidConfig,
                     "desired temperature range is degenerate");
  if (!(desired_co2_range[0] < desired_co2_range[1]))
    throw DriftError(ErrorCode::InvalidConfig,
                     "desired co2 range is degenerate");
  if (resample_count < 1)
    throw DriftError(ErrorCode::InvalidConfig, "resample count must be >= 1");
  if (!(temp_bin_width > 0.0) || !(co2_bin_width > 0.0))
    throw DriftError(ErrorCode::InvalidConfig, "bin widths must be > 0");
}

std::map<MonthKey, SensorSeries> partition_by_month(const SensorSeries& series) {
  std::map<MonthKey, SensorSeries> buckets;
  for (const Observation& obs : series.observations) {
    const MonthKey key = month_of(obs.timestamp);
    auto [it, inserted] = buckets.try_emplace(key);
    if (inserted) {
      it->second.sensor_id = series.sensor_id;
      it->second.cadence_s = series.cadence_s;
    }
    it->second.observations.push_back(obs);
  }
  return buckets;
}

}  // namespace driftlab
