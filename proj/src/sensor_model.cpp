#include "driftlab/sensor_model.hpp"

#include <cmath>
#include <set>

namespace driftlab {

void BeerLambertParams::validate() const {
  if (!(i0 > 0.0) || !std::isfinite(i0) || !(alpha > 0.0) ||
      !std::isfinite(alpha) || !(t_ref > 0.0) || !std::isfinite(t_ref))
    throw DriftError(ErrorCode::InvalidSpec,
                     "BeerLambertParams require i0 > 0, alpha > 0, t_ref > 0");
}

double estimate_co2(const BeerLambertParams& params, double temperature_c,
                    double ir_signal, std::size_t* clamped) {
  const double t_kelvin = temperature_c + kCelsiusToKelvin;
  if (!(t_kelvin > 0.0))
    throw DriftError(ErrorCode::NonPhysicalTemperature,
                     "temperature at or below absolute zero");
  if (!(ir_signal > 0.0))
    throw DriftError(ErrorCode::NonPositiveIr, "ir_signal must be > 0");
  const double y =
      -std::log(ir_signal / params.i0) * (t_kelvin / params.t_ref) / params.alpha;
  if (y < 0.0) {
    if (clamped) ++*clamped;
    return 0.0;
  }
  return y;
}

double forward_ir(const BeerLambertParams& params, double temperature_c,
                  double co2_ppm) {
  const double t_kelvin = temperature_c + kCelsiusToKelvin;
  if (!(t_kelvin > 0.0))
    throw DriftError(ErrorCode::NonPhysicalTemperature,
                     "temperature at or below absolute zero");
  return params.i0 * std::exp(-params.alpha * co2_ppm * params.t_ref / t_kelvin);
}

BeerLambertParams fit_params(std::span<const CalPoint> window) {
  if (window.size() < 3)
    throw DriftError(ErrorCode::DegenerateWindow,
                     "calibration needs at least 3 points");

  BeerLambertParams params;  // t_ref stays at default
  std::set<double> distinct_y;
  double sum_z = 0.0, sum_l = 0.0;
  for (const CalPoint& p : window) {
    if (!(p.ir_signal > 0.0))
      throw DriftError(ErrorCode::NonPositiveIr,
                       "calibration ir_signal must be > 0");
    const double t_kelvin = p.temperature_c + kCelsiusToKelvin;
    if (!(t_kelvin > 0.0))
      throw DriftError(ErrorCode::NonPhysicalTemperature,
                       "calibration temperature at or below absolute zero");
    distinct_y.insert(p.reference_co2);
    sum_z += p.reference_co2 * params.t_ref / t_kelvin;
    sum_l += std::log(p.ir_signal);
  }
  if (distinct_y.size() < 2)
    throw DriftError(ErrorCode::DegenerateWindow,
                     "calibration needs two distinct reference concentrations");

  // OLS of ln(ir) on z = y * t_ref / T_K: slope = -alpha, intercept = ln(i0).
  const double n = static_cast<double>(window.size());
  const double mean_z = sum_z / n;
  const double mean_l = sum_l / n;
  double s_zz = 0.0, s_zl = 0.0;
  for (const CalPoint& p : window) {
    const double z = p.reference_co2 * params.t_ref /
                     (p.temperature_c + kCelsiusToKelvin);
    const double dl = std::log(p.ir_signal) - mean_l;
    s_zz += (z - mean_z) * (z - mean_z);
    s_zl += (z - mean_z) * dl;
  }
  if (!(s_zz > 0.0))
    throw DriftError(ErrorCode::DegenerateWindow, "rank-deficient regressor");

  const double slope = s_zl / s_zz;
  const double intercept = mean_l - slope * mean_z;
  if (!(slope < 0.0))
    throw DriftError(ErrorCode::DegenerateWindow,
                     "fitted absorption scale is not positive");
  params.alpha = -slope;
  params.i0 = std::exp(intercept);
  return params;
}

double passthrough_estimator(double sensor_co2, bool* negative) {
  if (!std::isfinite(sensor_co2))
    throw DriftError(ErrorCode::NonFinite, "passthrough input must be finite");
  if (negative) *negative = sensor_co2 < 0.0;
  return sensor_co2;
}

double Estimator::predict(const Observation& obs, EstimatorStats* stats) const {
  if (mode == Mode::beer_lambert) {
    if (!obs.ir_signal)
      throw DriftError(ErrorCode::MissingSignal,
                       "beer-lambert estimator needs ir_signal");
    return estimate_co2(params, obs.temperature, *obs.ir_signal,
                        stats ? &stats->clamped_to_zero : nullptr);
  }
  if (!obs.sensor_co2)
    throw DriftError(ErrorCode::MissingSignal,
                     "passthrough estimator needs sensor_co2");
  bool negative = false;
  const double y = passthrough_estimator(*obs.sensor_co2, &negative);
  if (negative && stats) ++stats->negative_passthrough;
  return y;
}

bool Estimator::applicable_to(const SensorSeries& series) const {
  if (series.empty()) return false;
  return mode == Mode::beer_lambert ? series.has_ir() : series.has_sensor_co2();
}

}  // namespace driftlab
