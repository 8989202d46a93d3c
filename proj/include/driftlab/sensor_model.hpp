#ifndef DRIFTLAB_SENSOR_MODEL_HPP
#define DRIFTLAB_SENSOR_MODEL_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "driftlab/types.hpp"

namespace driftlab {

inline constexpr double kCelsiusToKelvin = 273.15;

/// Calibration constants of the temperature-compensated Beer-Lambert
/// estimator. The compensation scales optical density by t_ref/T_K, the
/// ideal-gas number-density correction at fixed pressure. The vendor's
/// actual compensation polynomial is proprietary; this form is a documented
/// stand-in and everything downstream treats it as opaque behind
/// estimate_co2 / forward_ir.
struct BeerLambertParams {
  double i0 = 1.0;        // reference intensity at zero absorber
  double alpha = 1e-4;    // absorption scale, 1/ppm at t_ref
  double t_ref = 293.15;  // reference temperature, Kelvin

  void validate() const;
  bool operator==(const BeerLambertParams&) const = default;
};

/// Inverts the IR signal to a concentration:
///   y_hat = max(0, -ln(ir / i0) * (T_K / t_ref) / alpha)
/// Noisy IR near i0 legitimately crosses zero absorbance; negative results
/// clamp to 0 and bump *clamped when given.
double estimate_co2(const BeerLambertParams& params, double temperature_c,
                    double ir_signal, std::size_t* clamped = nullptr);

/// Forward model used by the synthesizer:
///   ir = i0 * exp(-alpha * y * t_ref / T_K)
/// Strictly decreasing in y; equals i0 at y = 0. Exact inverse of
/// estimate_co2 by construction.
double forward_ir(const BeerLambertParams& params, double temperature_c,
                  double co2_ppm);

/// One calibration sample: sensor temperature, IR signal, reference CO2.
struct CalPoint {
  double temperature_c = 0.0;
  double ir_signal = 0.0;
  double reference_co2 = 0.0;
};

/// Least-squares fit of ln(ir) = ln(i0) - alpha * y * t_ref/T_K with t_ref
/// fixed at its default. Needs >= 3 points with at least two distinct
/// reference concentrations; throws DegenerateWindow otherwise.
BeerLambertParams fit_params(std::span<const CalPoint> window);

/// Identity estimator for datasets exposing sensor-reported CO2 instead of
/// raw IR. Negative inputs pass through unchanged; *negative flags them.
double passthrough_estimator(double sensor_co2, bool* negative = nullptr);

struct EstimatorStats {
  std::size_t clamped_to_zero = 0;
  std::size_t negative_passthrough = 0;
};

/// The measurement function f applied to observations: either the
/// Beer-Lambert inversion of (temperature, ir_signal) or the passthrough of
/// sensor_co2.
struct Estimator {
  enum class Mode { beer_lambert, passthrough };

  Mode mode = Mode::passthrough;
  BeerLambertParams params{};

  static Estimator beer_lambert(const BeerLambertParams& p) {
    return Estimator{Mode::beer_lambert, p};
  }
  static Estimator passthrough() { return Estimator{}; }

  /// Throws MissingSignal if the observation lacks the channel this mode
  /// needs.
  double predict(const Observation& obs, EstimatorStats* stats = nullptr) const;

  /// True when every observation of the series carries the needed channel.
  bool applicable_to(const SensorSeries& series) const;
};

}  // namespace driftlab

#endif  // DRIFTLAB_SENSOR_MODEL_HPP
