#ifndef DRIFTLAB_SYNTH_HPP
#define DRIFTLAB_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftlab/density.hpp"
#include "driftlab/sensor_model.hpp"
#include "driftlab/types.hpp"

namespace driftlab {

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kSecondsPerYear = 365.25 * kSecondsPerDay;

/// Shared environment model: annual and diurnal sinusoids plus noise for
/// temperature; baseline, sinusoids, a spike process and noise for CO2.
/// Spikes arrive as a Poisson process and decay exponentially, giving the
/// right-skewed concentration distribution seen in urban reference data.
struct EnvironmentSpec {
  double temp_mean_c = 10.0;
  double temp_annual_amplitude_c = 12.0;
  double temp_annual_phase_rad = 0.0;  // 0 => coldest at start
  double temp_diurnal_amplitude_c = 4.0;
  double temp_noise_sigma_c = 1.5;

  double co2_baseline_ppm = 430.0;
  double co2_annual_amplitude_ppm = 10.0;
  double co2_diurnal_amplitude_ppm = 15.0;
  double co2_spike_rate_per_hour = 0.05;
  double co2_spike_magnitude_ppm = 120.0;
  double co2_spike_decay_hours = 3.0;
  double co2_noise_sigma_ppm = 4.0;

  std::int64_t start_ts = 1483228800;  // 2017-01-01T00:00:00Z
  std::int64_t duration_s = 0;
  std::int64_t cadence_s = 600;

  void validate() const;
};

struct GainDriftSpec {
  enum class Mode { none, linear, random_walk };
  Mode mode = Mode::none;
  double slope_per_year = 0.0;  // linear: g(t) = 1 + slope * years
  double walk_sigma = 0.0;      // random walk on ln g, per step, seeded
};

/// Instrumental ground truth for one synthetic sensor. The conditional
/// response p(x_I | x_T, y) is fully determined by these fields:
///   x_I(t) = g_drift(t) * g_lowtemp(x_T) * forward_ir(true_params,
///            x_T + temp_bias_c, y) * exp(noise)
/// `calibrated_params` is what the estimator f uses; any mismatch with
/// `true_params` is frozen calibration error. The low-temperature knee
/// models out-of-range response loss: below `low_temp_knee_c` the log-gain
/// falls off linearly at `low_temp_gain_per_c`, inflating estimated CO2 at
/// cold temperatures.
struct InstrumentSpec {
  std::string sensor_id;
  BeerLambertParams true_params{};
  BeerLambertParams calibrated_params{};
  GainDriftSpec gain{};
  double ir_noise_sigma = 0.0;  // applied to ln IR, multiplicative
  double temp_bias_c = 0.0;     // gas temperature minus reported temperature
  std::optional<double> low_temp_knee_c;
  double low_temp_gain_per_c = 0.0;

  // Determinism context, filled in by make_fleet / generate_fleet.
  std::uint64_t noise_key = 0;
  std::uint64_t gain_key = 0;
  std::int64_t start_ts = 0;
  std::int64_t cadence_s = 600;

  void validate(std::int64_t duration_s) const;

  /// ln of the time-drift gain component alone. Random-walk drift is
  /// replayed from gain_key, so random access agrees with sequential
  /// generation.
  double drift_ln_gain(std::int64_t ts) const;

  /// ln of the low-temperature response loss; 0 at or above the knee.
  double low_temp_ln_gain(double temperature_c) const;

  /// ln of the combined gain at an absolute time and reported temperature.
  double ln_gain(std::int64_t ts, double temperature_c) const;

  /// The instrument's IR response given environment and a standard-normal
  /// noise draw.
  double synth_ir(std::int64_t ts, double temperature_c, double co2_ppm,
                  double noise) const;
};

struct EnvSample {
  std::int64_t ts = 0;
  double temperature = 0.0;
  double co2 = 0.0;
};

/// The shared (temperature, reference CO2) trajectory; deterministic per
/// seed. All sensors of a fleet observe this one environment.
std::vector<EnvSample> generate_environment(const EnvironmentSpec& env,
                                            std::uint64_t seed);

/// Builds per-sensor instrument specs with derived noise/gain substreams.
/// Sensor ids are zero-padded ordinals starting at "01" unless preset.
std::vector<InstrumentSpec> make_fleet(const EnvironmentSpec& env,
                                       std::vector<InstrumentSpec> instruments,
                                       std::uint64_t seed);

/// One shared environment, one IR channel per instrument. Per-sensor noise
/// substreams are independent, so two sensors with the same seed share the
/// reference channel but differ in IR.
Dataset generate_fleet(const EnvironmentSpec& env,
                       std::vector<InstrumentSpec> instruments,
                       std::uint64_t seed);

/// Direct Monte Carlo evaluation of the estimator's population RMSE with
/// the environmental density frozen to `desired`: draws (x_T, y) uniformly
/// from the rectangle, synthesizes IR through the instrument model at time
/// ts, and evaluates sqrt(mean (f(x_T, x_I) - y)^2). This is the ground
/// truth the resampled RMSE is expected to track.
double oracle_instrumental_rmse(const InstrumentSpec& instrument,
                                std::int64_t ts,
                                const UniformRectDensity& desired,
                                std::size_t mc_samples, std::uint64_t seed);

}  // namespace driftlab

#endif  // DRIFTLAB_SYNTH_HPP
