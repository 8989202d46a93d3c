#include "driftlab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "driftlab/rng.hpp"

namespace driftlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double annual_cycle(std::int64_t ts, std::int64_t start, double amplitude,
                    double phase) {
  const double t = static_cast<double>(ts - start);
  return -amplitude * std::cos(kTwoPi * t / kSecondsPerYear + phase);
}

double diurnal_cycle(std::int64_t ts, double amplitude) {
  const double t = static_cast<double>(ts % 86400);
  return -amplitude * std::cos(kTwoPi * t / kSecondsPerDay);
}

}  // namespace

void EnvironmentSpec::validate() const {
  if (duration_s <= 0)
    throw DriftError(ErrorCode::InvalidSpec, "environment duration must be > 0");
  if (cadence_s <= 0)
    throw DriftError(ErrorCode::InvalidSpec, "cadence must be > 0");
  if (temp_noise_sigma_c < 0.0 || co2_noise_sigma_ppm < 0.0)
    throw DriftError(ErrorCode::InvalidSpec, "noise sigmas must be >= 0");
  if (co2_baseline_ppm < 0.0)
    throw DriftError(ErrorCode::InvalidSpec, "co2 baseline must be >= 0");
  if (co2_spike_rate_per_hour < 0.0 || co2_spike_magnitude_ppm < 0.0 ||
      co2_spike_decay_hours <= 0.0)
    throw DriftError(ErrorCode::InvalidSpec, "spike process parameters invalid");
}

void InstrumentSpec::validate(std::int64_t duration_s) const {
  true_params.validate();
  calibrated_params.validate();
  if (ir_noise_sigma < 0.0)
    throw DriftError(ErrorCode::InvalidSpec, "ir noise sigma must be >= 0");
  if (gain.mode == GainDriftSpec::Mode::linear) {
    const double years = static_cast<double>(duration_s) / kSecondsPerYear;
    if (1.0 + gain.slope_per_year * years <= 0.0)
      throw DriftError(ErrorCode::InvalidSpec,
                       "linear gain reaches zero inside the duration");
  }
  if (gain.mode == GainDriftSpec::Mode::random_walk && gain.walk_sigma < 0.0)
    throw DriftError(ErrorCode::InvalidSpec, "walk sigma must be >= 0");
  if (low_temp_knee_c && low_temp_gain_per_c < 0.0)
    throw DriftError(ErrorCode::InvalidSpec,
                     "low-temperature gain slope must be >= 0");
}

double InstrumentSpec::drift_ln_gain(std::int64_t ts) const {
  switch (gain.mode) {
    case GainDriftSpec::Mode::none:
      return 0.0;
    case GainDriftSpec::Mode::linear: {
      const double years =
          static_cast<double>(ts - start_ts) / kSecondsPerYear;
      const double g = 1.0 + gain.slope_per_year * years;
      if (!(g > 0.0))
        throw DriftError(ErrorCode::InvalidSpec, "linear gain reached zero");
      return std::log(g);
    }
    case GainDriftSpec::Mode::random_walk: {
      // Replay of the seeded walk up to the generation step holding ts.
      const std::int64_t step = (ts - start_ts) / cadence_s;
      double ln_g = 0.0;
      for (std::int64_t k = 1; k <= step; ++k)
        ln_g += gain.walk_sigma *
                rng::counter_normal(gain_key, static_cast<std::uint64_t>(k));
      return ln_g;
    }
  }
  return 0.0;
}

double InstrumentSpec::low_temp_ln_gain(double temperature_c) const {
  if (low_temp_knee_c && temperature_c < *low_temp_knee_c)
    return low_temp_gain_per_c * (temperature_c - *low_temp_knee_c);
  return 0.0;
}

double InstrumentSpec::ln_gain(std::int64_t ts, double temperature_c) const {
  return drift_ln_gain(ts) + low_temp_ln_gain(temperature_c);
}

double InstrumentSpec::synth_ir(std::int64_t ts, double temperature_c,
                                double co2_ppm, double noise) const {
  const double base =
      forward_ir(true_params, temperature_c + temp_bias_c, co2_ppm);
  return base * std::exp(ln_gain(ts, temperature_c) + ir_noise_sigma * noise);
}

std::vector<EnvSample> generate_environment(const EnvironmentSpec& env,
                                            std::uint64_t seed) {
  env.validate();

  rng::Stream temp_noise(rng::substream(seed, "env.temp"));
  rng::Stream co2_noise(rng::substream(seed, "env.co2"));
  rng::Stream spikes(rng::substream(seed, "env.spike"));

  const double decay_s = env.co2_spike_decay_hours * 3600.0;
  const double rate_per_s = env.co2_spike_rate_per_hour / 3600.0;
  double next_spike =
      rate_per_s > 0.0
          ? static_cast<double>(env.start_ts) + spikes.exponential(rate_per_s)
          : std::numeric_limits<double>::infinity();
  double spike_level = 0.0;  // decayed sum of past spike pulses

  std::vector<EnvSample> samples;
  const std::int64_t steps = env.duration_s / env.cadence_s;
  samples.reserve(static_cast<std::size_t>(steps));
  std::int64_t prev_ts = env.start_ts;
  for (std::int64_t i = 0; i < steps; ++i) {
    const std::int64_t ts = env.start_ts + i * env.cadence_s;

    spike_level *= std::exp(-static_cast<double>(ts - prev_ts) / decay_s);
    while (next_spike <= static_cast<double>(ts)) {
      spike_level += env.co2_spike_magnitude_ppm *
                     std::exp(-(static_cast<double>(ts) - next_spike) / decay_s);
      next_spike += spikes.exponential(rate_per_s);
    }
    prev_ts = ts;

    EnvSample s;
    s.ts = ts;
    s.temperature = env.temp_mean_c +
                    annual_cycle(ts, env.start_ts, env.temp_annual_amplitude_c,
                                 env.temp_annual_phase_rad) +
                    diurnal_cycle(ts, env.temp_diurnal_amplitude_c) +
                    env.temp_noise_sigma_c * temp_noise.normal();
    s.co2 = env.co2_baseline_ppm +
            annual_cycle(ts, env.start_ts, -env.co2_annual_amplitude_ppm, 0.0) +
            diurnal_cycle(ts, env.co2_diurnal_amplitude_ppm) + spike_level +
            env.co2_noise_sigma_ppm * co2_noise.normal();
    s.co2 = std::max(s.co2, 0.0);
    samples.push_back(s);
  }
  return samples;
}

std::vector<InstrumentSpec> make_fleet(const EnvironmentSpec& env,
                                       std::vector<InstrumentSpec> instruments,
                                       std::uint64_t seed) {
  if (instruments.empty())
    throw DriftError(ErrorCode::InvalidSpec, "fleet needs at least one sensor");
  for (std::size_t i = 0; i < instruments.size(); ++i) {
    InstrumentSpec& inst = instruments[i];
    if (inst.sensor_id.empty()) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%02zu", i + 1);
      inst.sensor_id = buf;
    }
    inst.start_ts = env.start_ts;
    inst.cadence_s = env.cadence_s;
    // Keys hang off the sensor id, not the position, so reordering or
    // adding sensors leaves existing channels untouched.
    inst.noise_key =
        rng::substream(seed, "sensor.ir", rng::fnv1a(inst.sensor_id));
    inst.gain_key =
        rng::substream(seed, "sensor.gain", rng::fnv1a(inst.sensor_id));
    inst.validate(env.duration_s);
  }
  return instruments;
}

Dataset generate_fleet(const EnvironmentSpec& env,
                       std::vector<InstrumentSpec> instruments,
                       std::uint64_t seed) {
  instruments = make_fleet(env, std::move(instruments), seed);
  const std::vector<EnvSample> trajectory = generate_environment(env, seed);
  if (trajectory.empty())
    throw DriftError(ErrorCode::InvalidSpec, "empty environment trajectory");

  Dataset dataset;
  for (const InstrumentSpec& inst : instruments) {
    SensorSeries series;
    series.sensor_id = inst.sensor_id;
    series.cadence_s = env.cadence_s;
    series.observations.reserve(trajectory.size());

    // Sequential walk accumulator; per-step random-access replay of the
    // walk would be O(n^2).
    double walk_ln_g = 0.0;
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
      const EnvSample& s = trajectory[k];
      double ln_g;
      if (inst.gain.mode == GainDriftSpec::Mode::random_walk) {
        if (k > 0)
          walk_ln_g += inst.gain.walk_sigma *
                       rng::counter_normal(inst.gain_key,
                                           static_cast<std::uint64_t>(k));
        ln_g = walk_ln_g;
      } else {
        ln_g = inst.drift_ln_gain(s.ts);
      }
      ln_g += inst.low_temp_ln_gain(s.temperature);

      const double noise =
          rng::counter_normal(inst.noise_key, static_cast<std::uint64_t>(k));
      const double base = forward_ir(inst.true_params,
                                     s.temperature + inst.temp_bias_c, s.co2);

      Observation obs;
      obs.timestamp = s.ts;
      obs.temperature = s.temperature;
      obs.ir_signal = base * std::exp(ln_g + inst.ir_noise_sigma * noise);
      obs.reference_co2 = s.co2;
      series.observations.push_back(obs);
    }
    dataset.series.emplace(series.sensor_id, std::move(series));
  }
  return dataset;
}

double oracle_instrumental_rmse(const InstrumentSpec& instrument,
                                std::int64_t ts,
                                const UniformRectDensity& desired,
                                std::size_t mc_samples, std::uint64_t seed) {
  if (mc_samples < 1)
    throw DriftError(ErrorCode::InvalidSpec, "mc_samples must be >= 1");
  desired.validate();

  // Constant at fixed ts; hoisted so random-walk replay happens once.
  const double drift_ln_g = instrument.drift_ln_gain(ts);

  rng::Stream draws(rng::substream(seed, "oracle"));
  const double t_lo = desired.temp_range[0];
  const double t_span = desired.temp_range[1] - desired.temp_range[0];
  const double c_lo = desired.co2_range[0];
  const double c_span = desired.co2_range[1] - desired.co2_range[0];

  double sum_sq = 0.0;
  for (std::size_t i = 0; i < mc_samples; ++i) {
    const double temperature = t_lo + t_span * draws.uniform();
    const double co2 = c_lo + c_span * draws.uniform();

    const double ln_g = drift_ln_g + instrument.low_temp_ln_gain(temperature);

    const double base =
        forward_ir(instrument.true_params,
                   temperature + instrument.temp_bias_c, co2);
    const double ir =
        base * std::exp(ln_g + instrument.ir_noise_sigma * draws.normal());
    const double estimate =
        estimate_co2(instrument.calibrated_params, temperature, ir);
    const double err = estimate - co2;
    sum_sq += err * err;
  }
  return std::sqrt(sum_sq / static_cast<double>(mc_samples));
}

}  // namespace driftlab
