#ifndef DRIFTLAB_RESAMPLE_HPP
#define DRIFTLAB_RESAMPLE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "driftlab/density.hpp"
#include "driftlab/types.hpp"

namespace driftlab {

/// Pointwise-evaluable density over (temperature, co2). Both density kinds
/// convert implicitly.
using DensityFn = std::function<double(double, double)>;

/// Importance weights over a source point set: raw ratios
/// w_i = P_desired(x_i) / P_original(x_i) and their normalization
/// w~_i = w_i / sum_j w_j.
struct WeightedSet {
  std::vector<double> raw;
  std::vector<double> normalized;
  double raw_sum = 0.0;

  std::size_t size() const noexcept { return raw.size(); }
};

/// How many points to draw and from which stream. Draws are always with
/// replacement: the configured draw count routinely exceeds the number of
/// distinct qualifying points.
struct ResamplePlan {
  int count = 500;
  std::uint64_t seed = 0;
};

/// Resampled observations in draw order, with the source index of each draw
/// kept as provenance. Not a SensorSeries: drawing with replacement
/// duplicates timestamps.
struct ResampledSeries {
  std::string sensor_id;
  std::vector<Observation> observations;
  std::vector<std::uint32_t> source_indices;

  std::size_t size() const noexcept { return observations.size(); }
};

/// Weight computation of the importance-sampling step. The original density
/// must have been estimated from these same points, so P_original(x_i) > 0
/// for every point; a zero there throws OriginalZeroAtPoint. Throws
/// ZeroWeightSum when no point lies in the desired support (the period
/// cannot be evaluated).
WeightedSet compute_weights(std::span<const EnvPoint> points,
                            const DensityFn& desired,
                            const DensityFn& original);

/// Indices of plan.count categorical draws according to the normalized
/// weights, via inverse CDF on counter-based uniforms. Identical output for
/// identical (weights, plan) on every platform.
std::vector<std::uint32_t> resample_indices(const WeightedSet& weights,
                                            const ResamplePlan& plan);

/// Draws observations from the source series according to the weights.
ResampledSeries resample(const SensorSeries& source, const WeightedSet& weights,
                         const ResamplePlan& plan);

/// Kish effective sample size 1 / sum(w~_i^2), in (0, n]. Low values mean
/// few points dominate the resampling and the evaluation is unreliable.
double effective_sample_size(const WeightedSet& weights);

}  // namespace driftlab

#endif  // DRIFTLAB_RESAMPLE_HPP
