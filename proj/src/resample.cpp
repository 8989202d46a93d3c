#include "driftlab/resample.hpp"

#include <algorithm>
#include <cmath>

#include "driftlab/rng.hpp"

namespace driftlab {

WeightedSet compute_weights(std::span<const EnvPoint> points,
                            const DensityFn& desired,
                            const DensityFn& original) {
  if (points.empty())
    throw DriftError(ErrorCode::EmptyInput, "no points to weight");

  WeightedSet set;
  set.raw.reserve(points.size());
  for (const EnvPoint& p : points) {
    const double p_desired = desired(p.temperature, p.reference_co2);
    if (p_desired == 0.0) {
      set.raw.push_back(0.0);  // outside desired support, never resampled
      continue;
    }
    const double p_original = original(p.temperature, p.reference_co2);
    if (!(p_original > 0.0))
      throw DriftError(ErrorCode::OriginalZeroAtPoint,
                       "original density is zero at a source point; "
                       "densities and points do not match");
    set.raw.push_back(p_desired / p_original);
  }

  set.raw_sum = 0.0;
  for (double w : set.raw) set.raw_sum += w;
  if (!(set.raw_sum > 0.0))
    throw DriftError(ErrorCode::ZeroWeightSum,
                     "all points fall outside the desired support");

  set.normalized.resize(set.raw.size());
  for (std::size_t i = 0; i < set.raw.size(); ++i)
    set.normalized[i] = set.raw[i] / set.raw_sum;
  return set;
}

std::vector<std::uint32_t> resample_indices(const WeightedSet& weights,
                                            const ResamplePlan& plan) {
  if (plan.count < 1)
    throw DriftError(ErrorCode::InvalidConfig, "resample count must be >= 1");
  if (!(weights.raw_sum > 0.0) || weights.normalized.empty())
    throw DriftError(ErrorCode::ZeroWeightSum, "weights carry no mass");

  std::vector<double> cdf(weights.normalized.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.normalized.size(); ++i) {
    acc += weights.normalized[i];
    cdf[i] = acc;
  }

  // Last index with positive weight, the fallback when rounding leaves a
  // sliver of [0,1) above cdf.back().
  std::size_t last_positive = cdf.size() - 1;
  while (last_positive > 0 && weights.normalized[last_positive] == 0.0)
    --last_positive;

  std::vector<std::uint32_t> indices(static_cast<std::size_t>(plan.count));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double u = rng::counter_uniform(plan.seed, k);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = it == cdf.end()
                          ? last_positive
                          : static_cast<std::size_t>(it - cdf.begin());
    indices[k] = static_cast<std::uint32_t>(idx);
  }
  return indices;
}

ResampledSeries resample(const SensorSeries& source, const WeightedSet& weights,
                         const ResamplePlan& plan) {
  if (weights.size() != source.size())
    throw DriftError(ErrorCode::OriginalZeroAtPoint,
                     "weight set size does not match source series");
  ResampledSeries out;
  out.sensor_id = source.sensor_id;
  out.source_indices = resample_indices(weights, plan);
  out.observations.reserve(out.source_indices.size());
  for (std::uint32_t idx : out.source_indices)
    out.observations.push_back(source.observations[idx]);
  return out;
}

double effective_sample_size(const WeightedSet& weights) {
  if (!(weights.raw_sum > 0.0))
    throw DriftError(ErrorCode::ZeroWeightSum, "weights carry no mass");
  double sum_sq = 0.0;
  for (double w : weights.normalized) sum_sq += w * w;
  return 1.0 / sum_sq;
}

}  // namespace driftlab
