#ifndef DRIFTLAB_REPORT_IO_HPP
#define DRIFTLAB_REPORT_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "driftlab/density.hpp"
#include "driftlab/metrics.hpp"
#include "driftlab/sensor_model.hpp"
#include "driftlab/synth.hpp"
#include "driftlab/types.hpp"

namespace driftlab {

using OrderedJson = nlohmann::ordered_json;

/// Shortest round-trip decimal representation; the one double formatter
/// used in every CSV so outputs are byte-stable.
std::string format_double(double value);

// -- JSON documents (schemas versioned in README) --

OrderedJson params_to_json(const BeerLambertParams& params);
BeerLambertParams params_from_json(const OrderedJson& doc);
BeerLambertParams load_params(const std::filesystem::path& path);

OrderedJson density_to_json(const HistogramDensity2D& density);
HistogramDensity2D density_from_json(const OrderedJson& doc);

OrderedJson eval_config_to_json(const EvalConfig& config);

/// Full drift report: resolved config, per-sensor months (including
/// resampling provenance), fleet statistics and the headline summary.
OrderedJson report_to_json(const DriftReport& report, const EvalConfig& config,
                           const OrderedJson& run_info);

// -- Flat CSV views --

std::string report_to_csv(const DriftReport& report);
std::string fleet_to_csv(const DriftReport& report);
std::string difference_box_to_csv(const DriftReport& report);
std::string scatter_to_csv(const std::vector<ScatterPoint>& points);
std::string distribution_to_csv(const std::string& sensor_id,
                                const std::string& channel,
                                const std::vector<DistributionSummary>& rows);

// -- Dataset CSV emission (the same shape ingest reads) --

/// Writes sensor_<id>.csv per series plus reference.csv; returns the file
/// names written. Sensor files carry timestamp,temperature plus whichever
/// sensor channels the series has; reference.csv carries timestamp,co2.
std::vector<std::string> write_dataset_csv(const std::filesystem::path& dir,
                                           const Dataset& dataset);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

}  // namespace driftlab

#endif  // DRIFTLAB_REPORT_IO_HPP
