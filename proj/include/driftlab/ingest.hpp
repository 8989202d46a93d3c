#ifndef DRIFTLAB_INGEST_HPP
#define DRIFTLAB_INGEST_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "driftlab/types.hpp"

namespace driftlab {

/// Which observation field a CSV column feeds.
enum class ColumnTag { temperature, ir_signal, sensor_co2, reference_co2 };

const char* column_tag_name(ColumnTag tag);

/// One parsed cell: timestamp plus a finite value for some tag.
struct RawRecord {
  std::int64_t timestamp = 0;
  double value = 0.0;
};

using ColumnStreams = std::map<ColumnTag, std::vector<RawRecord>>;

struct ParseResult {
  ColumnStreams streams;
  std::size_t rows = 0;          // data rows seen
  std::size_t skipped_rows = 0;  // rows dropped for bad timestamp/value
};

/// Reads delimited text (comma or tab, autodetected from the header row)
/// with one header row. `time_column` names the timestamp column; `columns`
/// maps value column names onto tags. Rows with unparseable timestamps or
/// non-finite values are counted and skipped wholesale.
ParseResult parse_csv(std::istream& input, const std::string& time_column,
                      const std::map<std::string, ColumnTag>& columns);

ParseResult parse_csv_file(const std::filesystem::path& path,
                           const std::string& time_column,
                           const std::map<std::string, ColumnTag>& columns);

/// Averages the streams onto a common grid of half-open windows
/// [k*w, (k+1)*w) aligned to the Unix epoch. A window survives only if every
/// supplied tag has at least one raw value in it; surviving windows become
/// observations stamped with the window start. Throws NoOverlap when nothing
/// survives, MissingColumn when the streams cannot form an observation
/// (temperature, reference_co2 and at least one sensor channel are needed).
SensorSeries align_average(const std::string& sensor_id,
                           const ColumnStreams& streams,
                           std::int64_t window_s);

struct OutlierStats {
  std::size_t removed = 0;
  double cutoff = 0.0;
  bool ir_mode = false;
};

/// Drops condensation outliers: keeps observations whose sensor CO2 is at or
/// below the nearest-rank `quantile` cutoff. When the series carries raw IR
/// instead of sensor CO2, the cut flips to the low IR tail at (1-quantile),
/// since condensation inflates CO2 readings by deflating IR. The cutoff
/// value itself is always retained.
SensorSeries remove_outliers(const SensorSeries& series, double quantile,
                             OutlierStats* stats = nullptr);

}  // namespace driftlab

#endif  // DRIFTLAB_INGEST_HPP
