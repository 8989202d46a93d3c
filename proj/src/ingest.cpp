#include "driftlab/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "driftlab/stats.hpp"

namespace driftlab {

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(delim, start);
    if (end == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  for (std::string& f : fields) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
    while (!f.empty() && f.front() == ' ') f.erase(f.begin());
  }
  return fields;
}

bool parse_value(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end && std::isfinite(out);
}

// Floored division, correct for negative timestamps too.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

const char* column_tag_name(ColumnTag tag) {
  switch (tag) {
    case ColumnTag::temperature: return "temperature";
    case ColumnTag::ir_signal: return "ir_signal";
    case ColumnTag::sensor_co2: return "sensor_co2";
    case ColumnTag::reference_co2: return "reference_co2";
  }
  return "unknown";
}

ParseResult parse_csv(std::istream& input, const std::string& time_column,
                      const std::map<std::string, ColumnTag>& columns) {
  std::string header;
  if (!std::getline(input, header))
    throw DriftError(ErrorCode::EmptyFile, "no header row");
  // Strip a UTF-8 BOM if present.
  if (header.size() >= 3 && header.compare(0, 3, "\xEF\xBB\xBF") == 0)
    header.erase(0, 3);

  const char delim =
      std::count(header.begin(), header.end(), '\t') >
              std::count(header.begin(), header.end(), ',')
          ? '\t'
          : ',';
  const std::vector<std::string> names = split(header, delim);
  if (names.empty() || (names.size() == 1 && names[0].empty()))
    throw DriftError(ErrorCode::MalformedHeader, "header row is empty");
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = i + 1; j < names.size(); ++j)
      if (!names[i].empty() && names[i] == names[j])
        throw DriftError(ErrorCode::MalformedHeader,
                         "duplicate column name '" + names[i] + "'");

  auto find_column = [&](const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
      throw DriftError(ErrorCode::MissingColumn,
                       "column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - names.begin());
  };

  const std::size_t time_idx = find_column(time_column);
  std::vector<std::pair<std::size_t, ColumnTag>> mapped;
  for (const auto& [name, tag] : columns)
    mapped.emplace_back(find_column(name), tag);

  ParseResult result;
  for (const auto& [idx, tag] : mapped) result.streams[tag];

  std::string line;
  while (std::getline(input, line)) {
    if (line.empty() || line == "\r") continue;
    ++result.rows;
    const std::vector<std::string> cells = split(line, delim);

    bool row_ok = time_idx < cells.size();
    std::int64_t ts = 0;
    if (row_ok) {
      const auto parsed = parse_timestamp(cells[time_idx]);
      row_ok = parsed.has_value();
      if (row_ok) ts = *parsed;
    }
    std::vector<std::pair<ColumnTag, double>> values;
    if (row_ok) {
      for (const auto& [idx, tag] : mapped) {
        double v = 0.0;
        if (idx >= cells.size() || !parse_value(cells[idx], v)) {
          row_ok = false;
          break;
        }
        values.emplace_back(tag, v);
      }
    }
    if (!row_ok) {
      ++result.skipped_rows;
      continue;
    }
    for (const auto& [tag, v] : values)
      result.streams[tag].push_back(RawRecord{ts, v});
  }
  if (result.rows == 0)
    throw DriftError(ErrorCode::EmptyFile, "no data rows after header");
  return result;
}

ParseResult parse_csv_file(const std::filesystem::path& path,
                           const std::string& time_column,
                           const std::map<std::string, ColumnTag>& columns) {
  std::ifstream input(path);
  if (!input)
    throw DriftError(ErrorCode::IoFailure, "cannot open " + path.string());
  return parse_csv(input, time_column, columns);
}

SensorSeries align_average(const std::string& sensor_id,
                           const ColumnStreams& streams,
                           std::int64_t window_s) {
  if (window_s <= 0)
    throw DriftError(ErrorCode::InvalidConfig, "window must be > 0");
  const bool has_temp = streams.count(ColumnTag::temperature) > 0;
  const bool has_ref = streams.count(ColumnTag::reference_co2) > 0;
  const bool has_ir = streams.count(ColumnTag::ir_signal) > 0;
  const bool has_co2 = streams.count(ColumnTag::sensor_co2) > 0;
  if (!has_temp || !has_ref || (!has_ir && !has_co2))
    throw DriftError(ErrorCode::MissingColumn,
                     "alignment needs temperature, reference_co2 and a "
                     "sensor channel");

  struct Accum {
    double sum = 0.0;
    std::size_t count = 0;
  };
  // window index -> per-tag accumulator
  std::map<std::int64_t, std::map<ColumnTag, Accum>> windows;
  for (const auto& [tag, records] : streams) {
    for (const RawRecord& r : records) {
      Accum& acc = windows[floor_div(r.timestamp, window_s)][tag];
      acc.sum += r.value;
      ++acc.count;
    }
  }

  const std::size_t tags_needed = streams.size();
  SensorSeries series;
  series.sensor_id = sensor_id;
  series.cadence_s = window_s;
  for (const auto& [win, per_tag] : windows) {
    if (per_tag.size() < tags_needed) continue;  // some tag missing entirely
    Observation obs;
    obs.timestamp = win * window_s;
    for (const auto& [tag, acc] : per_tag) {
      const double value = acc.sum / static_cast<double>(acc.count);
      switch (tag) {
        case ColumnTag::temperature: obs.temperature = value; break;
        case ColumnTag::ir_signal: obs.ir_signal = value; break;
        case ColumnTag::sensor_co2: obs.sensor_co2 = value; break;
        case ColumnTag::reference_co2: obs.reference_co2 = value; break;
      }
    }
    series.observations.push_back(obs);
  }
  if (series.empty())
    throw DriftError(ErrorCode::NoOverlap,
                     "no window has values for every channel");
  return series;
}

SensorSeries remove_outliers(const SensorSeries& series, double quantile,
                             OutlierStats* stats) {
  if (series.empty())
    throw DriftError(ErrorCode::EmptySeries, "cannot filter an empty series");
  if (!(quantile > 0.0 && quantile <= 1.0))
    throw DriftError(ErrorCode::InvalidConfig, "quantile must be in (0, 1]");

  const bool co2_mode = series.has_sensor_co2();
  auto channel = [co2_mode](const Observation& obs) {
    return co2_mode ? *obs.sensor_co2 : *obs.ir_signal;
  };

  std::vector<double> values;
  values.reserve(series.size());
  for (const Observation& obs : series.observations)
    values.push_back(channel(obs));
  std::sort(values.begin(), values.end());

  // CO2 mode trims the high tail at q; IR mode trims the low tail at 1-q
  // (condensation inflates CO2, which deflates IR).
  const double cutoff = co2_mode
                            ? nearest_rank_quantile(values, quantile)
                            : (quantile == 1.0
                                   ? values.front()
                                   : nearest_rank_quantile(values, 1.0 - quantile));

  SensorSeries kept;
  kept.sensor_id = series.sensor_id;
  kept.cadence_s = series.cadence_s;
  for (const Observation& obs : series.observations) {
    const double v = channel(obs);
    if (co2_mode ? v <= cutoff : v >= cutoff) kept.observations.push_back(obs);
  }
  if (stats) {
    stats->removed = series.size() - kept.size();
    stats->cutoff = cutoff;
    stats->ir_mode = !co2_mode;
  }
  return kept;
}

}  // namespace driftlab
