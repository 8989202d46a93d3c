#include "driftlab/report_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace driftlab {

std::string format_double(double value) {
  if (std::isnan(value)) return "";
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general);
  return std::string(buf, res.ptr);
}

OrderedJson params_to_json(const BeerLambertParams& params) {
  return OrderedJson{
      {"i0", params.i0}, {"alpha", params.alpha}, {"t_ref", params.t_ref}};
}

BeerLambertParams params_from_json(const OrderedJson& doc) {
  BeerLambertParams params;
  params.i0 = doc.at("i0").get<double>();
  params.alpha = doc.at("alpha").get<double>();
  params.t_ref = doc.value("t_ref", params.t_ref);
  params.validate();
  return params;
}

BeerLambertParams load_params(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input)
    throw DriftError(ErrorCode::IoFailure, "cannot open " + path.string());
  OrderedJson doc;
  try {
    input >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DriftError(ErrorCode::IoFailure,
                     path.string() + " is not valid JSON: " + e.what());
  }
  return params_from_json(doc);
}

OrderedJson density_to_json(const HistogramDensity2D& density) {
  return OrderedJson{{"temp_edges", density.temp_edges},
                     {"co2_edges", density.co2_edges},
                     {"bin_prob", density.bin_prob}};
}

HistogramDensity2D density_from_json(const OrderedJson& doc) {
  HistogramDensity2D density;
  density.temp_edges = doc.at("temp_edges").get<std::vector<double>>();
  density.co2_edges = doc.at("co2_edges").get<std::vector<double>>();
  density.bin_prob = doc.at("bin_prob").get<std::vector<double>>();
  if (density.temp_edges.size() < 2 || density.co2_edges.size() < 2 ||
      density.bin_prob.size() != density.n_temp() * density.n_co2())
    throw DriftError(ErrorCode::InvalidConfig, "malformed density document");
  return density;
}

OrderedJson eval_config_to_json(const EvalConfig& config) {
  return OrderedJson{
      {"averaging_window_s", config.averaging_window_s},
      {"outlier_quantile", config.outlier_quantile},
      {"desired_temp_range", config.desired_temp_range},
      {"desired_co2_range", config.desired_co2_range},
      {"resample_count", config.resample_count},
      {"rng_seed", config.rng_seed},
      {"temp_bin_width", config.temp_bin_width},
      {"co2_bin_width", config.co2_bin_width},
  };
}

namespace {

OrderedJson month_eval_to_json(const MonthEval& me) {
  OrderedJson doc{
      {"month", me.month.label()},
      {"n_original", me.n_original},
      {"n_resampled", me.n_resampled},
      {"rmse_original", me.rmse_original},
      {"ess", me.ess},
      {"coverage", me.coverage},
      {"low_confidence", me.low_confidence},
      {"gap", me.gap},
  };
  if (me.gap) {
    doc["rmse_resampled"] = nullptr;
    doc["rmse_difference"] = nullptr;
  } else {
    doc["rmse_resampled"] = me.rmse_resampled;
    doc["rmse_difference"] = me.rmse_difference;
    doc["provenance"] = me.provenance;
  }
  return doc;
}

OrderedJson box_to_json(const BoxStats& box) {
  return OrderedJson{{"q1", box.q1},
                     {"median", box.median},
                     {"q3", box.q3},
                     {"whisker_lo", box.whisker_lo},
                     {"whisker_hi", box.whisker_hi},
                     {"outliers", box.outliers}};
}

}  // namespace

OrderedJson report_to_json(const DriftReport& report, const EvalConfig& config,
                           const OrderedJson& run_info) {
  OrderedJson sensors = OrderedJson::array();
  for (const SensorReport& sr : report.sensors) {
    OrderedJson months = OrderedJson::array();
    for (const MonthEval& me : sr.months) months.push_back(month_eval_to_json(me));
    sensors.push_back(
        OrderedJson{{"sensor_id", sr.sensor_id}, {"months", months}});
  }

  OrderedJson fleet = OrderedJson::array();
  for (const FleetMonthStats& fm : report.fleet) {
    fleet.push_back(OrderedJson{
        {"month", fm.month.label()},
        {"n_sensors", fm.n_sensors},
        {"mean_rmse_resampled", fm.mean_rmse_resampled},
        {"std_rmse_resampled", fm.std_rmse_resampled},
        {"rmse_difference_box", box_to_json(fm.difference_box)},
    });
  }

  return OrderedJson{
      {"schema", "driftlab-report/1"},
      {"run", run_info},
      {"config", eval_config_to_json(config)},
      {"sensors", sensors},
      {"fleet", fleet},
      {"summary",
       OrderedJson{{"mean_max_abs_rmse_difference",
                    report.mean_max_abs_difference}}},
  };
}

std::string report_to_csv(const DriftReport& report) {
  std::ostringstream out;
  out << "sensor_id,month,n_original,n_resampled,rmse_original,"
         "rmse_resampled,rmse_difference,ess,coverage,low_confidence,gap\n";
  for (const SensorReport& sr : report.sensors) {
    for (const MonthEval& me : sr.months) {
      out << sr.sensor_id << ',' << me.month.label() << ',' << me.n_original
          << ',' << me.n_resampled << ',' << format_double(me.rmse_original)
          << ',' << format_double(me.rmse_resampled) << ','
          << format_double(me.rmse_difference) << ',' << format_double(me.ess)
          << ',' << format_double(me.coverage) << ',' << (me.low_confidence ? 1 : 0)
          << ',' << (me.gap ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

std::string fleet_to_csv(const DriftReport& report) {
  std::ostringstream out;
  out << "month,n_sensors,mean_rmse_resampled,std_rmse_resampled\n";
  for (const FleetMonthStats& fm : report.fleet)
    out << fm.month.label() << ',' << fm.n_sensors << ','
        << format_double(fm.mean_rmse_resampled) << ','
        << format_double(fm.std_rmse_resampled) << '\n';
  return out.str();
}

std::string difference_box_to_csv(const DriftReport& report) {
  std::ostringstream out;
  out << "month,n_sensors,q1,median,q3,whisker_lo,whisker_hi,n_outliers\n";
  for (const FleetMonthStats& fm : report.fleet) {
    const BoxStats& box = fm.difference_box;
    out << fm.month.label() << ',' << fm.n_sensors << ','
        << format_double(box.q1) << ',' << format_double(box.median) << ','
        << format_double(box.q3) << ',' << format_double(box.whisker_lo) << ','
        << format_double(box.whisker_hi) << ',' << box.outliers.size() << '\n';
  }
  return out.str();
}

std::string scatter_to_csv(const std::vector<ScatterPoint>& points) {
  std::ostringstream out;
  out << "timestamp,temperature,error\n";
  for (const ScatterPoint& p : points)
    out << format_rfc3339(p.timestamp) << ',' << format_double(p.temperature)
        << ',' << format_double(p.error) << '\n';
  return out.str();
}

std::string distribution_to_csv(const std::string& sensor_id,
                                const std::string& channel,
                                const std::vector<DistributionSummary>& rows) {
  std::ostringstream out;
  out << "sensor_id,channel,month,count,min,p1,p5,p25,p50,p75,p95,p99,max\n";
  for (const DistributionSummary& r : rows)
    out << sensor_id << ',' << channel << ',' << r.month.label() << ','
        << r.count << ',' << format_double(r.min) << ',' << format_double(r.p1)
        << ',' << format_double(r.p5) << ',' << format_double(r.p25) << ','
        << format_double(r.p50) << ',' << format_double(r.p75) << ','
        << format_double(r.p95) << ',' << format_double(r.p99) << ','
        << format_double(r.max) << '\n';
  return out.str();
}

std::vector<std::string> write_dataset_csv(const std::filesystem::path& dir,
                                           const Dataset& dataset) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;

  // Reference channel is shared; take the union across sensors (identical
  // values on overlapping timestamps by construction).
  std::map<std::int64_t, double> reference;
  for (const auto& [id, series] : dataset.series) {
    std::ostringstream out;
    out << "timestamp,temperature";
    const bool ir = series.has_ir();
    const bool co2 = series.has_sensor_co2();
    if (ir) out << ",ir_signal";
    if (co2) out << ",sensor_co2";
    out << '\n';
    for (const Observation& obs : series.observations) {
      out << format_rfc3339(obs.timestamp) << ','
          << format_double(obs.temperature);
      if (ir) out << ',' << format_double(*obs.ir_signal);
      if (co2) out << ',' << format_double(*obs.sensor_co2);
      out << '\n';
      reference.emplace(obs.timestamp, obs.reference_co2);
    }
    const std::string name = "sensor_" + id + ".csv";
    write_text_file(dir / name, out.str());
    written.push_back(name);
  }

  std::ostringstream ref;
  ref << "timestamp,co2\n";
  for (const auto& [ts, value] : reference)
    ref << format_rfc3339(ts) << ',' << format_double(value) << '\n';
  write_text_file(dir / "reference.csv", ref.str());
  written.push_back("reference.csv");
  return written;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw DriftError(ErrorCode::IoFailure, "cannot write " + path.string());
  out << content;
  if (!out)
    throw DriftError(ErrorCode::IoFailure, "failed writing " + path.string());
}

}  // namespace driftlab
