// driftlab: decomposes gas-sensor error drift into environmental variation
// and instrumental drift by re-evaluating RMSE on importance-resampled data
// drawn to a fixed reference environmental distribution.
//
// Subcommands:
//   simulate      generate a synthetic fleet + ground-truth oracle
//   ingest-check  parse/align/filter inputs and print diagnostics
//   evaluate      run the monthly drift evaluation and write reports
//   report        summarize an existing report.json
//
// Exit codes: 0 success (possibly with warnings), 1 usage/config error,
// 2 data error.

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "driftlab/ingest.hpp"
#include "driftlab/metrics.hpp"
#include "driftlab/report_io.hpp"
#include "driftlab/rng.hpp"
#include "driftlab/synth.hpp"

namespace fs = std::filesystem;
using namespace driftlab;

namespace {

constexpr const char* kVersion = "0.1.0";

int exit_code_for(const DriftError& e) {
  switch (e.code()) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidSpec:
    case ErrorCode::IoFailure:
      return 1;
    default:
      return 2;
  }
}

MonthKey add_months(MonthKey key, int n) {
  const std::int64_t idx = key.index() + n;
  MonthKey out;
  out.year = static_cast<int>(idx / 12);
  out.month = static_cast<int>(idx % 12) + 1;
  return out;
}

std::int64_t month_start_ts(const MonthKey& key) {
  return timestamp_from_civil(key.year, key.month, 1);
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
  std::string out_dir = "simdata";
  std::uint64_t seed = 42;
  int sensors = 12;
  int months = 24;
  std::string start = "2017-01-01T00:00:00Z";
  std::int64_t cadence_s = 600;

  EnvironmentSpec env;  // duration/start filled from months/start

  double ir_noise = 0.002;
  std::string drift_mode = "linear";
  double drift_slope = -0.003;
  double drift_slope_spread = 0.004;
  double walk_sigma = 0.0002;
  double temp_bias = 0.0;
  double cold_knee = std::numeric_limits<double>::quiet_NaN();
  double cold_slope = 0.0004;
  double calib_alpha_scale = 1.0;
  double calib_i0_scale = 1.0;
  std::size_t oracle_mc = 200000;
};

void add_simulate(CLI::App& app, SimulateOpts& opt) {
  CLI::App* cmd = app.add_subcommand(
      "simulate", "Generate a synthetic multi-sensor dataset plus the "
                  "instrumental-drift ground truth oracle");
  cmd->configurable(true);
  cmd->add_option("--out", opt.out_dir, "Output directory")
      ->envname("DRIFTLAB_OUT");
  cmd->add_option("--seed", opt.seed, "Master RNG seed")
      ->envname("DRIFTLAB_SEED");
  cmd->add_option("--sensors", opt.sensors, "Fleet size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--months", opt.months, "Duration in calendar months")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--start", opt.start, "Start instant (RFC 3339, UTC)");
  cmd->add_option("--cadence-s", opt.cadence_s, "Sample cadence in seconds");

  cmd->add_option("--temp-mean", opt.env.temp_mean_c, "Annual mean temp, degC");
  cmd->add_option("--temp-annual-amp", opt.env.temp_annual_amplitude_c,
                  "Annual temp amplitude, degC");
  cmd->add_option("--temp-phase", opt.env.temp_annual_phase_rad,
                  "Annual temp phase, rad (0 = coldest at start)");
  cmd->add_option("--temp-diurnal-amp", opt.env.temp_diurnal_amplitude_c,
                  "Diurnal temp amplitude, degC");
  cmd->add_option("--temp-noise", opt.env.temp_noise_sigma_c,
                  "Temp noise sigma, degC");
  cmd->add_option("--co2-baseline", opt.env.co2_baseline_ppm,
                  "CO2 baseline, ppm");
  cmd->add_option("--co2-annual-amp", opt.env.co2_annual_amplitude_ppm,
                  "Annual CO2 amplitude, ppm");
  cmd->add_option("--co2-diurnal-amp", opt.env.co2_diurnal_amplitude_ppm,
                  "Diurnal CO2 amplitude, ppm");
  cmd->add_option("--spike-rate", opt.env.co2_spike_rate_per_hour,
                  "CO2 spike arrivals per hour");
  cmd->add_option("--spike-magnitude", opt.env.co2_spike_magnitude_ppm,
                  "CO2 spike magnitude, ppm");
  cmd->add_option("--spike-decay-h", opt.env.co2_spike_decay_hours,
                  "CO2 spike decay constant, hours");
  cmd->add_option("--co2-noise", opt.env.co2_noise_sigma_ppm,
                  "CO2 noise sigma, ppm");

  cmd->add_option("--ir-noise", opt.ir_noise,
                  "Multiplicative IR noise sigma (on ln IR)");
  cmd->add_option("--drift-mode", opt.drift_mode,
                  "Gain drift model: none|linear|walk")
      ->check(CLI::IsMember({"none", "linear", "walk"}));
  cmd->add_option("--drift-slope", opt.drift_slope,
                  "Mean linear gain slope per year (e.g. -0.003)");
  cmd->add_option("--drift-slope-spread", opt.drift_slope_spread,
                  "Across-fleet range of linear slopes");
  cmd->add_option("--walk-sigma", opt.walk_sigma,
                  "Random-walk sigma on ln gain, per step");
  cmd->add_option("--temp-bias", opt.temp_bias,
                  "Gas-vs-reported temperature bias, degC");
  cmd->add_option("--cold-knee", opt.cold_knee,
                  "Low-temperature response knee, degC (off by default)");
  cmd->add_option("--cold-slope", opt.cold_slope,
                  "ln-gain loss per degC below the knee");
  cmd->add_option("--calib-alpha-scale", opt.calib_alpha_scale,
                  "Calibrated alpha = true alpha * scale");
  cmd->add_option("--calib-i0-scale", opt.calib_i0_scale,
                  "Calibrated i0 = true i0 * scale");
  cmd->add_option("--oracle-mc", opt.oracle_mc,
                  "Monte Carlo samples per oracle evaluation");
}

int run_simulate(const SimulateOpts& opt) {
  const auto start = parse_timestamp(opt.start);
  if (!start)
    throw DriftError(ErrorCode::InvalidConfig,
                     "--start is not a valid timestamp: " + opt.start);

  EnvironmentSpec env = opt.env;
  env.start_ts = *start;
  env.cadence_s = opt.cadence_s;
  const MonthKey first = month_of(*start);
  env.duration_s = month_start_ts(add_months(first, opt.months)) - *start;

  BeerLambertParams true_params;
  BeerLambertParams calibrated = true_params;
  calibrated.alpha *= opt.calib_alpha_scale;
  calibrated.i0 *= opt.calib_i0_scale;

  std::vector<InstrumentSpec> instruments(static_cast<std::size_t>(opt.sensors));
  for (int i = 0; i < opt.sensors; ++i) {
    InstrumentSpec& inst = instruments[static_cast<std::size_t>(i)];
    inst.true_params = true_params;
    inst.calibrated_params = calibrated;
    inst.ir_noise_sigma = opt.ir_noise;
    inst.temp_bias_c = opt.temp_bias;
    if (!std::isnan(opt.cold_knee)) {
      inst.low_temp_knee_c = opt.cold_knee;
      inst.low_temp_gain_per_c = opt.cold_slope;
    }
    if (opt.drift_mode == "linear") {
      inst.gain.mode = GainDriftSpec::Mode::linear;
      const double frac =
          opt.sensors > 1
              ? static_cast<double>(i) / static_cast<double>(opt.sensors - 1)
              : 0.5;
      inst.gain.slope_per_year =
          opt.drift_slope + opt.drift_slope_spread * (frac - 0.5);
    } else if (opt.drift_mode == "walk") {
      inst.gain.mode = GainDriftSpec::Mode::random_walk;
      inst.gain.walk_sigma = opt.walk_sigma;
    }
  }

  instruments = make_fleet(env, std::move(instruments), opt.seed);
  const Dataset dataset = generate_fleet(env, instruments, opt.seed);

  const fs::path out_dir{opt.out_dir};
  write_dataset_csv(out_dir, dataset);
  write_text_file(out_dir / "params.json", params_to_json(calibrated).dump(2) + "\n");

  // Ground-truth instrumental RMSE at each month's midpoint, under the
  // default desired density.
  const UniformRectDensity desired{};
  OrderedJson sensors = OrderedJson::array();
  for (const InstrumentSpec& inst : instruments) {
    OrderedJson months = OrderedJson::array();
    for (int m = 0; m < opt.months; ++m) {
      const MonthKey key = add_months(first, m);
      const std::int64_t mid =
          (month_start_ts(key) + month_start_ts(add_months(key, 1))) / 2;
      const double truth = oracle_instrumental_rmse(
          inst, mid, desired, opt.oracle_mc,
          rng::substream(opt.seed, "oracle.month",
                         static_cast<std::uint64_t>(key.index())));
      months.push_back(OrderedJson{{"month", key.label()},
                                   {"t_mid", format_rfc3339(mid)},
                                   {"rmse", truth}});
    }
    sensors.push_back(
        OrderedJson{{"sensor_id", inst.sensor_id}, {"months", months}});
  }
  OrderedJson oracle{
      {"schema", "driftlab-oracle/1"},
      {"seed", opt.seed},
      {"mc_samples", opt.oracle_mc},
      {"desired",
       OrderedJson{{"temp_range", desired.temp_range},
                   {"co2_range", desired.co2_range}}},
      {"sensors", sensors},
  };
  write_text_file(out_dir / "oracle.json", oracle.dump(2) + "\n");

  std::cout << "wrote " << dataset.sensor_count()
            << " sensor files + reference.csv + params.json + oracle.json to "
            << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// shared input handling (ingest-check, evaluate)

struct InputOpts {
  std::vector<std::string> sensor_csvs;
  std::string reference_csv;
  std::string data_dir;
  std::string time_col = "timestamp";
  std::string temp_col = "temperature";
  std::string ir_col = "ir_signal";
  std::string sensor_co2_col;  // empty = column absent
  std::string ref_time_col;    // empty = same as time_col
  std::string ref_col = "co2";
  std::int64_t window_s = 600;
  double outlier_quantile = 0.999;
};

void add_input_options(CLI::App* cmd, InputOpts& opt) {
  cmd->add_option("--sensor-csv", opt.sensor_csvs,
                  "Per-sensor CSV path (repeatable); sensor id is the file "
                  "stem minus a 'sensor_' prefix");
  cmd->add_option("--reference-csv", opt.reference_csv,
                  "Reference-instrument CSV path");
  cmd->add_option("--data-dir", opt.data_dir,
                  "Directory holding sensor_*.csv and reference.csv (the "
                  "simulate layout)");
  cmd->add_option("--time-col", opt.time_col, "Timestamp column name");
  cmd->add_option("--temp-col", opt.temp_col, "Temperature column name");
  cmd->add_option("--ir-col", opt.ir_col,
                  "IR signal column name (ignored if absent from header and "
                  "--sensor-co2-col is set)");
  cmd->add_option("--sensor-co2-col", opt.sensor_co2_col,
                  "Sensor-reported CO2 column name (for datasets without raw "
                  "IR)");
  cmd->add_option("--ref-time-col", opt.ref_time_col,
                  "Timestamp column in the reference CSV (defaults to "
                  "--time-col)");
  cmd->add_option("--ref-col", opt.ref_col, "Reference CO2 column name");
  cmd->add_option("--window-s", opt.window_s, "Averaging window, seconds");
  cmd->add_option("--outlier-quantile", opt.outlier_quantile,
                  "Outlier retention quantile");
}

struct SensorInput {
  std::string id;
  fs::path path;
};

std::string sensor_id_from_path(const fs::path& path) {
  std::string stem = path.stem().string();
  if (stem.rfind("sensor_", 0) == 0) stem = stem.substr(7);
  return stem;
}

std::vector<SensorInput> resolve_inputs(InputOpts& opt) {
  std::vector<SensorInput> sensors;
  if (!opt.data_dir.empty()) {
    const fs::path dir{opt.data_dir};
    if (!fs::is_directory(dir))
      throw DriftError(ErrorCode::IoFailure,
                       "--data-dir is not a directory: " + opt.data_dir);
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("sensor_", 0) == 0 && entry.path().extension() == ".csv")
        sensors.push_back({sensor_id_from_path(entry.path()), entry.path()});
    }
    std::sort(sensors.begin(), sensors.end(),
              [](const SensorInput& a, const SensorInput& b) {
                return a.id < b.id;
              });
    if (opt.reference_csv.empty())
      opt.reference_csv = (dir / "reference.csv").string();
  }
  for (const std::string& p : opt.sensor_csvs)
    sensors.push_back({sensor_id_from_path(p), fs::path{p}});
  if (sensors.empty())
    throw DriftError(ErrorCode::InvalidConfig,
                     "no sensor inputs; use --data-dir or --sensor-csv");
  if (opt.reference_csv.empty())
    throw DriftError(ErrorCode::InvalidConfig, "--reference-csv is required");
  for (const SensorInput& s : sensors)
    if (!fs::exists(s.path))
      throw DriftError(ErrorCode::IoFailure,
                       "input does not exist: " + s.path.string());
  if (!fs::exists(opt.reference_csv))
    throw DriftError(ErrorCode::IoFailure,
                     "input does not exist: " + opt.reference_csv);
  return sensors;
}

struct IngestOutcome {
  Dataset dataset;
  struct PerSensor {
    std::string id;
    std::size_t rows = 0;
    std::size_t skipped = 0;
    std::size_t aligned = 0;
    std::size_t outliers_removed = 0;
    double outlier_cutoff = 0.0;
    bool ir_mode = false;
    bool dropped = false;
    std::string drop_reason;
  };
  std::vector<PerSensor> diagnostics;
};

IngestOutcome ingest_all(const std::vector<SensorInput>& sensors,
                         const InputOpts& opt) {
  const std::string ref_time =
      opt.ref_time_col.empty() ? opt.time_col : opt.ref_time_col;
  ParseResult reference = parse_csv_file(
      opt.reference_csv, ref_time, {{opt.ref_col, ColumnTag::reference_co2}});

  IngestOutcome outcome;
  for (const SensorInput& input : sensors) {
    IngestOutcome::PerSensor diag;
    diag.id = input.id;
    try {
      std::map<std::string, ColumnTag> columns{
          {opt.temp_col, ColumnTag::temperature}};
      if (!opt.sensor_co2_col.empty())
        columns.emplace(opt.sensor_co2_col, ColumnTag::sensor_co2);
      else
        columns.emplace(opt.ir_col, ColumnTag::ir_signal);

      ParseResult parsed = parse_csv_file(input.path, opt.time_col, columns);
      diag.rows = parsed.rows;
      diag.skipped = parsed.skipped_rows;

      ColumnStreams streams = std::move(parsed.streams);
      streams[ColumnTag::reference_co2] =
          reference.streams[ColumnTag::reference_co2];

      SensorSeries aligned = align_average(input.id, streams, opt.window_s);
      diag.aligned = aligned.size();

      OutlierStats ostats;
      SensorSeries filtered =
          remove_outliers(aligned, opt.outlier_quantile, &ostats);
      diag.outliers_removed = ostats.removed;
      diag.outlier_cutoff = ostats.cutoff;
      diag.ir_mode = ostats.ir_mode;

      if (filtered.empty()) {
        diag.dropped = true;
        diag.drop_reason = "empty after filtering";
      } else {
        filtered.validate();
        outcome.dataset.series.emplace(input.id, std::move(filtered));
      }
    } catch (const DriftError& e) {
      // A sensor with unusable data is dropped, mirroring the six sensors
      // the case study removed; config-level errors still abort.
      if (exit_code_for(e) == 1) throw;
      diag.dropped = true;
      diag.drop_reason = e.what();
    }
    outcome.diagnostics.push_back(std::move(diag));
  }
  if (outcome.dataset.series.empty())
    throw DriftError(ErrorCode::EmptyAfterFiltering,
                     "no sensor retained any usable data");
  return outcome;
}

void print_diagnostics(const IngestOutcome& outcome) {
  for (const auto& d : outcome.diagnostics) {
    std::cout << "sensor " << d.id << ": rows=" << d.rows
              << " skipped=" << d.skipped << " aligned=" << d.aligned
              << " outliers_removed=" << d.outliers_removed << " mode="
              << (d.ir_mode ? "ir" : "co2");
    if (d.dropped)
      std::cout << " DROPPED (" << d.drop_reason << ")";
    std::cout << "\n";
  }
}

// ---------------------------------------------------------------------------
// ingest-check

int run_ingest_check(InputOpts& opt) {
  const std::vector<SensorInput> sensors = resolve_inputs(opt);
  const IngestOutcome outcome = ingest_all(sensors, opt);
  print_diagnostics(outcome);
  std::cout << "retained " << outcome.dataset.sensor_count() << "/"
            << sensors.size() << " sensors\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOpts {
  InputOpts input;
  std::string out_dir = "report";
  std::uint64_t seed = 42;
  std::vector<std::string> formats{"json", "csv"};
  unsigned jobs = 0;  // 0 = hardware
  std::string estimator = "beer-lambert";
  std::string params_path;
  int fit_window = 0;  // >0: calibrate per sensor from the first N points
  std::vector<double> temp_range{0.0, 20.0};
  std::vector<double> co2_range{400.0, 500.0};
  int resamples = 500;
  double temp_bin = 2.0;
  double co2_bin = 10.0;
};

void add_evaluate(CLI::App& app, EvaluateOpts& opt, const char* name,
                  const char* help) {
  CLI::App* cmd = app.add_subcommand(name, help);
  cmd->configurable(true);
  add_input_options(cmd, opt.input);
  cmd->add_option("--out", opt.out_dir, "Output directory")
      ->envname("DRIFTLAB_OUT");
  cmd->add_option("--seed", opt.seed, "Master RNG seed")
      ->envname("DRIFTLAB_SEED");
  cmd->add_option("--format", opt.formats, "Output formats (json, csv)")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--jobs", opt.jobs,
                  "Worker threads for per-sensor evaluation (0 = all cores); "
                  "results are identical for any value")
      ->envname("DRIFTLAB_JOBS");
  cmd->add_option("--estimator", opt.estimator,
                  "Measurement model: beer-lambert (from --params or --fit-"
                  "window) or passthrough (uses --sensor-co2-col)")
      ->check(CLI::IsMember({"beer-lambert", "passthrough"}));
  cmd->add_option("--params", opt.params_path,
                  "Beer-Lambert params JSON {i0, alpha, t_ref}");
  cmd->add_option("--fit-window", opt.fit_window,
                  "Fit params per sensor from its first N aligned points");
  cmd->add_option("--temp-range", opt.temp_range,
                  "Desired temperature range, degC")
      ->expected(2);
  cmd->add_option("--co2-range", opt.co2_range, "Desired CO2 range, ppm")
      ->expected(2);
  cmd->add_option("--resamples", opt.resamples, "Draws per month (N)");
  cmd->add_option("--temp-bin", opt.temp_bin, "Histogram bin width, degC");
  cmd->add_option("--co2-bin", opt.co2_bin, "Histogram bin width, ppm");
}

EvalConfig eval_config_from(const EvaluateOpts& opt) {
  EvalConfig config;
  config.averaging_window_s = opt.input.window_s;
  config.outlier_quantile = opt.input.outlier_quantile;
  config.desired_temp_range = {opt.temp_range[0], opt.temp_range[1]};
  config.desired_co2_range = {opt.co2_range[0], opt.co2_range[1]};
  config.resample_count = opt.resamples;
  config.rng_seed = opt.seed;
  config.temp_bin_width = opt.temp_bin;
  config.co2_bin_width = opt.co2_bin;
  config.validate();
  return config;
}

int run_evaluate(EvaluateOpts& opt) {
  const EvalConfig config = eval_config_from(opt);
  const std::vector<SensorInput> sensors = resolve_inputs(opt.input);

  const bool passthrough = opt.estimator == "passthrough";
  if (passthrough && opt.input.sensor_co2_col.empty())
    throw DriftError(ErrorCode::InvalidConfig,
                     "passthrough estimator needs --sensor-co2-col");
  if (!passthrough && opt.params_path.empty() && opt.fit_window == 0)
    throw DriftError(ErrorCode::InvalidConfig,
                     "beer-lambert estimator needs --params or --fit-window");

  BeerLambertParams shared_params;
  if (!opt.params_path.empty()) shared_params = load_params(opt.params_path);

  const IngestOutcome outcome = ingest_all(sensors, opt.input);
  print_diagnostics(outcome);

  // Stable sensor order for both output and work distribution.
  std::vector<const SensorSeries*> series_list;
  for (const auto& [id, series] : outcome.dataset.series)
    series_list.push_back(&series);

  std::vector<SensorReport> reports(series_list.size());
  std::vector<Estimator> estimators(series_list.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= series_list.size()) return;
      try {
        const SensorSeries& series = *series_list[i];
        Estimator estimator = Estimator::passthrough();
        if (!passthrough) {
          BeerLambertParams params = shared_params;
          if (opt.fit_window > 0) {
            std::vector<CalPoint> window;
            const std::size_t n = std::min<std::size_t>(
                series.size(), static_cast<std::size_t>(opt.fit_window));
            for (std::size_t k = 0; k < n; ++k) {
              const Observation& obs = series.observations[k];
              if (!obs.ir_signal)
                throw DriftError(ErrorCode::MissingSignal,
                                 "--fit-window needs raw IR data");
              window.push_back(CalPoint{obs.temperature, *obs.ir_signal,
                                        obs.reference_co2});
            }
            params = fit_params(window);
          }
          estimator = Estimator::beer_lambert(params);
        }
        if (!estimator.applicable_to(series))
          throw DriftError(ErrorCode::MissingSignal,
                           "estimator not applicable to sensor " +
                               series.sensor_id);
        estimators[i] = estimator;
        reports[i] = SensorReport{
            series.sensor_id, monthly_drift_eval(series, config, estimator)};
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  unsigned jobs = opt.jobs != 0 ? opt.jobs : std::thread::hardware_concurrency();
  jobs = std::max(1u, std::min<unsigned>(
                          jobs, static_cast<unsigned>(series_list.size())));
  {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  const DriftReport report = fleet_aggregate(std::move(reports));

  std::size_t gaps = 0, low_conf = 0;
  for (const SensorReport& sr : report.sensors)
    for (const MonthEval& me : sr.months) {
      gaps += me.gap ? 1 : 0;
      low_conf += me.low_confidence ? 1 : 0;
    }
  if (gaps > 0)
    std::cerr << "warning: " << gaps
              << " sensor-month(s) had no data in the desired support and "
                 "are reported as gaps\n";
  if (low_conf > 0)
    std::cerr << "warning: " << low_conf
              << " sensor-month(s) flagged low-confidence (ESS < "
              << kLowConfidenceEss << ")\n";

  // Run metadata echoed into the report so every figure is regenerable.
  // Deliberately excludes --jobs: thread count must not change output bytes.
  OrderedJson inputs = OrderedJson::array();
  for (const SensorInput& s : sensors) inputs.push_back(s.path.string());
  OrderedJson run_info{
      {"tool", std::string("driftlab ") + kVersion},
      {"command", "evaluate"},
      {"inputs", inputs},
      {"reference", opt.input.reference_csv},
      {"estimator", opt.estimator},
      {"params_file", opt.params_path},
      {"fit_window", opt.fit_window},
  };

  const fs::path out_dir{opt.out_dir};
  fs::create_directories(out_dir);
  const bool want_json =
      std::find(opt.formats.begin(), opt.formats.end(), "json") !=
      opt.formats.end();
  const bool want_csv =
      std::find(opt.formats.begin(), opt.formats.end(), "csv") !=
      opt.formats.end();
  if (!want_json && !want_csv)
    throw DriftError(ErrorCode::InvalidConfig, "no output format selected");

  if (want_json)
    write_text_file(out_dir / "report.json",
                    report_to_json(report, config, run_info).dump(2) + "\n");
  if (want_csv) {
    write_text_file(out_dir / "report.csv", report_to_csv(report));
    write_text_file(out_dir / "fleet_monthly.csv", fleet_to_csv(report));
    write_text_file(out_dir / "rmse_difference_box.csv",
                    difference_box_to_csv(report));

    // Plot-ready per-sensor data: error-vs-temperature scatter and monthly
    // channel distributions.
    const fs::path scatter_dir = out_dir / "scatter";
    fs::create_directories(scatter_dir);
    std::string distributions;
    for (std::size_t i = 0; i < series_list.size(); ++i) {
      const SensorSeries& series = *series_list[i];
      write_text_file(scatter_dir / ("sensor_" + series.sensor_id + ".csv"),
                      scatter_to_csv(
                          error_temperature_scatter(series, estimators[i])));
      for (const auto& [channel, name] :
           {std::pair{Channel::temperature, "temperature"},
            std::pair{Channel::reference_co2, "reference_co2"}}) {
        const std::string csv = distribution_to_csv(
            series.sensor_id, name,
            monthly_distribution_summary(series, channel));
        if (distributions.empty())
          distributions = csv;
        else
          distributions += csv.substr(csv.find('\n') + 1);  // drop header
      }
    }
    write_text_file(out_dir / "distributions.csv", distributions);
  }

  std::cout << "evaluated " << report.sensors.size() << " sensor(s); "
            << "mean max |rmse difference| = "
            << format_double(report.mean_max_abs_difference) << " ppm\n"
            << "report written to " << out_dir.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// report

int run_report(const std::string& path) {
  std::ifstream input{fs::path{path}};
  if (!input)
    throw DriftError(ErrorCode::IoFailure, "cannot open " + path);
  OrderedJson doc;
  try {
    input >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DriftError(ErrorCode::IoFailure,
                     path + " is not valid JSON: " + e.what());
  }
  if (doc.value("schema", "") != "driftlab-report/1")
    throw DriftError(ErrorCode::InvalidConfig,
                     path + " is not a driftlab report");

  std::cout << "month      sensors  mean_rmse_resampled  std    diff_median\n";
  for (const auto& fm : doc.at("fleet")) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-10s %7zu  %19.2f  %5.2f  %11.2f",
                  fm.at("month").get<std::string>().c_str(),
                  fm.at("n_sensors").get<std::size_t>(),
                  fm.at("mean_rmse_resampled").get<double>(),
                  fm.at("std_rmse_resampled").get<double>(),
                  fm.at("rmse_difference_box").at("median").get<double>());
    std::cout << line << "\n";
  }
  std::cout << "mean max |rmse difference| over sensors: "
            << doc.at("summary").at("mean_max_abs_rmse_difference").get<double>()
            << " ppm\n";

  std::size_t gaps = 0, low_conf = 0;
  for (const auto& sensor : doc.at("sensors"))
    for (const auto& me : sensor.at("months")) {
      gaps += me.at("gap").get<bool>() ? 1 : 0;
      low_conf += me.at("low_confidence").get<bool>() ? 1 : 0;
    }
  if (gaps || low_conf)
    std::cout << "flags: " << gaps << " gap month(s), " << low_conf
              << " low-confidence month(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftlab: environmental-variation vs instrumental-drift "
               "decomposition for gas sensor fleets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("driftlab ") + kVersion);
  // One TOML-style file can configure every subcommand via [simulate],
  // [evaluate], ... sections; command-line flags override file values.
  app.set_config("--config", "", "Read options from a TOML/INI file "
                                 "(give before the subcommand)");

  SimulateOpts sim;
  add_simulate(app, sim);

  InputOpts check;
  CLI::App* check_cmd = app.add_subcommand(
      "ingest-check", "Parse, align and filter inputs; print diagnostics");
  check_cmd->configurable(true);
  add_input_options(check_cmd, check);

  EvaluateOpts eval;
  add_evaluate(app, eval, "evaluate",
               "Run the monthly importance-resampled drift evaluation");

  std::string report_path = "report/report.json";
  CLI::App* report_cmd =
      app.add_subcommand("report", "Summarize an existing report.json");
  report_cmd->add_option("--report", report_path, "Path to report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand("simulate")) return run_simulate(sim);
    if (app.got_subcommand("ingest-check")) return run_ingest_check(check);
    if (app.got_subcommand("evaluate")) return run_evaluate(eval);
    if (app.got_subcommand("report")) return run_report(report_path);
  } catch (const DriftError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
