#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "driftlab/metrics.hpp"
#include "driftlab/report_io.hpp"

namespace fs = std::filesystem;
using namespace driftlab;

namespace {

const std::string kBin = DRIFTLAB_BIN;
const fs::path kData = DRIFTLAB_TEST_DATA;

int run(const std::string& args) {
  const int status = std::system((kBin + " " + args).c_str());
  return status < 0 ? status : WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream input(path, std::ios::binary);
  REQUIRE(input);
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("driftlab_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help > /dev/null") == 0);
  CHECK(run("simulate --help > /dev/null") == 0);
  CHECK(run("--no-such-flag > /dev/null 2>&1") == 1);
  CHECK(run("evaluate --estimator bogus > /dev/null 2>&1") == 1);
  CHECK(run("> /dev/null 2>&1") == 1);  // a subcommand is required
}

TEST_CASE("missing inputs are config errors (exit 1)") {
  CHECK(run("evaluate --sensor-csv /nonexistent.csv --reference-csv "
            "/nonexistent2.csv --params /nope.json > /dev/null 2>&1") == 1);
  CHECK(run("report --report /nonexistent.json > /dev/null 2>&1") == 1);
}

TEST_CASE("malformed data is a data error (exit 2)") {
  const fs::path dir = fresh_dir("cli_data_err");
  write_text_file(dir / "sensor_x.csv", "timestamp,temperature\n0,10\n");
  write_text_file(dir / "reference.csv", "timestamp,co2\n0,400\n");
  // sensor file lacks both ir_signal and sensor_co2 columns
  CHECK(run("ingest-check --sensor-csv " + (dir / "sensor_x.csv").string() +
            " --reference-csv " + (dir / "reference.csv").string() +
            " > /dev/null 2>&1") == 2);
  fs::remove_all(dir);
}

TEST_CASE("simulate then evaluate matches the committed golden report") {
  const fs::path dir = fresh_dir("cli_golden");
  const std::string invocation =
      "cd " + dir.string() + " && " + kBin +
      " simulate --seed 42 --sensors 2 --months 3 --oracle-mc 20000"
      " --out simdata > /dev/null && " +
      kBin +
      " evaluate --seed 42 --data-dir simdata --params simdata/params.json"
      " --out report > /dev/null 2>&1";
  REQUIRE(std::system(invocation.c_str()) == 0);

  const std::string produced = slurp(dir / "report" / "report.json");
  const std::string golden = slurp(kData / "golden_report.json");
  CHECK(produced == golden);
  fs::remove_all(dir);
}

TEST_CASE("passthrough evaluation equals direct rmse") {
  const fs::path dir = fresh_dir("cli_passthrough");

  // one month of sensor-reported CO2 with known errors
  std::ostringstream sensor, reference;
  sensor << "timestamp,temperature,co2\n";
  reference << "timestamp,co2\n";
  SensorSeries direct;
  for (int i = 0; i < 600; ++i) {
    const std::int64_t ts =
        timestamp_from_civil(2017, 6, 1) + static_cast<std::int64_t>(i) * 600;
    const double temp = 5.0 + (i % 100) * 0.1;
    const double ref = 420.0 + (i % 50);
    const double err = ((i % 7) - 3.0);
    sensor << format_rfc3339(ts) << ',' << format_double(temp) << ','
           << format_double(ref + err) << '\n';
    reference << format_rfc3339(ts) << ',' << format_double(ref) << '\n';
    Observation obs;
    obs.timestamp = ts;
    obs.temperature = temp;
    obs.sensor_co2 = ref + err;
    obs.reference_co2 = ref;
    direct.observations.push_back(obs);
  }
  write_text_file(dir / "sensor_p.csv", sensor.str());
  write_text_file(dir / "reference.csv", reference.str());

  REQUIRE(run("evaluate --sensor-csv " + (dir / "sensor_p.csv").string() +
              " --reference-csv " + (dir / "reference.csv").string() +
              " --sensor-co2-col co2 --estimator passthrough --out " +
              (dir / "out").string() + " > /dev/null 2>&1") == 0);

  nlohmann::json report;
  std::ifstream{dir / "out" / "report.json"} >> report;
  const auto& month = report.at("sensors")[0].at("months")[0];
  CHECK(month.at("rmse_original").get<double>() ==
        doctest::Approx(rmse(direct, Estimator::passthrough()))
            .epsilon(1e-12));
  fs::remove_all(dir);
}

TEST_CASE("disjoint desired rectangle yields gaps but exit 0") {
  const fs::path dir = fresh_dir("cli_gaps");
  REQUIRE(run("simulate --seed 7 --sensors 1 --months 2 --oracle-mc 1000"
              " --out " +
              (dir / "sim").string() + " > /dev/null") == 0);
  // desired temperatures far above anything the environment produces
  REQUIRE(run("evaluate --data-dir " + (dir / "sim").string() +
              " --params " + (dir / "sim" / "params.json").string() +
              " --temp-range 60 70 --out " + (dir / "out").string() +
              " > /dev/null 2>&1") == 0);

  nlohmann::json report;
  std::ifstream{dir / "out" / "report.json"} >> report;
  for (const auto& month : report.at("sensors")[0].at("months"))
    CHECK(month.at("gap").get<bool>());
  CHECK(report.at("fleet").empty());
  fs::remove_all(dir);
}

TEST_CASE("report subcommand summarizes an evaluation") {
  const fs::path dir = fresh_dir("cli_report");
  REQUIRE(run("simulate --seed 9 --sensors 2 --months 2 --oracle-mc 1000"
              " --out " +
              (dir / "sim").string() + " > /dev/null") == 0);
  REQUIRE(run("evaluate --data-dir " + (dir / "sim").string() + " --params " +
              (dir / "sim" / "params.json").string() + " --out " +
              (dir / "out").string() + " > /dev/null 2>&1") == 0);
  CHECK(run("report --report " + (dir / "out" / "report.json").string() +
            " > " + (dir / "summary.txt").string()) == 0);
  const std::string summary = slurp(dir / "summary.txt");
  CHECK(summary.find("mean max |rmse difference|") != std::string::npos);
  CHECK(summary.find("2017-01") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("config file drives evaluate, flags override") {
  const fs::path dir = fresh_dir("cli_config");
  REQUIRE(run("simulate --seed 11 --sensors 1 --months 2 --oracle-mc 1000"
              " --out " +
              (dir / "sim").string() + " > /dev/null") == 0);
  write_text_file(dir / "eval.toml",
                  "[evaluate]\ndata-dir = \"" + (dir / "sim").string() +
                      "\"\n" + "params = \"" +
                      (dir / "sim" / "params.json").string() +
                      "\"\nresamples = 100\nseed = 5\n");
  REQUIRE(run("--config " + (dir / "eval.toml").string() +
              " evaluate --resamples 200 --out " + (dir / "out").string() +
              " > /dev/null 2>&1") == 0);
  nlohmann::json report;
  std::ifstream{dir / "out" / "report.json"} >> report;
  CHECK(report.at("config").at("resample_count").get<int>() == 200);  // flag wins
  CHECK(report.at("config").at("rng_seed").get<int>() == 5);  // from config
  fs::remove_all(dir);
}

TEST_CASE("fit-window calibration evaluates cleanly") {
  const fs::path dir = fresh_dir("cli_fit");
  REQUIRE(run("simulate --seed 13 --sensors 1 --months 2 --oracle-mc 1000"
              " --out " +
              (dir / "sim").string() + " > /dev/null") == 0);
  REQUIRE(run("evaluate --data-dir " + (dir / "sim").string() +
              " --fit-window 500 --out " + (dir / "out").string() +
              " > /dev/null 2>&1") == 0);
  nlohmann::json report;
  std::ifstream{dir / "out" / "report.json"} >> report;
  // calibration fitted on the data itself keeps the rmse near the noise
  for (const auto& month : report.at("sensors")[0].at("months"))
    CHECK(month.at("rmse_original").get<double>() < 100.0);
  fs::remove_all(dir);
}
