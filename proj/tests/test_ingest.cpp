#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "driftlab/ingest.hpp"
#include "driftlab/rng.hpp"
#include "driftlab/stats.hpp"

using namespace driftlab;

namespace {

ParseResult parse_text(const std::string& text, const std::string& time_col,
                       const std::map<std::string, ColumnTag>& columns) {
  std::istringstream input{text};
  return parse_csv(input, time_col, columns);
}

SensorSeries series_with_co2(const std::vector<double>& values) {
  SensorSeries series;
  series.sensor_id = "s";
  std::int64_t ts = 0;
  for (double v : values) {
    Observation obs;
    obs.timestamp = ts;
    ts += 600;
    obs.temperature = 10.0;
    obs.sensor_co2 = v;
    obs.reference_co2 = 400.0;
    series.observations.push_back(obs);
  }
  return series;
}

}  // namespace

TEST_CASE("parse_csv maps two columns over three rows") {
  const auto result = parse_text(
      "time,temp,co2\n"
      "0,10.5,400\n"
      "60,11.0,401\n"
      "120,11.5,402\n",
      "time",
      {{"temp", ColumnTag::temperature}, {"co2", ColumnTag::reference_co2}});
  CHECK(result.rows == 3);
  CHECK(result.skipped_rows == 0);
  REQUIRE(result.streams.size() == 2);
  CHECK(result.streams.at(ColumnTag::temperature).size() == 3);
  CHECK(result.streams.at(ColumnTag::reference_co2).size() == 3);
  CHECK(result.streams.at(ColumnTag::temperature)[1].value == 11.0);
  CHECK(result.streams.at(ColumnTag::reference_co2)[2].timestamp == 120);
}

TEST_CASE("parse_csv reports a missing mapped column") {
  CHECK_THROWS_WITH_AS(
      parse_text("time,temp\n0,10\n", "time",
                 {{"co2", ColumnTag::reference_co2}}),
      doctest::Contains("co2"), DriftError);
}

TEST_CASE("parse_csv skips rows with unparseable values, counting them") {
  const auto result = parse_text(
      "time,temp\n"
      "0,10.0\n"
      "60,NaN\n"
      "120,10.5\n",
      "time", {{"temp", ColumnTag::temperature}});
  CHECK(result.rows == 3);
  CHECK(result.skipped_rows == 1);
  CHECK(result.streams.at(ColumnTag::temperature).size() == 2);
}

TEST_CASE("parse_csv skips rows with bad timestamps") {
  const auto result = parse_text(
      "time,temp\n"
      "garbage,10.0\n"
      "2017-01-01T00:00:00Z,10.5\n",
      "time", {{"temp", ColumnTag::temperature}});
  CHECK(result.skipped_rows == 1);
  REQUIRE(result.streams.at(ColumnTag::temperature).size() == 1);
  CHECK(result.streams.at(ColumnTag::temperature)[0].timestamp == 1483228800);
}

TEST_CASE("parse_csv autodetects tab delimiters") {
  const auto result = parse_text(
      "time\ttemp\n"
      "0\t10.0\n",
      "time", {{"temp", ColumnTag::temperature}});
  CHECK(result.streams.at(ColumnTag::temperature).size() == 1);
}

TEST_CASE("parse_csv error identities") {
  std::istringstream empty{""};
  CHECK_THROWS_AS(parse_csv(empty, "t", {}), DriftError);

  // header only, no data rows
  CHECK_THROWS_AS(parse_text("time,temp\n", "time",
                             {{"temp", ColumnTag::temperature}}),
                  DriftError);

  // duplicate column names cannot be mapped unambiguously
  try {
    parse_text("time,temp,temp\n0,1,2\n", "time",
               {{"temp", ColumnTag::temperature}});
    FAIL("expected MalformedHeader");
  } catch (const DriftError& e) {
    CHECK(e.code() == ErrorCode::MalformedHeader);
  }
}

TEST_CASE("align_average takes the arithmetic mean per window") {
  ColumnStreams streams;
  streams[ColumnTag::temperature] = {{0, 1.0}, {100, 2.0}, {599, 3.0}};
  streams[ColumnTag::ir_signal] = {{10, 0.9}};
  streams[ColumnTag::reference_co2] = {{20, 400.0}, {30, 410.0}};
  const SensorSeries series = align_average("s", streams, 600);
  REQUIRE(series.size() == 1);
  CHECK(series.observations[0].timestamp == 0);
  CHECK(series.observations[0].temperature == doctest::Approx(2.0));
  CHECK(*series.observations[0].ir_signal == doctest::Approx(0.9));
  CHECK(series.observations[0].reference_co2 == doctest::Approx(405.0));
}

TEST_CASE("align_average throws NoOverlap for disjoint coverage") {
  ColumnStreams streams;
  // sensor in January, reference in February
  streams[ColumnTag::temperature] = {{0, 1.0}};
  streams[ColumnTag::ir_signal] = {{0, 0.9}};
  streams[ColumnTag::reference_co2] = {{30 * 86400, 400.0}};
  try {
    align_average("s", streams, 600);
    FAIL("expected NoOverlap");
  } catch (const DriftError& e) {
    CHECK(e.code() == ErrorCode::NoOverlap);
  }
}

TEST_CASE("align_average drops only windows missing a channel entirely") {
  // 1-minute cadence over two 600 s windows. The reference misses one
  // minute in the first window (still kept, mean of 9) and misses the
  // second window entirely (dropped).
  ColumnStreams streams;
  for (int i = 0; i < 20; ++i) {
    const std::int64_t ts = i * 60;
    streams[ColumnTag::temperature].push_back({ts, 10.0});
    streams[ColumnTag::ir_signal].push_back({ts, 0.95});
    if (i < 10 && i != 3)
      streams[ColumnTag::reference_co2].push_back(
          {ts, 400.0 + static_cast<double>(i)});
  }
  const SensorSeries series = align_average("s", streams, 600);
  REQUIRE(series.size() == 1);
  CHECK(series.observations[0].timestamp == 0);
  // mean of 400+i for i in 0..9 minus i=3 -> (4045 - 403) / 9
  CHECK(series.observations[0].reference_co2 ==
        doctest::Approx((4045.0 - 403.0) / 9.0));
}

TEST_CASE("align_average timestamps are window starts, strictly increasing") {
  ColumnStreams streams;
  rng::Stream random(rng::substream(7, "align"));
  for (int i = 0; i < 2000; ++i) {
    const auto ts = static_cast<std::int64_t>(random.uniform() * 100000.0);
    streams[ColumnTag::temperature].push_back({ts, 10.0});
    streams[ColumnTag::sensor_co2].push_back({ts, 420.0});
    streams[ColumnTag::reference_co2].push_back({ts, 400.0});
  }
  const SensorSeries series = align_average("s", streams, 600);
  for (std::size_t i = 0; i < series.size(); ++i) {
    CHECK(series.observations[i].timestamp % 600 == 0);
    if (i > 0)
      CHECK(series.observations[i].timestamp >
            series.observations[i - 1].timestamp);
    // Constant inputs average to the same constants in every kept window.
    CHECK(series.observations[i].temperature == 10.0);
    CHECK(*series.observations[i].sensor_co2 == 420.0);
  }
}

TEST_CASE("remove_outliers cuts exactly the top tail in co2 mode") {
  // 10000 distinct values: quantile 0.999 keeps ranks 1..9990.
  std::vector<double> values(10000);
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = static_cast<double>(i + 1);
  // shuffle deterministically so order does not encode rank
  rng::Stream random(rng::substream(11, "shuffle"));
  for (std::size_t i = values.size() - 1; i > 0; --i)
    std::swap(values[i], values[static_cast<std::size_t>(random.uniform() *
                                                         double(i + 1))]);

  OutlierStats stats;
  const SensorSeries kept =
      remove_outliers(series_with_co2(values), 0.999, &stats);
  CHECK(stats.removed == 10);
  CHECK(stats.cutoff == 9990.0);
  CHECK_FALSE(stats.ir_mode);

  // brute-force oracle: sort and keep everything <= value at rank ceil(q*n)
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double cutoff = sorted[static_cast<std::size_t>(
                            std::ceil(0.999 * 10000.0)) - 1];
  for (const Observation& obs : kept.observations)
    CHECK(*obs.sensor_co2 <= cutoff);
  CHECK(kept.size() == 9990);
}

TEST_CASE("remove_outliers keeps ties at the cutoff") {
  std::vector<double> values(100, 5.0);
  const SensorSeries kept = remove_outliers(series_with_co2(values), 0.5);
  CHECK(kept.size() == 100);  // cutoff equals every value, inclusive
}

TEST_CASE("remove_outliers with quantile 1 is the identity") {
  const SensorSeries input = series_with_co2({3.0, 1.0, 2.0});
  const SensorSeries kept = remove_outliers(input, 1.0);
  CHECK(kept.observations == input.observations);
}

TEST_CASE("remove_outliers trims the low IR tail in ir mode") {
  SensorSeries series;
  for (int i = 0; i < 1000; ++i) {
    Observation obs;
    obs.timestamp = i * 600;
    obs.temperature = 10.0;
    obs.ir_signal = 0.90 + 1e-4 * static_cast<double>(i);
    obs.reference_co2 = 400.0;
    series.observations.push_back(obs);
  }
  OutlierStats stats;
  const SensorSeries kept = remove_outliers(series, 0.999, &stats);
  CHECK(stats.ir_mode);
  // cutoff at the (1-q) nearest-rank = rank ceil(0.001*1000) = 1st value
  CHECK(stats.cutoff == 0.90);
  CHECK(kept.size() == 1000);

  const SensorSeries kept2 = remove_outliers(series, 0.99, &stats);
  CHECK(stats.cutoff == doctest::Approx(0.90 + 1e-4 * 9));
  CHECK(stats.removed == 9);
}

TEST_CASE("remove_outliers never removes more than ceil((1-q)n) non-ties") {
  rng::Stream random(rng::substream(13, "outliers"));
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 50 + static_cast<std::size_t>(random.uniform() * 500);
    std::vector<double> values(n);
    for (double& v : values)
      v = std::floor(random.uniform() * 50.0);  // heavy ties
    const double q = 0.8 + 0.2 * random.uniform();
    OutlierStats stats;
    remove_outliers(series_with_co2(values), q, &stats);
    const auto budget = static_cast<std::size_t>(
        std::ceil((1.0 - q) * static_cast<double>(n)));
    std::size_t ties = 0;
    for (double v : values)
      if (v == stats.cutoff) ++ties;
    CHECK(stats.removed <= budget + ties);
  }
}

TEST_CASE("remove_outliers rejects empty series") {
  CHECK_THROWS_AS(remove_outliers(SensorSeries{}, 0.999), DriftError);
}
