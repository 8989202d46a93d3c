#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "driftlab/rng.hpp"
#include "driftlab/sensor_model.hpp"

using namespace driftlab;

TEST_CASE("estimate_co2 returns zero at zero absorbance") {
  const BeerLambertParams params{2.5, 3e-4, 293.15};
  for (double temp : {-20.0, 0.0, 20.0, 45.0})
    CHECK(estimate_co2(params, temp, params.i0) == 0.0);
}

TEST_CASE("estimate_co2 matches the frozen closed-form value") {
  // -ln(0.956) * (293.15/293.15) / 1e-4, evaluated with an arbitrary
  // precision oracle.
  const BeerLambertParams params{1.0, 1e-4, 293.15};
  CHECK(estimate_co2(params, 20.0, 0.956) ==
        doctest::Approx(449.97365930735805).epsilon(1e-12));
}

TEST_CASE("forward then estimate is the identity") {
  const BeerLambertParams params{1.2, 2e-4, 293.15};
  const double ir = forward_ir(params, 20.0, 450.0);
  CHECK(estimate_co2(params, 20.0, ir) == doctest::Approx(450.0).epsilon(1e-9));
}

TEST_CASE("roundtrip holds to 1e-9 relative over a grid") {
  const BeerLambertParams params{0.8, 1.7e-4, 293.15};
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double temp = -20.0 + 80.0 * i / 49.0;
      const double y = 2000.0 * j / 49.0;
      const double back = estimate_co2(params, temp, forward_ir(params, temp, y));
      CHECK(std::abs(back - y) <= 1e-9 * std::max(1.0, y));
    }
  }
}

TEST_CASE("forward_ir basics") {
  const BeerLambertParams params{1.5, 1e-4, 293.15};
  CHECK(forward_ir(params, 10.0, 0.0) == params.i0);
  // unit absorbance at the reference temperature
  CHECK(forward_ir(params, params.t_ref - kCelsiusToKelvin, 1.0 / params.alpha) ==
        doctest::Approx(params.i0 / std::exp(1.0)).epsilon(1e-12));
  // strictly decreasing in concentration
  double prev = forward_ir(params, 5.0, 0.0);
  for (double y = 50.0; y <= 2000.0; y += 50.0) {
    const double ir = forward_ir(params, 5.0, y);
    CHECK(ir < prev);
    prev = ir;
  }
}

TEST_CASE("estimate_co2 is monotone decreasing in ir") {
  const BeerLambertParams params{1.0, 1e-4, 293.15};
  double prev = estimate_co2(params, 15.0, 0.5);
  for (double ir = 0.55; ir < 1.0; ir += 0.05) {
    const double y = estimate_co2(params, 15.0, ir);
    CHECK(y < prev);
    prev = y;
  }
}

TEST_CASE("estimate_co2 clamps negatives to zero and counts them") {
  const BeerLambertParams params{1.0, 1e-4, 293.15};
  std::size_t clamped = 0;
  CHECK(estimate_co2(params, 20.0, 1.01, &clamped) == 0.0);
  CHECK(clamped == 1);
}

TEST_CASE("sensor model error identities") {
  const BeerLambertParams params{1.0, 1e-4, 293.15};
  CHECK_THROWS_AS(estimate_co2(params, 20.0, 0.0), DriftError);
  CHECK_THROWS_AS(estimate_co2(params, -300.0, 0.9), DriftError);
  CHECK_THROWS_AS(forward_ir(params, -300.0, 400.0), DriftError);
  const BeerLambertParams bad{0.0, 1e-4, 293.15};
  CHECK_THROWS_AS(bad.validate(), DriftError);
}

TEST_CASE("fit_params recovers exact parameters from noiseless data") {
  const BeerLambertParams truth{1.3, 2.2e-4, 293.15};
  std::vector<CalPoint> window;
  for (double temp : {0.0, 10.0, 20.0})
    for (double y : {350.0, 450.0, 550.0, 650.0})
      window.push_back(CalPoint{temp, forward_ir(truth, temp, y), y});
  const BeerLambertParams fitted = fit_params(window);
  CHECK(fitted.i0 == doctest::Approx(truth.i0).epsilon(1e-9));
  CHECK(fitted.alpha == doctest::Approx(truth.alpha).epsilon(1e-9));
  CHECK(fitted.t_ref == truth.t_ref);
}

TEST_CASE("fit_params is invariant to window order") {
  const BeerLambertParams truth{1.0, 1e-4, 293.15};
  std::vector<CalPoint> window;
  rng::Stream random(rng::substream(3, "fit"));
  for (int i = 0; i < 40; ++i) {
    const double temp = 25.0 * random.uniform();
    const double y = 350.0 + 400.0 * random.uniform();
    window.push_back(
        CalPoint{temp, forward_ir(truth, temp, y) *
                           std::exp(0.001 * random.normal()), y});
  }
  const BeerLambertParams a = fit_params(window);
  std::reverse(window.begin(), window.end());
  const BeerLambertParams b = fit_params(window);
  CHECK(a.alpha == doctest::Approx(b.alpha).epsilon(1e-12));
  CHECK(a.i0 == doctest::Approx(b.i0).epsilon(1e-12));
}

TEST_CASE("fit_params recovers alpha within 3 standard errors under noise") {
  const BeerLambertParams truth{1.0, 1e-4, 293.15};
  const double sigma = 0.002;  // ln-intensity noise
  std::vector<CalPoint> window;
  rng::Stream random(rng::substream(17, "fit.noise"));
  for (int i = 0; i < 500; ++i) {
    const double temp = 20.0 * random.uniform();
    const double y = 300.0 + 500.0 * random.uniform();
    window.push_back(CalPoint{
        temp, forward_ir(truth, temp, y) * std::exp(sigma * random.normal()),
        y});
  }
  const BeerLambertParams fitted = fit_params(window);

  // Independent OLS slope standard error: sigma / sqrt(sum (z - zbar)^2).
  double sum_z = 0.0;
  for (const CalPoint& p : window)
    sum_z += p.reference_co2 * truth.t_ref / (p.temperature_c + kCelsiusToKelvin);
  const double mean_z = sum_z / static_cast<double>(window.size());
  double s_zz = 0.0;
  for (const CalPoint& p : window) {
    const double z =
        p.reference_co2 * truth.t_ref / (p.temperature_c + kCelsiusToKelvin);
    s_zz += (z - mean_z) * (z - mean_z);
  }
  const double stderr_alpha = sigma / std::sqrt(s_zz);
  CHECK(std::abs(fitted.alpha - truth.alpha) <= 3.0 * stderr_alpha);
}

TEST_CASE("fit_params degenerate windows") {
  const BeerLambertParams truth{1.0, 1e-4, 293.15};
  std::vector<CalPoint> too_few = {
      {10.0, forward_ir(truth, 10.0, 400.0), 400.0},
      {10.0, forward_ir(truth, 10.0, 500.0), 500.0}};
  CHECK_THROWS_AS(fit_params(too_few), DriftError);

  std::vector<CalPoint> same_y;
  for (double temp : {5.0, 10.0, 15.0, 20.0})
    same_y.push_back(CalPoint{temp, forward_ir(truth, temp, 450.0), 450.0});
  try {
    fit_params(same_y);
    FAIL("expected DegenerateWindow");
  } catch (const DriftError& e) {
    CHECK(e.code() == ErrorCode::DegenerateWindow);
  }
}

TEST_CASE("passthrough_estimator is the identity with a negative flag") {
  bool negative = false;
  CHECK(passthrough_estimator(421.5, &negative) == 421.5);
  CHECK_FALSE(negative);
  CHECK(passthrough_estimator(0.0, &negative) == 0.0);
  CHECK_FALSE(negative);
  CHECK(passthrough_estimator(-3.0, &negative) == -3.0);
  CHECK(negative);
}

TEST_CASE("Estimator dispatches on mode and validates presence") {
  Observation obs;
  obs.temperature = 20.0;
  obs.ir_signal = 0.956;
  obs.reference_co2 = 450.0;

  const Estimator bl = Estimator::beer_lambert({1.0, 1e-4, 293.15});
  CHECK(bl.predict(obs) == doctest::Approx(449.97365930735805));
  CHECK_THROWS_AS(Estimator::passthrough().predict(obs), DriftError);

  Observation co2_obs;
  co2_obs.temperature = 20.0;
  co2_obs.sensor_co2 = 430.0;
  co2_obs.reference_co2 = 425.0;
  EstimatorStats stats;
  CHECK(Estimator::passthrough().predict(co2_obs, &stats) == 430.0);
  CHECK(stats.negative_passthrough == 0);
  CHECK_THROWS_AS(bl.predict(co2_obs), DriftError);
}
