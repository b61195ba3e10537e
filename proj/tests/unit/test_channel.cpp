#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mcvd/analytics.hpp"
#include "mcvd/channel.hpp"
#include "mcvd/errors.hpp"

using namespace mcvd;
using std::numbers::pi;

TEST_CASE("erfc against high-precision values") {
  struct Ref {
    double x;
    double value;
  };
  // 20-digit references computed with arbitrary-precision arithmetic.
  const Ref refs[] = {
      {0.0, 1.0},
      {0.1, 0.8875370839817151078},
      {0.5, 0.47950012218695346232},
      {1.0, 0.15729920705028513066},
      {std::sqrt(1.5), 0.083264516663550401855},
      {1.9999, 0.0046798020929706085356},
      {2.0, 0.0046777349810472658379},
      {2.5, 0.00040695201744495893956},
      {3.0, 2.2090496998585441373e-5},
      {5.0, 1.5374597944280348502e-12},
      {7.5, 2.7766493860305691007e-26},
      {9.9, 1.5431200214053183951e-44},
      {-1.0, 1.8427007929497148693},
      {-3.0, 1.9999779095030014146},
  };
  for (const auto& r : refs) {
    CAPTURE(r.x);
    CHECK(std::fabs(mcvd::erfc(r.x) - r.value) <= 1e-10 * r.value);
  }
}

TEST_CASE("erfc agrees with the C library across a dense grid") {
  double worst = 0;
  for (int i = 0; i <= 10'000; ++i) {
    const double x = -10.0 + 20.0 * i / 10'000;
    const double ref = std::erfc(x);
    if (ref < 1e-300) continue;
    worst = std::max(worst, std::fabs(mcvd::erfc(x) - ref) / ref);
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("erfc symmetry and limits") {
  for (double x = 0; x < 6; x += 0.37) CHECK(mcvd::erfc(x) + mcvd::erfc(-x) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mcvd::erfc(40.0) == 0.0);
  CHECK(mcvd::erfc(-40.0) == 2.0);
}

TEST_CASE("coverage fraction") {
  CHECK(coverage_fraction(FullDisk{}, 3) == 1.0);
  CHECK(coverage_fraction(ConcentricDisk{1.5}, 3) == doctest::Approx(0.25));
  CHECK(coverage_fraction(Sector{0, pi / 2, 0, 3}, 3) == doctest::Approx(0.25));
  CHECK(coverage_fraction(OffsetDisk{1, 0, 1}, 3) == doctest::Approx(1.0 / 9));
}

TEST_CASE("analytic cumulative hits") {
  CHECK(analytic_fhit(0, 1e6, 9, 200, 1) == 0);
  CHECK(analytic_fhit(-1, 1e6, 9, 200, 1) == 0);
  CHECK(analytic_fhit(1e12, 1e6, 9, 200, 1) == doctest::Approx(1e6).epsilon(1e-5));
  // at t_p the argument is sqrt(1.5)
  const double tp = 81.0 / 1200.0;
  CHECK(analytic_fhit(tp, 1.5e6, 9, 200, 1) == doctest::Approx(1.5e6 * 0.083264516663550401855));
  CHECK(analytic_fhit(tp, 1.5e6, 9, 200, 1) == doctest::Approx(1.249e5).epsilon(1e-3));
  CHECK(analytic_fhit(tp, 1.5e6, 9, 200, 0.25) == doctest::Approx(0.25 * analytic_fhit(tp, 1.5e6, 9, 200, 1)));
  CHECK(analytic_fhit(tp, 3e6, 9, 200, 1) == doctest::Approx(2 * analytic_fhit(tp, 1.5e6, 9, 200, 1)));
}

TEST_CASE("analytic curve is monotone in t, D and d") {
  double prev = 0;
  for (double t = 0.01; t < 1; t += 0.01) {
    const double v = analytic_fhit(t, 1e5, 9, 200, 1);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(analytic_fhit(0.1, 1e5, 9, 400, 1) > analytic_fhit(0.1, 1e5, 9, 200, 1));
  CHECK(analytic_fhit(0.1, 1e5, 6, 200, 1) > analytic_fhit(0.1, 1e5, 9, 200, 1));
}

TEST_CASE("channel curve input errors") {
  SimulationConfig cfg;
  const std::vector<double> none;
  CHECK_THROWS_AS(build_channel_curve(cfg, none), EmptySample);
  const std::vector<double> unsorted{0.2, 0.1};
  CHECK_THROWS_AS(build_channel_curve(cfg, unsorted), ConfigError);

  cfg.n_tx = 10;
  cfg.duration = 0.01;
  const auto result = run_simulation(cfg);
  const std::vector<double> late{0.005, 0.02};
  CHECK_THROWS_AS(build_channel_curve(cfg, late, &result), ConfigError);
}

TEST_CASE("channel curve annotations") {
  SimulationConfig cfg;  // D = 200, rv = 3, d = 9
  const double tp = peak_time(cfg.distance, cfg.diffusion);
  const std::vector<double> times{tp, 3 * tp, 5 * tp};

  const auto full = build_channel_curve(cfg, times);
  CHECK(full.exact);
  CHECK(full.within_validity);
  CHECK_FALSE(full.required_ratio);
  CHECK(full.ratio == 3.0);
  CHECK(full.analytic.size() == 3);
  CHECK_FALSE(full.simulated);

  cfg.region = ConcentricDisk{1.5};
  const auto partial = build_channel_curve(cfg, times);
  CHECK_FALSE(partial.exact);
  CHECK(partial.phi == doctest::Approx(0.25));
  REQUIRE(partial.required_ratio);
  CHECK(*partial.required_ratio == 1.90);
  CHECK(partial.within_validity);

  cfg.distance = 4.5;  // d / rv = 1.5
  const std::vector<double> early{peak_time(4.5, 200)};
  const auto close = build_channel_curve(cfg, early);
  CHECK(*close.required_ratio == 2.40);
  CHECK_FALSE(close.within_validity);
}

TEST_CASE("simulated counts are attached when a result is given") {
  SimulationConfig cfg;
  cfg.n_tx = 2000;
  cfg.distance = 4;
  cfg.duration = 0.02;
  cfg.region = ConcentricDisk{1.5};
  const auto result = run_simulation(cfg);
  const std::vector<double> times{0.005, 0.01, 0.02};
  const auto curve = build_channel_curve(cfg, times, &result);
  REQUIRE(curve.simulated);
  CHECK((*curve.simulated)[2] == count_hits_in_region(result, 0.02));
  CHECK((*curve.simulated)[0] <= (*curve.simulated)[1]);
}
