#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mcvd/errors.hpp"
#include "mcvd/geometry.hpp"

using namespace mcvd;
using std::numbers::pi;

TEST_CASE("per-axis step deviation is sqrt(2 D dt)") {
  GaussianStepParams p{100.0, 1e-4};
  CHECK(p.sigma() == doctest::Approx(0.1414213562).epsilon(1e-9));
  CHECK(p.variance() == doctest::Approx(0.02));
}

TEST_CASE("sample_displacement moments") {
  const GaussianStepParams p{200.0, 1e-4};
  const double var = p.variance();  // 0.04
  RandomStream rng(12345);
  const int n = 1'000'000;
  double sx = 0, sy = 0, sz = 0, sxx = 0, syy = 0, szz = 0, sxy = 0, sxz = 0;
  for (int i = 0; i < n; ++i) {
    const Vec3 v = sample_displacement(rng, p);
    sx += v.x, sy += v.y, sz += v.z;
    sxx += v.x * v.x, syy += v.y * v.y, szz += v.z * v.z;
    sxy += v.x * v.y, sxz += v.x * v.z;
  }
  const double sigma = std::sqrt(var);
  CHECK(std::fabs(sx / n) < 4.0 * sigma / std::sqrt(n));
  for (double s2 : {sxx, syy, szz}) CHECK(std::fabs(s2 / n / var - 1.0) < 0.02);
  // Standard error of a product of independent N(0, var) draws is var / sqrt(n).
  const double se = var / std::sqrt(static_cast<double>(n));
  CHECK(std::fabs(sxy / n) < 3.0 * se);
  CHECK(std::fabs(sxz / n) < 3.0 * se);
  // Variance standard error is var * sqrt(2 / n).
  CHECK(std::fabs(sxx / n - var) < 3.0 * var * std::sqrt(2.0 / n));
}

TEST_CASE("sample_displacement consumes three words and is reproducible") {
  const GaussianStepParams p{100.0, 1e-4};
  RandomStream a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(sample_displacement(a, p) == sample_displacement(b, p));
  RandomStream c(9), d(9);
  sample_displacement(c, p);
  d();
  d();
  d();
  CHECK(c() == d());
}

TEST_CASE("inverse normal quantile against the normal CDF") {
  for (double p : {1e-300, 1e-12, 1e-5, 0.01, 0.2, 0.5, 0.77, 0.975, 1.0 - 1e-9}) {
    const double z = inverse_normal_cdf(p);
    const double back = 0.5 * std::erfc(-z / std::sqrt(2.0));
    CHECK(back == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(inverse_normal_cdf(0.5) == 0.0);
}

TEST_CASE("molecule streams differ per molecule and repeat per seed") {
  auto a = molecule_stream(1, 0);
  auto b = molecule_stream(1, 1);
  auto c = molecule_stream(1, 0);
  auto d = molecule_stream(2, 0);
  const auto a0 = a();
  CHECK(a0 != b());
  CHECK(a0 == c());
  CHECK(a0 != d());
}

TEST_CASE("polar angle convention") {
  CHECK(polar_angle(1, 0) == 0.0);
  CHECK(polar_angle(0, 1) == doctest::Approx(pi / 2));
  CHECK(polar_angle(0, -1) == doctest::Approx(1.5 * pi));
  CHECK(polar_angle(1, -1e-300) < kTwoPi);
  CHECK(polar_angle(0, 0) == 0.0);
}

TEST_CASE("region membership") {
  CHECK(region_contains(FullDisk{}, 2.9, 0.1));
  const ReceiverRegion disk = ConcentricDisk{1.5};
  CHECK(region_contains(disk, 1.5, 0));
  CHECK_FALSE(region_contains(disk, 1.6, 0));
  const ReceiverRegion quadrant = Sector{0, pi / 2, 0, 3};
  CHECK(region_contains(quadrant, 1, 1));
  CHECK_FALSE(region_contains(quadrant, -1, 1));
  CHECK(region_contains(quadrant, 3, 0));
  const ReceiverRegion ring = Sector{0, kTwoPi, 1, 2};
  CHECK_FALSE(region_contains(ring, 0.5, 0));
  CHECK(region_contains(ring, 0, -1.5));
  CHECK(region_contains(ring, 1.5, 0));
  const ReceiverRegion patch = OffsetDisk{1.5, 0, 1};
  CHECK(region_contains(patch, 2.5, 0));
  CHECK_FALSE(region_contains(patch, 0.4, 0));
}

TEST_CASE("region areas") {
  CHECK(region_area(FullDisk{}, 3) == doctest::Approx(9 * pi));
  CHECK(region_area(FullDisk{}, 3) / (pi * 9) == 1.0);
  CHECK(region_area(ConcentricDisk{1.5}, 3) == doctest::Approx(2.25 * pi));
  CHECK(region_area(Sector{0, pi, 0, 3}, 3) == doctest::Approx(4.5 * pi));
  CHECK(region_area(OffsetDisk{1, 1, 0.5}, 3) == doctest::Approx(0.25 * pi));
}

TEST_CASE("region validation") {
  CHECK_NOTHROW(validate_region(ConcentricDisk{3}, 3));
  CHECK_THROWS_AS(validate_region(ConcentricDisk{3.1}, 3), ConfigError);
  CHECK_THROWS_AS(validate_region(ConcentricDisk{0}, 3), ConfigError);
  CHECK_THROWS_AS(validate_region(Sector{1, 1, 0, 3}, 3), ConfigError);
  CHECK_THROWS_AS(validate_region(Sector{0, 7, 0, 3}, 3), ConfigError);
  CHECK_THROWS_AS(validate_region(Sector{0, 1, 2, 1}, 3), ConfigError);
  CHECK_THROWS_AS(validate_region(OffsetDisk{2, 0, 1.5}, 3), ConfigError);
  CHECK_NOTHROW(validate_region(OffsetDisk{2, 0, 1}, 3));
}

TEST_CASE("Monte Carlo area fraction matches closed form for every shape") {
  const double rv = 3.0;
  const std::vector<ReceiverRegion> regions = {FullDisk{}, ConcentricDisk{1.2},
                                               Sector{0.3, 2.0, 0.5, 2.5}, OffsetDisk{-1, 1, 1.5}};
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-rv, rv);
  std::vector<std::pair<double, double>> points;
  while (points.size() < 200'000) {
    const double x = u(gen), y = u(gen);
    if (x * x + y * y <= rv * rv) points.emplace_back(x, y);
  }
  for (const auto& region : regions) {
    CAPTURE(describe_region(region));
    std::size_t in = 0;
    for (auto [x, y] : points) in += region_contains(region, x, y) ? 1 : 0;
    const double frac = region_area(region, rv) / (pi * rv * rv);
    const double n = static_cast<double>(points.size());
    const double se = std::sqrt(std::max(frac * (1 - frac), 1e-12) / n);
    CHECK(std::fabs(in / n - frac) <= 3 * se + 1e-12);
  }
}

TEST_CASE("segment plane crossing") {
  auto a = segment_plane_crossing({0, 0, 8}, {0, 0, 10}, 9);
  REQUIRE(a);
  CHECK(a->s == doctest::Approx(0.5));
  CHECK(a->hit == Vec3{0, 0, 9});
  CHECK_FALSE(segment_plane_crossing({1, 1, 5}, {1, 1, 6}, 9));
  auto c = segment_plane_crossing({0, 0, 8.9}, {2, 0, 9.1}, 9);
  REQUIRE(c);
  CHECK(c->s == doctest::Approx(0.5));
  CHECK(c->hit.x == doctest::Approx(1.0));
  CHECK(c->hit.z == 9.0);

  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 10'000; ++i) {
    const double d = 5 + u(gen);
    const Vec3 p0{u(gen), u(gen), d - std::fabs(u(gen)) - 1e-9};
    const Vec3 p1{u(gen), u(gen), d + u(gen)};
    if (auto hit = segment_plane_crossing(p0, p1, d)) {
      CHECK(hit->s >= 0.0);
      CHECK(hit->s <= 1.0);
      CHECK(std::fabs(hit->hit.z - d) <= 1e-12 * d);
    }
  }
}
