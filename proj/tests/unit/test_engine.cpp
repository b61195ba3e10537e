#include <doctest.h>

#include <cmath>
#include <random>

#include "mcvd/analytics.hpp"
#include "mcvd/engine.hpp"
#include "mcvd/errors.hpp"

using namespace mcvd;

namespace {

SimulationConfig small_config() {
  SimulationConfig cfg;
  cfg.diffusion = 200;
  cfg.rv = 3;
  cfg.distance = 6;
  cfg.n_tx = 4000;
  cfg.duration = 5 * peak_time(6, 200);
  cfg.seed = 42;
  return cfg;
}

MoleculeState at(double x, double y, double z) { return {{x, y, z}, MoleculeStatus::Free}; }

}  // namespace

TEST_CASE("axial crossing is absorbed at the plane") {
  SimulationConfig cfg = small_config();
  cfg.distance = 9;
  const auto out = advance_molecule(at(0, 0, 8.95), {0, 0, 0.1}, cfg, 7, 12);
  CHECK(out.state.status == MoleculeStatus::Absorbed);
  REQUIRE(out.hit);
  CHECK(out.hit->molecule_id == 7);
  CHECK(out.hit->step == 12);
  CHECK(out.hit->time == doctest::Approx(13 * cfg.dt));
  CHECK(out.hit->r == 0.0);
  CHECK(out.hit->in_region);
}

TEST_CASE("radial bounce retraces the overshoot") {
  SimulationConfig cfg = small_config();
  cfg.distance = 9;
  // Overshoot of 0.1 past x = 3 comes back to x = 2.9.
  const auto out = advance_molecule(at(2.9, 0, 5), {0.2, 0, 0}, cfg, 0, 0);
  CHECK(out.state.status == MoleculeStatus::Free);
  CHECK(out.state.position.x == doctest::Approx(2.9).epsilon(1e-12));
  CHECK(out.state.position.y == doctest::Approx(0.0));
  CHECK(out.state.position.z == 5.0);
  CHECK(out.bounces == 1);
}

TEST_CASE("region membership of hits") {
  SimulationConfig cfg = small_config();
  cfg.distance = 9;
  cfg.region = ConcentricDisk{1.5};
  const auto center = advance_molecule(at(0, 0, 8.95), {0, 0, 0.1}, cfg, 0, 0);
  REQUIRE(center.hit);
  CHECK(center.hit->in_region);
  const auto off = advance_molecule(at(2, 0, 8.95), {0, 0, 0.1}, cfg, 0, 0);
  REQUIRE(off.hit);
  CHECK(off.hit->r == doctest::Approx(2.0));
  CHECK_FALSE(off.hit->in_region);
}

TEST_CASE("wall event before the plane folds the hit location") {
  SimulationConfig cfg = small_config();
  cfg.distance = 9;
  // p1 = (3.3, 0, 9.05): wall at t = 0.25, plane at s = 0.5.
  for (auto s : {ReflectionStrategy::PaperElastic, ReflectionStrategy::Specular}) {
    cfg.strategy = s;
    const auto out = advance_molecule(at(2.9, 0, 8.95), {0.4, 0, 0.1}, cfg, 0, 0);
    REQUIRE(out.hit);
    CHECK(out.hit->x == doctest::Approx(2.9).epsilon(1e-12));
    CHECK(out.bounces == 1);
  }
  cfg.strategy = ReflectionStrategy::Rollback;
  const auto rolled = advance_molecule(at(2.9, 0, 8.95), {0.4, 0, 0.1}, cfg, 0, 0);
  CHECK_FALSE(rolled.hit);
  CHECK(rolled.state.position == Vec3{2.9, 0, 8.95});
}

TEST_CASE("plane event before the wall absorbs for every strategy") {
  SimulationConfig cfg = small_config();
  cfg.distance = 9;
  for (auto s : {ReflectionStrategy::Rollback, ReflectionStrategy::PaperElastic,
                 ReflectionStrategy::Specular}) {
    cfg.strategy = s;
    // p1 = (3.1, 0, 9.35): plane at s = 0.125, wall at t = 0.5.
    const auto out = advance_molecule(at(2.9, 0, 8.95), {0.2, 0, 0.4}, cfg, 0, 0);
    REQUIRE(out.hit);
    CHECK(out.hit->x == doctest::Approx(2.925).epsilon(1e-12));
    CHECK(out.bounces == 0);
  }
}

TEST_CASE("config validation") {
  SimulationConfig cfg = small_config();
  CHECK(cfg.validate().empty());
  cfg.rv = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.duration = cfg.dt / 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.rv = 0.5;  // sigma = 0.2 > rv / 3
  cfg.distance = 1.0;
  CHECK(cfg.validate().size() == 1);
  cfg.rv = 0.25;  // sigma > rv / 1.5
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_config();
  cfg.region = ConcentricDisk{4};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("step count rounds the duration up") {
  SimulationConfig cfg = small_config();
  cfg.duration = 0.0675;
  CHECK(cfg.step_count() == 675);
  cfg.duration = 0.06751;
  CHECK(cfg.step_count() == 676);
}

TEST_CASE("empty run") {
  SimulationConfig cfg = small_config();
  cfg.n_tx = 0;
  const auto result = run_simulation(cfg);
  CHECK(result.hits.empty());
  CHECK(result.cumulative.size() == cfg.step_count());
  for (const auto& p : result.cumulative) {
    CHECK(p.full == 0);
    CHECK(p.region == 0);
  }
}

TEST_CASE("run invariants hold at every step for every strategy") {
  for (auto s : {ReflectionStrategy::Rollback, ReflectionStrategy::PaperElastic,
                 ReflectionStrategy::Specular}) {
    SimulationConfig cfg = small_config();
    cfg.n_tx = 500;
    cfg.strategy = s;
    cfg.region = ConcentricDisk{1.5};
    const auto result = run_simulation(cfg, {1, true});
    std::uint64_t last_id = 0;
    bool first = true;
    for (const auto& h : result.hits) {
      if (!first) CHECK(h.molecule_id > last_id);
      first = false;
      last_id = h.molecule_id;
      CHECK(h.r <= cfg.rv);
      CHECK(h.time == doctest::Approx((h.step + 1) * cfg.dt));
      CHECK(h.theta >= 0.0);
      CHECK(h.theta < kTwoPi);
      CHECK(h.theta == doctest::Approx(polar_angle(h.x, h.y)));
      CHECK(h.in_region == region_contains(cfg.region, h.x, h.y));
    }
    for (std::size_t k = 1; k < result.cumulative.size(); ++k) {
      CHECK(result.cumulative[k].full >= result.cumulative[k - 1].full);
      CHECK(result.cumulative[k].region >= result.cumulative[k - 1].region);
      CHECK(result.cumulative[k].region <= result.cumulative[k].full);
    }
    CHECK(result.cumulative.back().full == result.hits.size());
  }
}

TEST_CASE("results do not depend on the worker count") {
  SimulationConfig cfg = small_config();
  cfg.n_tx = 3000;
  const auto a = run_simulation(cfg, {1, false});
  const auto b = run_simulation(cfg, {3, false});
  const auto c = run_simulation(cfg, {1, false});
  CHECK(a.hits == b.hits);
  CHECK(a.cumulative == b.cumulative);
  CHECK(a.total_bounces == b.total_bounces);
  CHECK(a.hits == c.hits);
}

TEST_CASE("elastic and specular share z dynamics exactly") {
  SimulationConfig cfg = small_config();
  cfg.strategy = ReflectionStrategy::PaperElastic;
  const auto a = run_simulation(cfg);
  cfg.strategy = ReflectionStrategy::Specular;
  const auto b = run_simulation(cfg);
  CHECK(a.cumulative == b.cumulative);
}

TEST_CASE("counting hits by time") {
  SimulationConfig cfg = small_config();
  cfg.n_tx = 20'000;
  cfg.region = FullDisk{};
  const auto full = run_simulation(cfg);
  const double tp = peak_time(cfg.distance, cfg.diffusion);
  CHECK(count_hits_in_region(full, 0.0) == 0);
  for (double m : {1.0, 3.0, 5.0})
    CHECK(count_hits_in_region(full, m * tp) == count_hits_full(full, m * tp));

  std::uint64_t manual = 0;
  for (const auto& h : full.hits) manual += h.time <= 2 * tp + 1e-12 ? 1 : 0;
  CHECK(count_hits_full(full, 2 * tp) == manual);

  cfg.region = ConcentricDisk{1.5};
  const auto part = run_simulation(cfg);
  for (double m : {1.0, 3.0, 5.0}) {
    const double n = static_cast<double>(count_hits_full(part, m * tp));
    const double k = static_cast<double>(count_hits_in_region(part, m * tp));
    CHECK(std::fabs(k - 0.25 * n) <= 3.0 * std::sqrt(n * 0.25 * 0.75));
  }
}

TEST_CASE("bounce cap failure names molecule and step") {
  SimulationConfig cfg = small_config();
  cfg.n_tx = 200;
  cfg.max_bounces = 1;
  cfg.rv = 0.9;  // sigma / rv ~ 0.22: multi-bounce steps happen quickly
  cfg.distance = 20;
  cfg.duration = 0.05;
  try {
    run_simulation(cfg);
    FAIL("expected MaxBouncesExceeded");
  } catch (const MaxBouncesExceeded& e) {
    CHECK(std::string(e.what()).find("molecule " + std::to_string(e.molecule_id)) !=
          std::string::npos);
    // Same molecule reported regardless of scheduling.
    try {
      run_simulation(cfg, {4, false});
    } catch (const MaxBouncesExceeded& e2) {
      CHECK(e2.molecule_id == e.molecule_id);
      CHECK(e2.step_index == e.step_index);
    }
  }
}

TEST_CASE("uniform in-disk population stays uniform under every wall strategy") {
  // 1e5 molecules, 1e3 steps, no absorber.
  const double rv = 3.0;
  const GaussianStepParams params{200.0, 1e-4};
  for (auto s : {ReflectionStrategy::Rollback, ReflectionStrategy::PaperElastic,
                 ReflectionStrategy::Specular}) {
    CAPTURE(to_string(s));
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(-rv, rv);
    RandomStream rng(77);
    std::vector<double> radii;
    radii.reserve(100'000);
    for (int i = 0; i < 100'000; ++i) {
      Vec3 p;
      do {
        p = {u(gen), u(gen), 0};
      } while (p.x * p.x + p.y * p.y > rv * rv);
      for (int k = 0; k < 1000; ++k) {
        const Vec3 d = sample_displacement(rng, params);
        p = resolve_wall(s, p, p + d, rv).position;
      }
      radii.push_back(std::hypot(p.x, p.y));
    }
    CHECK(ks_uniform_disk(radii, rv, 0.01).pass);
  }
}
