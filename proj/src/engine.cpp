#include "mcvd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mcvd/errors.hpp"

namespace mcvd {

std::uint64_t SimulationConfig::step_count() const {
  return static_cast<std::uint64_t>(std::ceil(duration / dt - 1e-9));
}

std::vector<std::string> SimulationConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0))
      throw ConfigError(std::string(name) + " must be a positive finite number");
  };
  positive(diffusion, "D");
  positive(dt, "dt");
  positive(rv, "rv");
  positive(distance, "d");
  positive(duration, "duration");
  if (duration < dt * (1.0 - 1e-12)) throw ConfigError("duration must be at least dt");
  if (max_bounces < 1) throw ConfigError("max_bounces must be at least 1");
  validate_region(region, rv);

  std::vector<std::string> warnings;
  const double sigma = step_params().sigma();
  std::ostringstream os;
  os.precision(4);
  if (sigma > rv / 1.5) {
    os << "step deviation sqrt(2 D dt) = " << sigma << " um exceeds rv/1.5 = " << rv / 1.5
       << " um; reduce dt or D";
    throw ConfigError(os.str());
  }
  if (sigma > rv / 3.0) {
    os << "step deviation sqrt(2 D dt) = " << sigma << " um exceeds rv/3 = " << rv / 3.0
       << " um; multiple wall bounces per step become likely";
    warnings.push_back(os.str());
  }
  return warnings;
}

namespace {

HitRecord make_hit(const SimulationConfig& cfg, std::uint64_t molecule_id, std::uint64_t step,
                   double x, double y) {
  HitRecord hit;
  hit.molecule_id = molecule_id;
  hit.step = step;
  hit.time = static_cast<double>(step + 1) * cfg.dt;
  hit.x = x;
  hit.y = y;
  hit.r = std::min(std::hypot(x, y), cfg.rv);
  hit.theta = polar_angle(x, y);
  hit.in_region = region_contains(cfg.region, x, y);
  return hit;
}

[[noreturn]] void throw_bounces(const SimulationConfig& cfg, std::uint64_t molecule_id,
                                std::uint64_t step) {
  std::ostringstream os;
  os << "molecule " << molecule_id << " at step " << step << " is still outside the vessel after "
     << cfg.max_bounces << " reflections; dt is too large for rv = " << cfg.rv << " um";
  throw MaxBouncesExceeded(os.str(), molecule_id, step);
}

}  // namespace

StepOutcome advance_molecule(const MoleculeState& state, const Vec3& displacement,
                             const SimulationConfig& cfg, std::uint64_t molecule_id,
                             std::uint64_t step) {
  const Vec3 p0 = state.position;
  const Vec3 p1 = p0 + displacement;
  const double rv2 = cfg.rv * cfg.rv;

  // Plane parameter along the unreflected z motion. Bounces never change z,
  // so it stays valid on the folded path.
  const bool crosses = p1.z >= cfg.distance;
  const double s = crosses ? (cfg.distance - p0.z) / (p1.z - p0.z) : 2.0;

  // Current in-plane leg runs from `start` (global parameter t0) to `end` (1).
  Vec3 start = p0;
  Vec3 end = p1;
  double t0 = 0.0;
  int bounces = 0;
  for (;;) {
    const bool end_inside = end.x * end.x + end.y * end.y <= rv2;
    std::optional<CollisionSolution> wall;
    double t_wall = 2.0;
    if (!end_inside) {
      wall = solve_wall_intersection(start, end, cfg.rv);
      t_wall = t0 + wall->t_hit * (1.0 - t0);
    }
    if (crosses && s <= t_wall) {
      const double u = t0 < 1.0 ? (s - t0) / (1.0 - t0) : 1.0;
      const double x = start.x + u * (end.x - start.x);
      const double y = start.y + u * (end.y - start.y);
      StepOutcome out;
      out.state.position = {x, y, cfg.distance};
      out.state.status = MoleculeStatus::Absorbed;
      out.hit = make_hit(cfg, molecule_id, step, x, y);
      out.bounces = bounces;
      return out;
    }
    if (end_inside) {
      return {{{end.x, end.y, p1.z}, MoleculeStatus::Free}, std::nullopt, bounces};
    }
    if (bounces >= cfg.max_bounces) throw_bounces(cfg, molecule_id, step);
    if (cfg.strategy == ReflectionStrategy::Rollback) {
      return {{p0, MoleculeStatus::Free}, std::nullopt, bounces + 1};
    }
    const Vec3 next = reflect_once(cfg.strategy, start, end, *wall, cfg.rv, {});
    start = wall->intersection;
    end = next;
    t0 = t_wall;
    ++bounces;
  }
}

StepOutcome step_molecule(const MoleculeState& state, const SimulationConfig& cfg, RandomStream& rng,
                          std::uint64_t molecule_id, std::uint64_t step) {
  const Vec3 displacement = sample_displacement(rng, cfg.step_params());
  return advance_molecule(state, displacement, cfg, molecule_id, step);
}

namespace {

struct MoleculeOutcome {
  std::optional<HitRecord> hit;
  std::uint64_t bounces = 0;
};

void check_free_state(const SimulationConfig& cfg, const MoleculeState& state,
                      std::uint64_t molecule_id, std::uint64_t step) {
  const Vec3& p = state.position;
  if (!p.finite() || p.x * p.x + p.y * p.y > cfg.rv * cfg.rv || p.z >= cfg.distance) {
    std::ostringstream os;
    os.precision(17);
    os << "invariant violated: molecule " << molecule_id << " at step " << step << " is free at ("
       << p.x << "," << p.y << "," << p.z << ")";
    throw std::logic_error(os.str());
  }
}

MoleculeOutcome run_molecule(const SimulationConfig& cfg, std::uint64_t molecule_id,
                             std::uint64_t n_steps, bool check) {
  RandomStream rng = molecule_stream(cfg.seed, molecule_id);
  MoleculeState state;
  MoleculeOutcome result;
  const GaussianStepParams params = cfg.step_params();
  const double rv2 = cfg.rv * cfg.rv;
  for (std::uint64_t step = 0; step < n_steps; ++step) {
    const Vec3 displacement = sample_displacement(rng, params);
    const Vec3 p1 = state.position + displacement;
    // Common case: no wall contact and no plane crossing.
    if (p1.x * p1.x + p1.y * p1.y <= rv2 && p1.z < cfg.distance) {
      state.position = p1;
      if (check) check_free_state(cfg, state, molecule_id, step);
      continue;
    }
    StepOutcome out = advance_molecule(state, displacement, cfg, molecule_id, step);
    result.bounces += static_cast<std::uint64_t>(out.bounces);
    if (out.hit) {
      result.hit = out.hit;
      return result;
    }
    state = out.state;
    if (check) check_free_state(cfg, state, molecule_id, step);
  }
  return result;
}

}  // namespace

SimulationResult run_simulation(const SimulationConfig& cfg, const RunOptions& options) {
  cfg.validate();
  const std::uint64_t n_steps = cfg.step_count();
  const std::uint64_t n = cfg.n_tx;
  const unsigned workers =
      static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(options.workers, n)));

  std::vector<MoleculeOutcome> outcomes(n);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::uint64_t> failed_at(workers, n);

  // Molecules are interleaved across workers; each one owns its own stream.
  auto work = [&](unsigned w) {
    for (std::uint64_t id = w; id < n; id += workers) {
      try {
        outcomes[id] = run_molecule(cfg, id, n_steps, options.check_invariants);
      } catch (...) {
        errors[w] = std::current_exception();
        failed_at[w] = id;
        return;
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  // Report the lowest failing molecule so the error is schedule independent.
  const auto first = std::min_element(failed_at.begin(), failed_at.end());
  if (*first < n) std::rethrow_exception(errors[static_cast<std::size_t>(first - failed_at.begin())]);

  SimulationResult result;
  result.config = cfg;
  std::vector<std::uint64_t> per_step_full(n_steps, 0);
  std::vector<std::uint64_t> per_step_region(n_steps, 0);
  for (const auto& outcome : outcomes) {
    result.total_bounces += outcome.bounces;
    if (!outcome.hit) continue;
    const HitRecord& hit = *outcome.hit;
    ++per_step_full[hit.step];
    if (hit.in_region) ++per_step_region[hit.step];
    result.hits.push_back(hit);
  }

  result.cumulative.resize(n_steps);
  std::uint64_t full = 0;
  std::uint64_t region = 0;
  for (std::uint64_t k = 0; k < n_steps; ++k) {
    full += per_step_full[k];
    region += per_step_region[k];
    result.cumulative[k] = {static_cast<double>(k + 1) * cfg.dt, full, region};
  }
  return result;
}

namespace {

const CumulativePoint* point_at(const SimulationResult& result, double t) {
  const auto& series = result.cumulative;
  // Step times are (k + 1) * dt; absorb rounding when t is meant to be a step boundary.
  const double limit = t + 1e-6 * result.config.dt;
  auto it = std::upper_bound(series.begin(), series.end(), limit,
                             [](double value, const CumulativePoint& p) { return value < p.time; });
  if (it == series.begin()) return nullptr;
  return &*std::prev(it);
}

}  // namespace

std::uint64_t count_hits_in_region(const SimulationResult& result, double t) {
  const CumulativePoint* p = point_at(result, t);
  return p ? p->region : 0;
}

std::uint64_t count_hits_full(const SimulationResult& result, double t) {
  const CumulativePoint* p = point_at(result, t);
  return p ? p->full : 0;
}

}  // namespace mcvd
