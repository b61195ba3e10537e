#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcvd/geometry.hpp"
#include "mcvd/reflection.hpp"
#include "mcvd/rng.hpp"
#include "mcvd/vec3.hpp"

namespace mcvd {

/// One experiment cell. Lengths in um, times in s, D in um^2/s.
/// The transmitter sits on the vessel axis at the origin and the absorbing
/// plane is z = distance.
struct SimulationConfig {
  double diffusion = 200.0;
  double dt = 1e-4;
  double rv = 3.0;
  double distance = 9.0;
  std::uint64_t n_tx = 1'500'000;
  double duration = 0.3375;
  ReflectionStrategy strategy = ReflectionStrategy::PaperElastic;
  ReceiverRegion region = FullDisk{};
  std::uint64_t seed = 1;
  int max_bounces = kDefaultMaxBounces;

  GaussianStepParams step_params() const { return {diffusion, dt}; }
  std::uint64_t step_count() const;

  /// Throws ConfigError on a violated invariant. Returns warnings, e.g. when
  /// the per-axis step deviation exceeds rv / 3.
  std::vector<std::string> validate() const;
};

enum class MoleculeStatus { Free, Absorbed };

struct MoleculeState {
  Vec3 position;
  MoleculeStatus status = MoleculeStatus::Free;
};

struct HitRecord {
  std::uint64_t molecule_id = 0;
  std::uint64_t step = 0;
  double time = 0.0;  ///< end of the absorbing step, (step + 1) * dt
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
  double theta = 0.0;
  bool in_region = false;

  bool operator==(const HitRecord&) const = default;
};

struct CumulativePoint {
  double time = 0.0;
  std::uint64_t full = 0;    ///< N^Rx(rv | t)
  std::uint64_t region = 0;  ///< hits inside the receiver region by t

  bool operator==(const CumulativePoint&) const = default;
};

struct SimulationResult {
  SimulationConfig config;
  std::vector<HitRecord> hits;  ///< ordered by molecule_id
  std::vector<CumulativePoint> cumulative;  ///< one point per step
  std::uint64_t total_bounces = 0;
};

struct StepOutcome {
  MoleculeState state;
  std::optional<HitRecord> hit;
  int bounces = 0;
};

/// Moves a free molecule by a given displacement. Wall and plane events are
/// handled in the order they occur along the step; the plane parameter is
/// taken from the unreflected z motion and the hit location is read from
/// the folded in-plane path. Throws MaxBouncesExceeded.
StepOutcome advance_molecule(const MoleculeState& state, const Vec3& displacement,
                             const SimulationConfig& cfg, std::uint64_t molecule_id,
                             std::uint64_t step);

/// advance_molecule with a displacement drawn from rng (three draws).
StepOutcome step_molecule(const MoleculeState& state, const SimulationConfig& cfg, RandomStream& rng,
                          std::uint64_t molecule_id, std::uint64_t step);

struct RunOptions {
  unsigned workers = 1;
  /// Verify after every step that free molecules are inside the vessel and
  /// before the plane. Slow; meant for small runs in tests.
  bool check_invariants = false;
};

/// Runs all molecules for step_count() steps. Output depends only on cfg,
/// never on the number of workers.
SimulationResult run_simulation(const SimulationConfig& cfg, const RunOptions& options = {});

/// Hits inside the receiver region with time <= t.
std::uint64_t count_hits_in_region(const SimulationResult& result, double t);

/// All hits (full cross-section) with time <= t.
std::uint64_t count_hits_full(const SimulationResult& result, double t);

}  // namespace mcvd
