#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcvd/engine.hpp"

namespace mcvd {

/// Receiver region as written in a config. With `relative` set, every length
/// is a fraction of the cell's vessel radius.
struct RegionSpec {
  ReceiverRegion region = FullDisk{};
  bool relative = false;

  ReceiverRegion materialize(double rv) const;
};

struct AnalysisSelection {
  bool angular = true;
  bool ks = true;
  bool channel = true;
  int slices = 180;
  std::vector<double> alphas{0.01, 0.05};
  std::vector<double> peak_multiples{1.0, 2.0, 3.0, 5.0};
  double quorum = 0.8;
  bool write_hits = true;
};

struct ExperimentSpec {
  std::string name = "experiment";
  SimulationConfig base;
  RegionSpec base_region;
  /// When set, each cell runs for this many of its own peak times.
  std::optional<double> duration_peaks = 5.0;

  std::vector<double> sweep_diffusion;
  std::vector<double> sweep_distance;
  std::vector<double> sweep_rv;
  std::vector<RegionSpec> sweep_regions;
  std::vector<ReflectionStrategy> sweep_strategies;

  AnalysisSelection analysis;
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = "mcvd_out";

  /// Cartesian product D x rv x d x region x strategy x seed, each validated.
  std::vector<SimulationConfig> materialize() const;
  bool is_sweep() const;
};

/// Parses a JSON experiment document. Omitted fields take the defaults
/// (dt = 0.1 ms, 1.5 million molecules, D = 200, rv = 3, d = 9, five peak
/// times, PaperElastic reflection, full disk). Throws ConfigError naming the
/// offending line or field.
ExperimentSpec parse_config(std::string_view text);

/// Built-in experiments: table3-{good,moderate,harsh}, fig4{a,b,c},
/// table4-sweep. Throws ConfigError for an unknown name.
ExperimentSpec preset(std::string_view name);

struct PresetInfo {
  std::string name;
  std::string description;
};
std::vector<PresetInfo> list_presets();

/// Validates the spec and every materialized cell.
void validate_spec(const ExperimentSpec& spec);

}  // namespace mcvd
