#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mcvd/analytics.hpp"
#include "mcvd/config.hpp"
#include "mcvd/csv_io.hpp"

namespace mcvd {

/// CLI exit codes.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2, kExitIo = 3 };

struct ExperimentOptions {
  unsigned workers = 1;
  /// Progress lines go here when set (not into any output file).
  std::ostream* log = nullptr;
};

struct CellSummary {
  std::size_t index = 0;
  std::string directory;
  SimulationConfig config;
  std::uint64_t n_hits = 0;
  std::string error;
};

struct ExperimentOutcome {
  int exit_code = kExitOk;
  std::vector<CellSummary> cells;
  std::optional<std::vector<ThresholdEntry>> thresholds;
};

/// Runs every cell of the spec and writes, under spec.output_dir:
///   cell_NNNN/hits.csv, cell_NNNN/timeseries.csv, cell_NNNN/report.json
///   summary.json
/// Output bytes depend only on the spec, never on the worker count. Engine
/// failures are recorded per cell; the exit code is kExitRuntime only when
/// every cell failed. Throws IoError when files cannot be written.
ExperimentOutcome run_experiment(const ExperimentSpec& spec, const ExperimentOptions& options = {});

struct AnalyzeRequest {
  std::optional<double> rv;              ///< defaults to the file's echoed rv
  std::optional<double> duration_peaks;  ///< cut-off in peak times; all hits when empty
  int slices = 180;
  std::vector<double> alphas{0.01, 0.05};
};

/// Re-runs the hit-location analytics on a hits file; returns a JSON report.
std::string analyze_hits(const HitsFile& file, const AnalyzeRequest& request);

}  // namespace mcvd
