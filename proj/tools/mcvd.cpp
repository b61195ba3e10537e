// Command line front end: simulate, sweep, analyze, presets.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mcvd/analytics.hpp"
#include "mcvd/config.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::optional<double> duration_peaks;
  std::optional<std::uint64_t> n_tx;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", flags.preset_name, "Built-in experiment (see 'presets')");
  cmd->add_option("--seed", flags.seed, "Override the seed list with a single seed");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--workers", flags.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--duration-peaks", flags.duration_peaks, "Duration in peak times")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--n-tx", flags.n_tx, "Override the number of released molecules");
  cmd->add_flag("-q,--quiet", flags.quiet, "No progress output");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mcvd::IoError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

mcvd::ExperimentSpec load_spec(const CommonFlags& flags) {
  if (!flags.config_path.empty() && !flags.preset_name.empty())
    throw mcvd::ConfigError("give either --config or --preset, not both");
  mcvd::ExperimentSpec spec;
  if (!flags.config_path.empty()) {
    spec = mcvd::parse_config(read_file(flags.config_path));
  } else if (!flags.preset_name.empty()) {
    spec = mcvd::preset(flags.preset_name);
  } else {
    spec = mcvd::parse_config("{}");
  }
  if (flags.seed) spec.seeds = {*flags.seed};
  if (!flags.out.empty()) spec.output_dir = flags.out;
  if (flags.duration_peaks) spec.duration_peaks = *flags.duration_peaks;
  if (flags.n_tx) spec.base.n_tx = *flags.n_tx;
  if (spec.duration_peaks)
    spec.base.duration =
        *spec.duration_peaks * mcvd::peak_time(spec.base.distance, spec.base.diffusion);
  mcvd::validate_spec(spec);
  return spec;
}

int run(const CommonFlags& flags, bool single_cell) {
  const auto spec = load_spec(flags);
  if (single_cell && spec.materialize().size() != 1) {
    throw mcvd::ConfigError("'simulate' runs exactly one cell but this experiment has " +
                            std::to_string(spec.materialize().size()) + "; use 'sweep'");
  }
  mcvd::ExperimentOptions options;
  options.workers = flags.workers;
  options.log = flags.quiet ? nullptr : &std::cerr;
  const auto outcome = mcvd::run_experiment(spec, options);
  for (const auto& cell : outcome.cells) {
    if (!cell.error.empty()) std::cerr << "cell " << cell.index << " failed: " << cell.error << "\n";
  }
  if (outcome.thresholds && !flags.quiet) {
    std::cout << "peak_multiple,alpha,threshold_d_over_rv,bracket_fail,reference\n";
    for (const auto& e : *outcome.thresholds) {
      const auto ref = mcvd::reference_threshold(e.peak_multiple, e.alpha);
      std::cout << e.peak_multiple << "," << e.alpha << ","
                << (e.threshold ? std::to_string(*e.threshold) : "none") << ","
                << (e.bracket_fail ? std::to_string(*e.bracket_fail) : "none") << ","
                << (ref ? std::to_string(*ref) : "") << "\n";
    }
  }
  if (!flags.quiet) std::cerr << "wrote " << spec.output_dir << "/summary.json\n";
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo diffusion channel simulator for reflective cylindrical vessels"};
  app.require_subcommand(1);

  CommonFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Run a single experiment cell");
  add_common(simulate, sim_flags);

  CommonFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Run every cell of an experiment grid");
  add_common(sweep, sweep_flags);

  std::string hits_path;
  mcvd::AnalyzeRequest request;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Re-run analytics on an existing hits file");
  analyze->add_option("hits", hits_path, "hits.csv written by simulate or sweep")->required();
  analyze->add_option("--rv", request.rv, "Vessel radius (defaults to the file header)");
  analyze->add_option("--duration-peaks", request.duration_peaks, "Only hits up to this many peak times")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--slices", request.slices, "Angular slices")->check(CLI::Range(2, 1000000));
  analyze->add_option("--out", analyze_out, "Write the report here instead of stdout");

  auto* presets = app.add_subcommand("presets", "List built-in experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mcvd::kExitOk : mcvd::kExitConfig;
  }

  try {
    if (*simulate) return run(sim_flags, true);
    if (*sweep) return run(sweep_flags, false);
    if (*analyze) {
      const auto file = mcvd::read_hits_csv(hits_path);
      const std::string report = mcvd::analyze_hits(file, request);
      if (analyze_out.empty()) {
        std::cout << report;
      } else {
        mcvd::write_text_file(analyze_out, report);
      }
      return mcvd::kExitOk;
    }
    if (*presets) {
      for (const auto& p : mcvd::list_presets()) std::cout << p.name << "\t" << p.description << "\n";
      return mcvd::kExitOk;
    }
  } catch (const mcvd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return mcvd::kExitConfig;
  } catch (const mcvd::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return mcvd::kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mcvd::kExitRuntime;
  }
  return mcvd::kExitOk;
}
