#include "mcvd/experiment.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "mcvd/analytics.hpp"
#include "mcvd/channel.hpp"
#include "mcvd/errors.hpp"

namespace mcvd {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

ojson config_json(const SimulationConfig& cfg) {
  ojson j;
  j["D"] = cfg.diffusion;
  j["dt"] = cfg.dt;
  j["rv"] = cfg.rv;
  j["d"] = cfg.distance;
  j["d_over_rv"] = cfg.distance / cfg.rv;
  j["n_tx"] = cfg.n_tx;
  j["duration_s"] = cfg.duration;
  j["peak_time_s"] = peak_time(cfg.distance, cfg.diffusion);
  j["steps"] = cfg.step_count();
  j["strategy"] = std::string(to_string(cfg.strategy));
  j["region"] = describe_region(cfg.region);
  j["seed"] = cfg.seed;
  j["max_bounces"] = cfg.max_bounces;
  return j;
}

ojson ks_json(const KsResult& ks) {
  ojson j;
  j["n"] = ks.n;
  j["D_n"] = ks.statistic;
  j["critical"] = ks.critical;
  j["alpha"] = ks.alpha;
  j["pass"] = ks.pass;
  return j;
}

ojson angular_json(const AngularStats& s, int slices) {
  ojson j;
  j["slices"] = slices;
  j["mean"] = s.mean;
  j["std"] = s.std;
  j["cov"] = s.cov;
  return j;
}

ojson cell_tests_json(const SweepCell& cell) {
  ojson arr = ojson::array();
  for (const auto& t : cell.tests) {
    ojson j;
    j["peak_multiple"] = t.peak_multiple;
    j["time_s"] = t.peak_multiple * cell.peak_time;
    if (t.ks) {
      j["ks"] = ks_json(*t.ks);
    } else {
      j["ks"] = nullptr;
      j["error"] = t.error;
    }
    arr.push_back(j);
  }
  return arr;
}

ojson thresholds_json(const std::vector<ThresholdEntry>& entries) {
  ojson arr = ojson::array();
  for (const auto& e : entries) {
    ojson j;
    j["peak_multiple"] = e.peak_multiple;
    j["alpha"] = e.alpha;
    j["threshold_d_over_rv"] = e.threshold ? ojson(*e.threshold) : ojson(nullptr);
    j["bracket_fail_d_over_rv"] = e.bracket_fail ? ojson(*e.bracket_fail) : ojson(nullptr);
    const auto ref = reference_threshold(e.peak_multiple, e.alpha);
    j["reference_d_over_rv"] = ref ? ojson(*ref) : ojson(nullptr);
    arr.push_back(j);
  }
  return arr;
}

std::string cell_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "cell_%04zu", index);
  return buf;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

/// Peak multiples that fit inside the simulated duration.
std::vector<double> usable_multiples(const SimulationConfig& cfg, const std::vector<double>& wanted) {
  std::vector<double> out;
  const double tp = peak_time(cfg.distance, cfg.diffusion);
  for (double m : wanted)
    if (m * tp <= cfg.duration * (1.0 + 1e-9)) out.push_back(m);
  return out;
}

ojson analyze_cell(const ExperimentSpec& spec, const SimulationResult& result,
                   SweepCell* ks_cell_out) {
  const auto& cfg = result.config;
  ojson report;
  report["n_hits"] = result.hits.size();
  report["total_bounces"] = result.total_bounces;
  report["cum_hits_region"] = count_hits_in_region(result, cfg.duration);

  if (spec.analysis.angular) {
    if (result.hits.empty()) {
      report["angular"] = nullptr;
    } else {
      const auto hist = angular_histogram(result.hits, spec.analysis.slices);
      report["angular"] = angular_json(angular_stats(hist), spec.analysis.slices);
    }
  }
  if (spec.analysis.ks) {
    const auto multiples = usable_multiples(cfg, spec.analysis.peak_multiples);
    SweepCell cell = evaluate_cell(result, multiples, spec.analysis.alphas);
    report["ks"] = cell_tests_json(cell);
    if (ks_cell_out) *ks_cell_out = std::move(cell);
  }
  if (spec.analysis.channel) {
    const double tp = peak_time(cfg.distance, cfg.diffusion);
    std::vector<double> times;
    for (double m : {1.0, 2.0, 3.0, 4.0, 5.0})
      if (m * tp <= cfg.duration * (1.0 + 1e-9)) times.push_back(m * tp);
    if (times.empty()) times.push_back(cfg.duration);
    const auto curve = build_channel_curve(cfg, times, &result);
    ojson ch;
    ch["phi"] = curve.phi;
    ch["exact"] = curve.exact;
    ch["d_over_rv"] = curve.ratio;
    ch["required_d_over_rv"] = curve.required_ratio ? ojson(*curve.required_ratio) : ojson(nullptr);
    ch["within_validity"] = curve.within_validity;
    ojson points = ojson::array();
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
      ojson p;
      p["time_s"] = curve.times[i];
      p["analytic"] = curve.analytic[i];
      p["simulated"] = (*curve.simulated)[i];
      points.push_back(p);
    }
    ch["points"] = points;
    report["channel"] = ch;
  }
  return report;
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentSpec& spec, const ExperimentOptions& options) {
  validate_spec(spec);
  const fs::path root(spec.output_dir);
  ensure_directory(root);

  ExperimentOutcome outcome;
  std::vector<SweepCell> ks_cells;
  ojson cells_json = ojson::array();
  std::size_t failures = 0;

  const auto configs = spec.materialize();
  for (std::size_t index = 0; index < configs.size(); ++index) {
    const SimulationConfig& cfg = configs[index];
    CellSummary summary;
    summary.index = index;
    summary.directory = cell_dir_name(index);
    summary.config = cfg;
    const fs::path dir = root / summary.directory;
    ensure_directory(dir);

    FileMetadata meta = config_metadata(cfg);
    meta["experiment"] = spec.name;
    meta["cell"] = std::to_string(index);

    ojson report;
    report["experiment"] = spec.name;
    report["cell"] = index;
    report["seed"] = cfg.seed;
    report["config"] = config_json(cfg);
    const auto warnings = cfg.validate();
    report["warnings"] = warnings;

    if (options.log) {
      *options.log << "[" << spec.name << "] cell " << index + 1 << "/" << configs.size()
                   << ": D=" << cfg.diffusion << " rv=" << cfg.rv << " d=" << cfg.distance
                   << " region=" << describe_region(cfg.region) << " strategy="
                   << to_string(cfg.strategy) << " seed=" << cfg.seed << std::endl;
    }

    try {
      const SimulationResult result = run_simulation(cfg, {options.workers, false});
      summary.n_hits = result.hits.size();
      if (spec.analysis.write_hits) write_hits_csv(dir / "hits.csv", meta, result.hits);
      write_timeseries_csv(dir / "timeseries.csv", meta, result);
      SweepCell ks_cell;
      report["status"] = "ok";
      report["analysis"] = analyze_cell(spec, result, spec.analysis.ks ? &ks_cell : nullptr);
      if (spec.analysis.ks) ks_cells.push_back(std::move(ks_cell));
    } catch (const IoError&) {
      throw;
    } catch (const std::exception& e) {
      ++failures;
      summary.error = e.what();
      report["status"] = "failed";
      report["error"] = summary.error;
      if (spec.analysis.ks) {
        SweepCell failed;
        failed.diffusion = cfg.diffusion;
        failed.rv = cfg.rv;
        failed.distance = cfg.distance;
        failed.seed = cfg.seed;
        failed.ratio = cfg.distance / cfg.rv;
        failed.peak_time = peak_time(cfg.distance, cfg.diffusion);
        failed.error = summary.error;
        ks_cells.push_back(std::move(failed));
      }
    }
    write_text_file(dir / "report.json", report.dump(2) + "\n");

    ojson c;
    c["cell"] = index;
    c["directory"] = summary.directory;
    c["config"] = config_json(cfg);
    c["status"] = summary.error.empty() ? "ok" : "failed";
    c["n_hits"] = summary.n_hits;
    if (!summary.error.empty()) c["error"] = summary.error;
    cells_json.push_back(c);
    outcome.cells.push_back(std::move(summary));
  }

  ojson summary;
  summary["experiment"] = spec.name;
  summary["seeds"] = spec.seeds;
  summary["cells"] = cells_json;
  if (spec.analysis.ks && spec.is_sweep()) {
    auto thresholds = summarize_thresholds(ks_cells, spec.analysis.peak_multiples,
                                           spec.analysis.alphas, spec.analysis.quorum);
    summary["ks_quorum"] = spec.analysis.quorum;
    summary["thresholds"] = thresholds_json(thresholds);
    outcome.thresholds = std::move(thresholds);
  }
  write_text_file(root / "summary.json", summary.dump(2) + "\n");

  outcome.exit_code = (!configs.empty() && failures == configs.size()) ? kExitRuntime : kExitOk;
  return outcome;
}

std::string analyze_hits(const HitsFile& file, const AnalyzeRequest& request) {
  auto meta_number = [&](const char* key) -> std::optional<double> {
    auto it = file.meta.find(key);
    if (it == file.meta.end()) return std::nullopt;
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw ConfigError(std::string("hits file metadata '") + key + "' is not a number");
    }
  };
  const auto rv = request.rv ? request.rv : meta_number("rv");
  if (!rv || !(*rv > 0.0)) throw ConfigError("vessel radius unknown; pass --rv");

  std::vector<HitRecord> hits = file.hits;
  double cutoff = std::numeric_limits<double>::infinity();
  ojson report;
  report["source"] = file.meta;
  if (request.duration_peaks) {
    const auto d = meta_number("d");
    const auto diffusion = meta_number("D");
    if (!d || !diffusion) throw ConfigError("--duration-peaks needs D and d in the file header");
    cutoff = *request.duration_peaks * peak_time(*d, *diffusion);
    report["cutoff_s"] = cutoff;
  }
  std::erase_if(hits, [&](const HitRecord& h) { return h.time > cutoff * (1.0 + 1e-12); });
  report["rv"] = *rv;
  report["n_hits"] = hits.size();
  if (hits.empty()) throw EmptySample("no hits to analyze");

  report["angular"] =
      angular_json(angular_stats(angular_histogram(hits, request.slices)), request.slices);
  ojson hr;
  for (double frac : {0.25, 0.5, 0.75}) {
    ojson p;
    p["r_a"] = frac * *rv;
    p["hitting_ratio"] = hitting_ratio(hits, frac * *rv, *rv, cutoff);
    p["uniform_expectation"] = frac * frac;
    hr.push_back(p);
  }
  report["hitting_ratio"] = hr;
  ojson ks = ojson::array();
  for (double alpha : request.alphas) ks.push_back(ks_json(ks_radial(hits, *rv, cutoff, alpha)));
  report["ks"] = ks;
  return report.dump(2) + "\n";
}

}  // namespace mcvd
