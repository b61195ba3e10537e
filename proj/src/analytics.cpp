#include "mcvd/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "mcvd/errors.hpp"

namespace mcvd {

namespace {

// Hit times are multiples of dt; the slack keeps t = k * dt inclusive.
bool at_or_before(double time, double t) { return time <= t * (1.0 + 1e-12) + 1e-15; }

}  // namespace

AngularHistogram angular_histogram_from_angles(std::span<const double> thetas, int n_slices) {
  if (n_slices < 2) throw ConfigError("angular histogram needs at least 2 slices");
  if (thetas.empty()) throw EmptySample("angular histogram of an empty hit set");
  AngularHistogram hist;
  hist.n_slices = n_slices;
  hist.counts.assign(static_cast<std::size_t>(n_slices), 0);
  const double width = kTwoPi / n_slices;
  for (double theta : thetas) {
    auto k = static_cast<int>(std::floor(theta / width));
    k = std::clamp(k, 0, n_slices - 1);
    // floor can land one slice off when theta sits on a slice edge
    if (theta < k * width && k > 0) --k;
    if (k + 1 < n_slices && theta >= (k + 1) * width) ++k;
    ++hist.counts[static_cast<std::size_t>(k)];
  }
  hist.total = thetas.size();
  hist.densities.resize(hist.counts.size());
  for (std::size_t k = 0; k < hist.counts.size(); ++k)
    hist.densities[k] = static_cast<double>(hist.counts[k]) / static_cast<double>(hist.total);
  return hist;
}

AngularHistogram angular_histogram(std::span<const HitRecord> hits, int n_slices) {
  std::vector<double> thetas;
  thetas.reserve(hits.size());
  for (const auto& h : hits) thetas.push_back(h.theta);
  return angular_histogram_from_angles(thetas, n_slices);
}

AngularStats angular_stats(const AngularHistogram& hist) {
  AngularStats stats;
  const double n = hist.n_slices;
  // Densities partition unity, so the mean is exactly 1 / n.
  stats.mean = 1.0 / n;
  double ss = 0.0;
  for (double p : hist.densities) ss += (p - stats.mean) * (p - stats.mean);
  stats.std = std::sqrt(ss / n);
  stats.cov = stats.std / stats.mean;
  return stats;
}

double hitting_ratio(std::span<const HitRecord> hits, double r_a, double rv, double t) {
  if (r_a < 0.0 || r_a > rv) throw ConfigError("hitting ratio requires 0 <= r_a <= rv");
  std::uint64_t total = 0;
  std::uint64_t inner = 0;
  for (const auto& h : hits) {
    if (!at_or_before(h.time, t)) continue;
    ++total;
    if (h.r <= r_a) ++inner;
  }
  if (total == 0) throw EmptySample("no hits at or before the requested time");
  return static_cast<double>(inner) / static_cast<double>(total);
}

double ks_coefficient(double alpha) {
  if (alpha == 0.05) return 1.358;
  if (alpha == 0.01) return 1.628;
  throw ConfigError("K-S significance level must be 0.01 or 0.05");
}

double ks_statistic_disk(std::vector<double> radii, double rv) {
  if (radii.empty()) throw EmptySample("K-S statistic of an empty sample");
  std::stable_sort(radii.begin(), radii.end());
  const double n = static_cast<double>(radii.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double u = std::clamp(radii[i] / rv, 0.0, 1.0);
    const double cdf = u * u;
    const double above = static_cast<double>(i + 1) / n - cdf;
    const double below = cdf - static_cast<double>(i) / n;
    worst = std::max({worst, above, below});
  }
  return worst;
}

KsResult ks_uniform_disk(std::vector<double> radii, double rv, double alpha) {
  KsResult result;
  result.alpha = alpha;
  const double c = ks_coefficient(alpha);
  if (radii.empty()) throw EmptySample("K-S test of an empty sample");
  if (radii.size() < kKsMinSamples) {
    throw TooFewSamples("K-S test needs at least " + std::to_string(kKsMinSamples) +
                        " samples, got " + std::to_string(radii.size()));
  }
  result.n = radii.size();
  result.statistic = ks_statistic_disk(std::move(radii), rv);
  result.critical = c / std::sqrt(static_cast<double>(result.n));
  result.pass = result.statistic < result.critical;
  return result;
}

KsResult ks_radial(std::span<const HitRecord> hits, double rv, double t, double alpha) {
  std::vector<double> radii;
  for (const auto& h : hits)
    if (at_or_before(h.time, t)) radii.push_back(h.r);
  return ks_uniform_disk(std::move(radii), rv, alpha);
}

double peak_time(double distance, double diffusion) {
  return distance * distance / (6.0 * diffusion);
}

std::optional<double> reference_threshold(double peak_multiple, double alpha) {
  struct Row {
    double multiple, at_01, at_05;
  };
  static constexpr Row kRows[] = {
      {1.0, 2.00, 2.40}, {2.0, 1.92, 2.00}, {3.0, 1.88, 1.98}, {5.0, 1.82, 1.90}};
  for (const auto& row : kRows) {
    if (row.multiple != peak_multiple) continue;
    if (alpha == 0.01) return row.at_01;
    if (alpha == 0.05) return row.at_05;
  }
  return std::nullopt;
}

const CellTest* SweepCell::find(double peak_multiple, double alpha) const {
  for (const auto& t : tests)
    if (t.peak_multiple == peak_multiple && t.alpha == alpha) return &t;
  return nullptr;
}

SweepCell evaluate_cell(const SimulationResult& result, std::span<const double> peak_multiples,
                        std::span<const double> alphas) {
  const auto& cfg = result.config;
  SweepCell cell;
  cell.diffusion = cfg.diffusion;
  cell.rv = cfg.rv;
  cell.distance = cfg.distance;
  cell.seed = cfg.seed;
  cell.ratio = cfg.distance / cfg.rv;
  cell.peak_time = peak_time(cfg.distance, cfg.diffusion);
  for (double m : peak_multiples) {
    for (double alpha : alphas) {
      CellTest test;
      test.peak_multiple = m;
      test.alpha = alpha;
      try {
        test.ks = ks_radial(result.hits, cfg.rv, m * cell.peak_time, alpha);
      } catch (const EmptySample& e) {
        test.error = e.what();
      } catch (const TooFewSamples& e) {
        test.error = e.what();
      }
      cell.tests.push_back(std::move(test));
    }
  }
  return cell;
}

std::vector<ThresholdEntry> summarize_thresholds(std::span<const SweepCell> cells,
                                                 std::span<const double> peak_multiples,
                                                 std::span<const double> alphas, double quorum) {
  auto key = [](double v) { return std::llround(v * 1e6); };
  std::vector<ThresholdEntry> table;
  for (double m : peak_multiples) {
    for (double alpha : alphas) {
      // ratio -> (D, rv, d) -> (passes, runs)
      std::map<long long, std::map<std::tuple<long long, long long, long long>,
                                   std::pair<int, int>>> groups;
      std::map<long long, double> ratio_value;
      for (const auto& cell : cells) {
        const long long rk = key(cell.ratio);
        ratio_value[rk] = cell.ratio;
        auto& tally = groups[rk][{key(cell.diffusion), key(cell.rv), key(cell.distance)}];
        const CellTest* test = cell.find(m, alpha);
        tally.second += 1;
        if (cell.error.empty() && test && test->passed()) tally.first += 1;
      }
      ThresholdEntry entry;
      entry.peak_multiple = m;
      entry.alpha = alpha;
      // Walk ratios from the top down while every configuration passes.
      for (auto it = groups.rbegin(); it != groups.rend(); ++it) {
        bool ok = true;
        for (const auto& [config, tally] : it->second) {
          if (static_cast<double>(tally.first) < quorum * tally.second - 1e-9) ok = false;
        }
        if (!ok) {
          entry.bracket_fail = ratio_value[it->first];
          break;
        }
        entry.threshold = ratio_value[it->first];
      }
      table.push_back(entry);
    }
  }
  return table;
}

ThresholdTable threshold_sweep(const SweepGrid& grid, const CellObserver& observer) {
  if (grid.diffusions.empty() || grid.radii.empty() || grid.distances.empty() ||
      grid.alphas.empty() || grid.peak_multiples.empty() || grid.seeds.empty()) {
    throw ConfigError("threshold sweep needs non-empty grids");
  }
  for (double a : grid.alphas) ks_coefficient(a);
  const double max_multiple =
      *std::max_element(grid.peak_multiples.begin(), grid.peak_multiples.end());

  ThresholdTable table;
  for (double diffusion : grid.diffusions) {
    for (double rv : grid.radii) {
      for (double distance : grid.distances) {
        for (std::uint64_t seed : grid.seeds) {
          SimulationConfig cfg;
          cfg.diffusion = diffusion;
          cfg.rv = rv;
          cfg.distance = distance;
          cfg.dt = grid.dt;
          cfg.n_tx = grid.n_tx;
          cfg.strategy = grid.strategy;
          cfg.max_bounces = grid.max_bounces;
          cfg.region = FullDisk{};
          cfg.seed = seed;
          cfg.duration = max_multiple * peak_time(distance, diffusion);
          try {
            const SimulationResult result = run_simulation(cfg, {grid.workers, false});
            SweepCell cell = evaluate_cell(result, grid.peak_multiples, grid.alphas);
            if (observer) observer(result, cell);
            table.cells.push_back(std::move(cell));
          } catch (const std::exception& e) {
            SweepCell cell;
            cell.diffusion = diffusion;
            cell.rv = rv;
            cell.distance = distance;
            cell.seed = seed;
            cell.ratio = distance / rv;
            cell.peak_time = peak_time(distance, diffusion);
            cell.error = e.what();
            table.cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  table.thresholds =
      summarize_thresholds(table.cells, grid.peak_multiples, grid.alphas, grid.quorum);
  return table;
}

}  // namespace mcvd
