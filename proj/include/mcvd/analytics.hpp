#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcvd/engine.hpp"

namespace mcvd {

inline constexpr int kDefaultSlices = 180;

struct AngularHistogram {
  int n_slices = kDefaultSlices;
  std::vector<std::uint64_t> counts;
  std::vector<double> densities;  ///< counts / total
  std::uint64_t total = 0;
};

struct AngularStats {
  double mean = 0.0;
  double std = 0.0;  ///< population deviation over slice densities
  double cov = 0.0;
};

/// Slice k covers theta in [2 pi k / n, 2 pi (k + 1) / n). Throws EmptySample.
AngularHistogram angular_histogram(std::span<const HitRecord> hits, int n_slices = kDefaultSlices);
AngularHistogram angular_histogram_from_angles(std::span<const double> thetas,
                                               int n_slices = kDefaultSlices);

AngularStats angular_stats(const AngularHistogram& hist);

/// Fraction of hits with time <= t whose radius is at most r_a.
double hitting_ratio(std::span<const HitRecord> hits, double r_a, double rv, double t);

struct KsResult {
  std::uint64_t n = 0;
  double statistic = 0.0;
  double alpha = 0.01;
  double critical = 0.0;
  bool pass = false;
};

inline constexpr std::uint64_t kKsMinSamples = 10;

/// Asymptotic coefficient c(alpha) for the critical value c / sqrt(n).
/// Supports alpha = 0.05 and 0.01; anything else is a ConfigError.
double ks_coefficient(double alpha);

/// Two-sided one-sample statistic against F(r) = (r / rv)^2, the radial CDF of
/// a uniform disk.
double ks_statistic_disk(std::vector<double> radii, double rv);

KsResult ks_uniform_disk(std::vector<double> radii, double rv, double alpha);

/// K-S test on the radii of hits with time <= t.
/// Throws EmptySample / TooFewSamples (fewer than 10 hits).
KsResult ks_radial(std::span<const HitRecord> hits, double rv, double t, double alpha);

/// Time of the maximum first-passage rate, d^2 / (6 D).
double peak_time(double distance, double diffusion);

/// Threshold ratios from the reference K-S table, keyed by peak multiple
/// (1, 2, 3, 5) and alpha. Returns nothing for other keys.
std::optional<double> reference_threshold(double peak_multiple, double alpha);

// ---------------------------------------------------------------------------
// d / rv threshold sweep

struct SweepGrid {
  std::vector<double> diffusions;
  std::vector<double> radii;
  std::vector<double> distances;
  std::vector<double> alphas{0.01, 0.05};
  std::vector<double> peak_multiples{1.0, 2.0, 3.0, 5.0};
  std::vector<std::uint64_t> seeds{1};

  std::uint64_t n_tx = 150'000;
  double dt = 1e-4;
  ReflectionStrategy strategy = ReflectionStrategy::PaperElastic;
  int max_bounces = kDefaultMaxBounces;
  /// A (D, rv, d) configuration passes when at least this fraction of its
  /// seeds pass.
  double quorum = 0.8;
  unsigned workers = 1;
};

struct CellTest {
  double peak_multiple = 0.0;
  double alpha = 0.0;
  std::optional<KsResult> ks;  ///< empty when the test could not run
  std::string error;

  bool passed() const { return ks && ks->pass; }
};

struct SweepCell {
  double diffusion = 0.0;
  double rv = 0.0;
  double distance = 0.0;
  std::uint64_t seed = 0;
  double ratio = 0.0;  ///< d / rv
  double peak_time = 0.0;
  std::string error;   ///< engine failure; all tests count as failed
  std::vector<CellTest> tests;

  const CellTest* find(double peak_multiple, double alpha) const;
};

struct ThresholdEntry {
  double peak_multiple = 0.0;
  double alpha = 0.0;
  /// Smallest grid ratio from which every larger grid ratio also passes.
  std::optional<double> threshold;
  /// Largest failing grid ratio below the threshold, if any.
  std::optional<double> bracket_fail;
};

struct ThresholdTable {
  std::vector<SweepCell> cells;
  std::vector<ThresholdEntry> thresholds;
};

/// K-S tests of one simulated cell at every (multiple, alpha) pair.
SweepCell evaluate_cell(const SimulationResult& result, std::span<const double> peak_multiples,
                        std::span<const double> alphas);

std::vector<ThresholdEntry> summarize_thresholds(std::span<const SweepCell> cells,
                                                 std::span<const double> peak_multiples,
                                                 std::span<const double> alphas, double quorum);

/// Called once per simulated cell, in grid order.
using CellObserver = std::function<void(const SimulationResult&, const SweepCell&)>;

/// Simulates every (D, rv, d, seed) cell for max(peak_multiples) peak times
/// and reports the pass/fail matrix with the derived thresholds. A cell that
/// fails to simulate is recorded and does not stop the sweep.
ThresholdTable threshold_sweep(const SweepGrid& grid, const CellObserver& observer = {});

}  // namespace mcvd
