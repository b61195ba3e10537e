#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mcvd/engine.hpp"

namespace mcvd {

/// Complementary error function. Power series of erf for |x| < 2 and a
/// continued fraction (modified Lentz) for |x| >= 2; relative error below
/// 1e-13 on [-10, 10].
double erfc(double x);

/// Phi = A(region) / (pi rv^2).
double coverage_fraction(const ReceiverRegion& region, double rv);

/// Expected cumulative hits n_tx * phi * erfc(d / sqrt(4 D t)); 0 for t <= 0.
double analytic_fhit(double t, double n_tx, double distance, double diffusion, double phi);

struct ChannelCurve {
  SimulationConfig config;
  double phi = 1.0;
  std::vector<double> times;
  std::vector<double> analytic;
  std::optional<std::vector<std::uint64_t>> simulated;  ///< in-region counts

  // Validity annotation. The full-disk curve is exact; partial receivers rely
  // on uniform hitting locations, which holds above the reference threshold.
  bool exact = true;
  double ratio = 0.0;                      ///< d / rv
  std::optional<double> required_ratio;    ///< reference threshold for the horizon
  bool within_validity = true;
};

/// Throws EmptySample when `times` is empty and ConfigError when it is not
/// ascending or (with a result) exceeds the simulated duration.
ChannelCurve build_channel_curve(const SimulationConfig& cfg, std::span<const double> times,
                                 const SimulationResult* result = nullptr);

}  // namespace mcvd
