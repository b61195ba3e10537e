#include "mcvd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mcvd/analytics.hpp"
#include "mcvd/errors.hpp"

namespace mcvd {

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;  // 1 / sqrt(pi)

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (1*3*...*(2n+1)).
// All terms are positive, so there is no cancellation.
double erf_series(double x) {
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return 2.0 * kInvSqrtPi * std::exp(-x2) * sum;
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))) for x > 0.
double erfc_continued_fraction(double x) {
  constexpr double kTiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double ak = 0.5 * k;
    d = x + ak * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = x + ak / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return kInvSqrtPi * std::exp(-x * x) / f;
}

}  // namespace

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x < 2.0) return 1.0 - erf_series(x);
  if (x > 27.3) return 0.0;
  return erfc_continued_fraction(x);
}

double coverage_fraction(const ReceiverRegion& region, double rv) {
  return region_area(region, rv) / (std::numbers::pi * rv * rv);
}

double analytic_fhit(double t, double n_tx, double distance, double diffusion, double phi) {
  if (t <= 0.0) return 0.0;
  return n_tx * phi * erfc(distance / std::sqrt(4.0 * diffusion * t));
}

ChannelCurve build_channel_curve(const SimulationConfig& cfg, std::span<const double> times,
                                 const SimulationResult* result) {
  if (times.empty()) throw EmptySample("channel curve needs at least one time point");
  if (!std::is_sorted(times.begin(), times.end()))
    throw ConfigError("channel curve times must be ascending");
  if (result && times.back() > cfg.duration * (1.0 + 1e-12))
    throw ConfigError("channel curve times exceed the simulated duration");

  ChannelCurve curve;
  curve.config = cfg;
  curve.phi = coverage_fraction(cfg.region, cfg.rv);
  curve.times.assign(times.begin(), times.end());
  curve.analytic.reserve(times.size());
  for (double t : times) {
    curve.analytic.push_back(
        analytic_fhit(t, static_cast<double>(cfg.n_tx), cfg.distance, cfg.diffusion, curve.phi));
  }
  if (result) {
    std::vector<std::uint64_t> counts;
    counts.reserve(times.size());
    for (double t : times) counts.push_back(count_hits_in_region(*result, t));
    curve.simulated = std::move(counts);
  }

  curve.exact = std::holds_alternative<FullDisk>(cfg.region) || curve.phi == 1.0;
  curve.ratio = cfg.distance / cfg.rv;
  if (!curve.exact) {
    // Use the row of the largest tabulated horizon not beyond the curve's end.
    const double horizon = times.back() / peak_time(cfg.distance, cfg.diffusion);
    double row = 1.0;
    for (double m : {1.0, 2.0, 3.0, 5.0})
      if (horizon >= m * (1.0 - 1e-9)) row = m;
    curve.required_ratio = reference_threshold(row, 0.05);
    curve.within_validity = curve.ratio >= *curve.required_ratio;
  }
  return curve;
}

}  // namespace mcvd
