#pragma once
// Test-only reference computations, independent of the library code paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Bisection for a sign change of f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm <= 0.0) == (flo <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Radii of points drawn uniformly over a disk by rejection from the square.
inline std::vector<double> uniform_disk_radii(std::size_t n, double rv, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-rv, rv);
  std::vector<double> out;
  out.reserve(n);
  while (out.size() < n) {
    const double x = u(gen), y = u(gen);
    const double r = std::hypot(x, y);
    if (r <= rv) out.push_back(r);
  }
  return out;
}

/// sup_r |F_n(r) - (r/rv)^2| by direct counting, O(n^2); both one-sided
/// limits of the empirical CDF are checked at every sample point.
inline double brute_ks_disk(const std::vector<double>& radii, double rv) {
  const double n = static_cast<double>(radii.size());
  double worst = 0.0;
  for (double r : radii) {
    double below = 0, at_or_below = 0;
    for (double q : radii) {
      if (q < r) below += 1;
      if (q <= r) at_or_below += 1;
    }
    const double f = (r / rv) * (r / rv);
    worst = std::max({worst, std::fabs(at_or_below / n - f), std::fabs(below / n - f)});
  }
  return worst;
}

}  // namespace oracle
