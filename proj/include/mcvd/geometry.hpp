#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include "mcvd/rng.hpp"
#include "mcvd/vec3.hpp"

namespace mcvd {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angle of (x, y) about the vessel axis, normalized to [0, 2*pi).
double polar_angle(double x, double y);

/// Gaussian step parameters: each axis is N(0, 2 D dt).
struct GaussianStepParams {
  double diffusion = 0.0;  ///< D in um^2/s
  double dt = 0.0;         ///< seconds

  double variance() const { return 2.0 * diffusion * dt; }
  double sigma() const;
  bool valid() const { return diffusion > 0.0 && dt > 0.0; }
};

/// Draws one 3D displacement. Always consumes exactly three words from the
/// stream, one per axis, each mapped through the normal quantile function.
Vec3 sample_displacement(RandomStream& rng, const GaussianStepParams& params);

// Receiver shapes on the absorbing plane. All lengths in um, angles in radians.
struct FullDisk {
  bool operator==(const FullDisk&) const = default;
};
struct ConcentricDisk {
  double radius = 0.0;
  bool operator==(const ConcentricDisk&) const = default;
};
/// Annular sector: theta_lo <= theta <= theta_hi and r_lo <= r <= r_hi.
struct Sector {
  double theta_lo = 0.0;
  double theta_hi = kTwoPi;
  double r_lo = 0.0;
  double r_hi = 0.0;
  bool operator==(const Sector&) const = default;
};
struct OffsetDisk {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
  bool operator==(const OffsetDisk&) const = default;
};

using ReceiverRegion = std::variant<FullDisk, ConcentricDisk, Sector, OffsetDisk>;

/// Throws ConfigError if the region is not a subset of the disk of radius rv
/// or has zero area.
void validate_region(const ReceiverRegion& region, double rv);

/// Closed-region membership; points on a bound are inside.
bool region_contains(const ReceiverRegion& region, double x, double y);

double region_area(const ReceiverRegion& region, double rv);

std::string describe_region(const ReceiverRegion& region);

struct PlaneCrossing {
  double s = 0.0;  ///< fraction of the segment at which z reaches the plane
  Vec3 hit;
};

/// Crossing of the segment p0 -> p1 with the plane z = d. Requires p0.z < d.
std::optional<PlaneCrossing> segment_plane_crossing(const Vec3& p0, const Vec3& p1, double d);

}  // namespace mcvd
