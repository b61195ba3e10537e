#pragma once

#include <cmath>

namespace mcvd {

/// Position or displacement in micrometres.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(double k) const { return {x * k, y * k, z * k}; }
  constexpr bool operator==(const Vec3&) const = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

/// Centre of the vessel cross-section.
struct PlanePoint {
  double x = 0.0;
  double y = 0.0;
  constexpr bool operator==(const PlanePoint&) const = default;
};

}  // namespace mcvd
