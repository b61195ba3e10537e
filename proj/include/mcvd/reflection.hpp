#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "mcvd/vec3.hpp"

namespace mcvd {

/// How a step that leaves the vessel is turned back inside.
enum class ReflectionStrategy {
  /// Cancel the whole step; the molecule stays where it was.
  Rollback,
  /// Point reflection of the overshoot through the wall intersection:
  /// (x_f, y_f) = 2 (x, y) - (x2, y2), z unchanged.
  PaperElastic,
  /// Mirror reflection across the tangent line at the intersection.
  Specular,
};

std::string_view to_string(ReflectionStrategy strategy);
/// Accepts "rollback", "paper_elastic" (alias "elastic") and "specular".
std::optional<ReflectionStrategy> parse_strategy(std::string_view name);

/// Intersection of the in-plane segment p0 -> p1 with the vessel wall.
/// The line is p(t) = p0 + t (p1 - p0); a t^2 + b t + c = 0 on the wall.
struct CollisionSolution {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  std::array<double, 2> roots{};  ///< ascending
  int root_count = 0;
  double t_hit = 0.0;  ///< exit parameter in (0, 1]
  Vec3 intersection;   ///< on the wall, z interpolated along the segment
};

/// Points with x^2 + y^2 <= rv^2 (relative to center) are inside.
bool inside_vessel(const Vec3& p, double rv, PlanePoint center = {});

/// Returns nothing when p1 is still inside. Throws GeometryError when p1 is
/// outside but no real root exists, which only happens if p0 was corrupted.
std::optional<CollisionSolution> solve_wall_intersection(const Vec3& p0, const Vec3& p1, double rv,
                                                         PlanePoint center = {});

/// The constant coefficient exactly as printed in the reference derivation:
/// x3^2 + y3^2 + x1^2 + y1^2 - (x3 x1 + y3 y1) - rv^2. It matches the
/// expansion of (x1 - x3)^2 + (y1 - y3)^2 - rv^2 only for a centered vessel.
double printed_c_coefficient(const Vec3& p0, double rv, PlanePoint center);

/// Applies a single reflection for an already solved collision.
Vec3 reflect_once(ReflectionStrategy strategy, const Vec3& p0, const Vec3& p1,
                  const CollisionSolution& solution, double rv, PlanePoint center);

// Single-collision strategies. Each returns p1 unchanged when p1 is inside.
Vec3 reflect_paper_elastic(const Vec3& p0, const Vec3& p1, double rv, PlanePoint center = {});
Vec3 reflect_specular(const Vec3& p0, const Vec3& p1, double rv, PlanePoint center = {});
Vec3 reflect_rollback(const Vec3& p0, const Vec3& p1, double rv, PlanePoint center = {});

struct WallResolution {
  Vec3 position;
  int bounces = 0;
};

inline constexpr int kDefaultMaxBounces = 10000;

/// Reflects repeatedly until the candidate lies inside the vessel. Throws
/// MaxBouncesExceeded when max_bounces reflections are not enough.
WallResolution resolve_wall(ReflectionStrategy strategy, const Vec3& p0, const Vec3& p1, double rv,
                            PlanePoint center = {}, int max_bounces = kDefaultMaxBounces);

}  // namespace mcvd
