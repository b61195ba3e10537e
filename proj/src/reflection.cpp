#include "mcvd/reflection.hpp"

#include <cmath>
#include <sstream>

#include "mcvd/errors.hpp"

namespace mcvd {

std::string_view to_string(ReflectionStrategy strategy) {
  switch (strategy) {
    case ReflectionStrategy::Rollback:
      return "rollback";
    case ReflectionStrategy::PaperElastic:
      return "paper_elastic";
    case ReflectionStrategy::Specular:
      return "specular";
  }
  return "unknown";
}

std::optional<ReflectionStrategy> parse_strategy(std::string_view name) {
  if (name == "rollback") return ReflectionStrategy::Rollback;
  if (name == "paper_elastic" || name == "elastic") return ReflectionStrategy::PaperElastic;
  if (name == "specular") return ReflectionStrategy::Specular;
  return std::nullopt;
}

bool inside_vessel(const Vec3& p, double rv, PlanePoint center) {
  const double dx = p.x - center.x;
  const double dy = p.y - center.y;
  return dx * dx + dy * dy <= rv * rv;
}

std::optional<CollisionSolution> solve_wall_intersection(const Vec3& p0, const Vec3& p1, double rv,
                                                         PlanePoint center) {
  if (inside_vessel(p1, rv, center)) return std::nullopt;

  CollisionSolution sol;
  const double ux = p1.x - p0.x;
  const double uy = p1.y - p0.y;
  const double rx = p0.x - center.x;
  const double ry = p0.y - center.y;
  sol.a = ux * ux + uy * uy;
  sol.b = 2.0 * (ux * rx + uy * ry);
  sol.c = rx * rx + ry * ry - rv * rv;

  double disc = sol.b * sol.b - 4.0 * sol.a * sol.c;
  if (disc < 0.0) {
    // p0 sitting on the wall with a grazing step can round slightly negative
    if (disc >= -1e-12 * (sol.b * sol.b + std::fabs(4.0 * sol.a * sol.c))) {
      disc = 0.0;
    } else {
      std::ostringstream os;
      os.precision(17);
      os << "wall intersection has no real root (discriminant " << disc << ") for step ("
         << p0.x << "," << p0.y << ") -> (" << p1.x << "," << p1.y << ")";
      throw GeometryError(os.str());
    }
  }
  if (sol.a == 0.0) throw GeometryError("wall intersection requested for a zero-length step");

  // Cancellation-free roots.
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (sol.b + std::copysign(sq, sol.b));
  double r1 = q / sol.a;
  double r2 = q != 0.0 ? sol.c / q : r1;
  if (r1 > r2) std::swap(r1, r2);
  sol.roots = {r1, r2};
  sol.root_count = disc == 0.0 ? 1 : 2;

  // From a point inside (or on) the wall the exit is always the larger root;
  // the other root lies behind p0 or at p0 itself.
  sol.t_hit = std::min(r2, 1.0);
  sol.intersection = p0 + (p1 - p0) * sol.t_hit;
  return sol;
}

double printed_c_coefficient(const Vec3& p0, double rv, PlanePoint center) {
  const double x1 = p0.x, y1 = p0.y, x3 = center.x, y3 = center.y;
  return x3 * x3 + y3 * y3 + x1 * x1 + y1 * y1 - (x3 * x1 + y3 * y1) - rv * rv;
}

Vec3 reflect_once(ReflectionStrategy strategy, const Vec3& p0, const Vec3& p1,
                  const CollisionSolution& solution, double rv, PlanePoint center) {
  const Vec3& hit = solution.intersection;
  switch (strategy) {
    case ReflectionStrategy::Rollback:
      return p0;
    case ReflectionStrategy::PaperElastic:
      return {2.0 * hit.x - p1.x, 2.0 * hit.y - p1.y, p1.z};
    case ReflectionStrategy::Specular: {
      const double nx = (hit.x - center.x) / rv;
      const double ny = (hit.y - center.y) / rv;
      const double vx = p1.x - hit.x;
      const double vy = p1.y - hit.y;
      const double vn = vx * nx + vy * ny;
      return {hit.x + vx - 2.0 * vn * nx, hit.y + vy - 2.0 * vn * ny, p1.z};
    }
  }
  return p1;
}

namespace {

Vec3 reflect_single(ReflectionStrategy strategy, const Vec3& p0, const Vec3& p1, double rv,
                    PlanePoint center) {
  const auto sol = solve_wall_intersection(p0, p1, rv, center);
  if (!sol) return p1;
  return reflect_once(strategy, p0, p1, *sol, rv, center);
}

}  // namespace

Vec3 reflect_paper_elastic(const Vec3& p0, const Vec3& p1, double rv, PlanePoint center) {
  return reflect_single(ReflectionStrategy::PaperElastic, p0, p1, rv, center);
}

Vec3 reflect_specular(const Vec3& p0, const Vec3& p1, double rv, PlanePoint center) {
  return reflect_single(ReflectionStrategy::Specular, p0, p1, rv, center);
}

Vec3 reflect_rollback(const Vec3& p0, const Vec3& p1, double rv, PlanePoint center) {
  return inside_vessel(p1, rv, center) ? p1 : p0;
}

WallResolution resolve_wall(ReflectionStrategy strategy, const Vec3& p0, const Vec3& p1, double rv,
                            PlanePoint center, int max_bounces) {
  if (strategy == ReflectionStrategy::Rollback) {
    if (inside_vessel(p1, rv, center)) return {p1, 0};
    if (max_bounces < 1) throw MaxBouncesExceeded("rollback needed but max_bounces is 0");
    return {p0, 1};
  }
  Vec3 start = p0;
  Vec3 candidate = p1;
  int bounces = 0;
  while (!inside_vessel(candidate, rv, center)) {
    if (bounces >= max_bounces) {
      std::ostringstream os;
      os << "step still outside the vessel after " << max_bounces
         << " reflections; reduce dt or increase rv";
      throw MaxBouncesExceeded(os.str());
    }
    const auto sol = solve_wall_intersection(start, candidate, rv, center);
    const Vec3 next = reflect_once(strategy, start, candidate, *sol, rv, center);
    start = sol->intersection;
    candidate = next;
    ++bounces;
  }
  return {candidate, bounces};
}

}  // namespace mcvd
