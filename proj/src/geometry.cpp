#include "mcvd/geometry.hpp"

#include <cmath>
#include <sstream>

#include "mcvd/errors.hpp"

namespace mcvd {

double polar_angle(double x, double y) {
  double theta = std::atan2(y, x);
  if (theta < 0.0) theta += kTwoPi;
  // atan2 of a tiny negative y can round up to exactly 2*pi
  if (theta >= kTwoPi) theta = 0.0;
  return theta;
}

double GaussianStepParams::sigma() const { return std::sqrt(variance()); }

Vec3 sample_displacement(RandomStream& rng, const GaussianStepParams& params) {
  const double sigma = params.sigma();
  const double dx = inverse_normal_cdf(uniform_open01(rng));
  const double dy = inverse_normal_cdf(uniform_open01(rng));
  const double dz = inverse_normal_cdf(uniform_open01(rng));
  return {sigma * dx, sigma * dy, sigma * dz};
}

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool finite_all(std::initializer_list<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace

void validate_region(const ReceiverRegion& region, double rv) {
  require(rv > 0.0 && std::isfinite(rv), "region: vessel radius rv must be positive");
  std::visit(
      Overloaded{
          [](const FullDisk&) {},
          [rv](const ConcentricDisk& r) {
            require(std::isfinite(r.radius) && r.radius > 0.0,
                    "region.concentric: radius must be positive");
            require(r.radius <= rv, "region.concentric: radius must not exceed rv");
          },
          [rv](const Sector& r) {
            require(finite_all({r.theta_lo, r.theta_hi, r.r_lo, r.r_hi}),
                    "region.sector: parameters must be finite");
            require(0.0 <= r.theta_lo && r.theta_lo < r.theta_hi && r.theta_hi <= kTwoPi,
                    "region.sector: require 0 <= theta_lo < theta_hi <= 2*pi");
            require(0.0 <= r.r_lo && r.r_lo < r.r_hi && r.r_hi <= rv,
                    "region.sector: require 0 <= r_lo < r_hi <= rv");
          },
          [rv](const OffsetDisk& r) {
            require(finite_all({r.cx, r.cy, r.radius}), "region.offset: parameters must be finite");
            require(r.radius > 0.0, "region.offset: radius must be positive");
            require(std::hypot(r.cx, r.cy) + r.radius <= rv,
                    "region.offset: disk must lie inside the cross-section");
          },
      },
      region);
}

bool region_contains(const ReceiverRegion& region, double x, double y) {
  return std::visit(
      Overloaded{
          [](const FullDisk&) { return true; },
          [x, y](const ConcentricDisk& r) { return x * x + y * y <= r.radius * r.radius; },
          [x, y](const Sector& r) {
            const double rr = x * x + y * y;
            if (rr < r.r_lo * r.r_lo || rr > r.r_hi * r.r_hi) return false;
            const double theta = polar_angle(x, y);
            // theta_hi == 2*pi closes the sector at the positive x axis
            if (r.theta_hi >= kTwoPi && theta == 0.0) return true;
            return theta >= r.theta_lo && theta <= r.theta_hi;
          },
          [x, y](const OffsetDisk& r) {
            const double dx = x - r.cx;
            const double dy = y - r.cy;
            return dx * dx + dy * dy <= r.radius * r.radius;
          },
      },
      region);
}

double region_area(const ReceiverRegion& region, double rv) {
  return std::visit(
      Overloaded{
          [rv](const FullDisk&) { return std::numbers::pi * rv * rv; },
          [](const ConcentricDisk& r) { return std::numbers::pi * r.radius * r.radius; },
          [](const Sector& r) {
            return 0.5 * (r.theta_hi - r.theta_lo) * (r.r_hi * r.r_hi - r.r_lo * r.r_lo);
          },
          [](const OffsetDisk& r) { return std::numbers::pi * r.radius * r.radius; },
      },
      region);
}

std::string describe_region(const ReceiverRegion& region) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const FullDisk&) { os << "full"; },
                 [&](const ConcentricDisk& r) { os << "concentric(r=" << r.radius << ")"; },
                 [&](const Sector& r) {
                   os << "sector(theta=[" << r.theta_lo << "," << r.theta_hi << "],r=[" << r.r_lo
                      << "," << r.r_hi << "])";
                 },
                 [&](const OffsetDisk& r) {
                   os << "offset(c=(" << r.cx << "," << r.cy << "),r=" << r.radius << ")";
                 },
             },
             region);
  return os.str();
}

std::optional<PlaneCrossing> segment_plane_crossing(const Vec3& p0, const Vec3& p1, double d) {
  if (p1.z < d) return std::nullopt;
  const double s = (d - p0.z) / (p1.z - p0.z);
  Vec3 hit{p0.x + s * (p1.x - p0.x), p0.y + s * (p1.y - p0.y), d};
  return PlaneCrossing{s, hit};
}

}  // namespace mcvd
