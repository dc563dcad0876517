#pragma once

#include <array>
#include <vector>

namespace ffr {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class Region { Centre, Edge };

struct RegionBounds {
  Region region;
  double R_L;  // metres
  double R_U;  // metres
  bool empty() const { return R_L >= R_U; }
};

// Two-ring (19-cell) hexagonal layout with the usual equal-area circular-cell
// approximation. Index 0 is the tagged BS at the origin. The reuse-1 centre
// band sees all 18 neighbours; the reuse-3 edge band sees the six co-channel
// second-ring BSs {8, 10, 12, 14, 16, 18}.
class NetworkGeometry {
 public:
  // R_m / R_h for the circle that preserves the hexagon area: sqrt(3*sqrt(3)/(2*pi)).
  static double hex_to_circle_ratio();

  static NetworkGeometry from_hex_side(double R_h, double R_0m);
  static NetworkGeometry from_circle_radius(double R_m, double R_0m);

  double hex_side() const { return R_h_; }
  double circle_radius() const { return R_m_; }
  double min_distance() const { return R_0m_; }
  const std::array<Point, 19>& bs_positions() const { return bs_; }
  const std::vector<int>& interferers(Region band) const {
    return band == Region::Centre ? centre_ : edge_;
  }

  // Distance from a user at polar (d, theta) around the tagged BS to BS b.
  double interferer_distance(double d, double theta, int b) const;

  // Annulus bounds for a region at distance-threshold ratio omega = R_th/R_m.
  RegionBounds region_bounds(Region region, double omega) const;

 private:
  NetworkGeometry(double R_h, double R_0m);

  double R_h_;
  double R_m_;
  double R_0m_;
  std::array<Point, 19> bs_{};
  std::vector<int> centre_;
  std::vector<int> edge_;
};

}  // namespace ffr
