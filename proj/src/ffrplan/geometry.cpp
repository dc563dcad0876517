#include "ffrplan/geometry.hpp"

#include <cmath>
#include <sstream>

#include "ffrplan/errors.hpp"

namespace ffr {

double NetworkGeometry::hex_to_circle_ratio() {
  return std::sqrt(3.0 * std::sqrt(3.0) / (2.0 * M_PI));
}

NetworkGeometry::NetworkGeometry(double R_h, double R_0m)
    : R_h_(R_h), R_m_(R_h * hex_to_circle_ratio()), R_0m_(R_0m) {
  if (!(R_h > 0.0)) throw ConfigError("geometry: hex side R_h must be > 0");
  if (!(R_0m > 0.0 && R_0m < R_m_)) {
    std::ostringstream os;
    os << "geometry: min distance R_0m must satisfy 0 < R_0m < R_m (got R_0m=" << R_0m
       << ", R_m=" << R_m_ << ")";
    throw ConfigError(os.str());
  }
  bs_[0] = {0.0, 0.0};
  // Ring 1: six BSs at the inter-site distance sqrt(3)*R_h, angles 0, 60, ... deg.
  const double d1 = std::sqrt(3.0) * R_h;
  for (int i = 0; i < 6; ++i) {
    const double ang = i * M_PI / 3.0;
    bs_[1 + i] = {d1 * std::cos(ang), d1 * std::sin(ang)};
  }
  // Ring 2 alternates: odd indices 7, 9, ..., 17 at 2*sqrt(3)*R_h, angles 0, 60, ... deg;
  // even indices 8, 10, ..., 18 at 3*R_h, angles 30, 90, ... deg.
  const double d2_odd = 2.0 * std::sqrt(3.0) * R_h;
  const double d2_even = 3.0 * R_h;
  for (int j = 0; j < 6; ++j) {
    const double ang_odd = j * M_PI / 3.0;
    const double ang_even = M_PI / 6.0 + j * M_PI / 3.0;
    bs_[7 + 2 * j] = {d2_odd * std::cos(ang_odd), d2_odd * std::sin(ang_odd)};
    bs_[8 + 2 * j] = {d2_even * std::cos(ang_even), d2_even * std::sin(ang_even)};
  }
  centre_.reserve(18);
  for (int b = 1; b <= 18; ++b) centre_.push_back(b);
  edge_ = {8, 10, 12, 14, 16, 18};
}

NetworkGeometry NetworkGeometry::from_hex_side(double R_h, double R_0m) {
  return NetworkGeometry(R_h, R_0m);
}

NetworkGeometry NetworkGeometry::from_circle_radius(double R_m, double R_0m) {
  if (!(R_m > 0.0)) throw ConfigError("geometry: circle radius R_m must be > 0");
  return NetworkGeometry(R_m / hex_to_circle_ratio(), R_0m);
}

double NetworkGeometry::interferer_distance(double d, double theta, int b) const {
  if (b < 1 || b > 18) {
    throw ConfigError("interferer_distance: BS index must be in 1..18 (0 is the tagged BS)");
  }
  if (d < 0.0) throw ConfigError("interferer_distance: distance must be >= 0");
  const Point& p = bs_[b];
  const double rho = std::hypot(p.x, p.y);
  const double phi = std::atan2(p.y, p.x);
  const double sq = d * d + rho * rho - 2.0 * d * rho * std::cos(theta - phi);
  return std::sqrt(std::max(sq, 0.0));
}

RegionBounds NetworkGeometry::region_bounds(Region region, double omega) const {
  const double lo = R_0m_ / R_m_;
  if (!(omega >= lo - 1e-12 && omega <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os << "region_bounds: omega=" << omega << " outside [R_0m/R_m, 1] = [" << lo << ", 1]";
    throw ConfigError(os.str());
  }
  const double R_th = std::min(omega, 1.0) * R_m_;
  if (region == Region::Centre) return {Region::Centre, R_0m_, R_th};
  return {Region::Edge, R_th, R_m_};
}

}  // namespace ffr
