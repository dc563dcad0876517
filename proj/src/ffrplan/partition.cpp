#include "ffrplan/partition.hpp"

#include <cmath>
#include <sstream>

#include "ffrplan/errors.hpp"

namespace ffr {

FfrPartition FfrPartition::from_edge_rbs(double omega, int N_E, int N_b) {
  if (N_b < 1) throw ConfigError("partition: N_b must be >= 1");
  if (N_E < 0 || 3 * N_E > N_b) {
    std::ostringstream os;
    os << "partition: N_E must be in 0.." << N_b / 3 << " (got " << N_E << ")";
    throw ConfigError(os.str());
  }
  if (!(omega >= 0.0 && omega <= 1.0)) {
    throw ConfigError("partition: omega must be in [0, 1]");
  }
  FfrPartition p;
  p.omega = omega;
  p.N_b = N_b;
  p.N_E = N_E;
  p.N_C = N_b - 3 * N_E;
  p.zeta = static_cast<double>(p.N_C) / N_b;
  return p;
}

FfrPartition FfrPartition::from_zeta(double omega, double zeta, int N_b) {
  if (N_b < 1) throw ConfigError("partition: N_b must be >= 1");
  const double exact = nearest_zeta(zeta, N_b);
  if (std::abs(exact - zeta) > 1e-9) {
    std::ostringstream os;
    os.precision(10);
    os << "partition: zeta=" << zeta << " is not in S_zeta for N_b=" << N_b
       << "; nearest admissible value is " << exact;
    throw ConfigError(os.str());
  }
  const int N_E = static_cast<int>(std::lround(N_b * (1.0 - exact) / 3.0));
  return from_edge_rbs(omega, N_E, N_b);
}

std::vector<double> zeta_set(int N_b) {
  if (N_b < 1) throw ConfigError("zeta_set: N_b must be >= 1");
  std::vector<double> out;
  for (int N_E = N_b / 3; N_E >= 0; --N_E) {
    out.push_back(static_cast<double>(N_b - 3 * N_E) / N_b);
  }
  return out;
}

double nearest_zeta(double zeta, int N_b) {
  double best = 1.0;
  double best_gap = std::abs(1.0 - zeta);
  for (double z : zeta_set(N_b)) {
    const double gap = std::abs(z - zeta);
    if (gap < best_gap) {
      best = z;
      best_gap = gap;
    }
  }
  return best;
}

}  // namespace ffr
