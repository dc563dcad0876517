#pragma once

#include <vector>

namespace ffr {

// FFR spectrum split: N_C reuse-1 centre RBs and 3*N_E reuse-3 edge RBs, of
// which N_E belong to the tagged cell. zeta = N_C/N_b is restricted to the
// discrete set S_zeta = {(N_b - 3*N_E)/N_b : N_E = floor(N_b/3)..0}.
struct FfrPartition {
  double omega;  // distance threshold ratio R_th/R_m
  double zeta;   // spectrum allocation factor N_C/N_b
  int N_b;
  int N_C;
  int N_E;

  static FfrPartition from_edge_rbs(double omega, int N_E, int N_b);
  // zeta must match a member of S_zeta within 1e-9; otherwise a ConfigError
  // naming the nearest admissible value is thrown.
  static FfrPartition from_zeta(double omega, double zeta, int N_b);
};

// S_zeta in ascending order.
std::vector<double> zeta_set(int N_b);

// Closest member of S_zeta to the requested value.
double nearest_zeta(double zeta, int N_b);

}  // namespace ffr
