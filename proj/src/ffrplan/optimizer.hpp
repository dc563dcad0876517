#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ffrplan/analysis.hpp"

namespace ffr {

// Everything a design solver needs to evaluate the objective tau(omega, zeta).
struct DesignContext {
  RadioParams radio = RadioParams::lte_default();
  NetworkGeometry geometry = NetworkGeometry::from_circle_radius(500.0, 35.0);
  LoadModel load;
  Scheduler scheduler = Scheduler::PF;
  RateModel rate_model = CraParams{};
  int omega_grid_points = 50;
  int angle_nodes = 1;
  int distance_nodes = 64;

  double omega_lo() const { return geometry.min_distance() / geometry.circle_radius(); }
  ThroughputReport evaluate(const FfrPartition& part) const;
};

struct DesignSolution {
  std::string design;             // "fxd" | "apd" | "qoscd"
  double omega_star = 1.0;
  double zeta_star = 1.0;
  double tau_star = 0.0;
  bool feasible = true;           // QoScD: some grid pair satisfied the constraint
  bool plateau = false;           // FxD: objective flat in omega (or edge weight zero)
  double constraint_slack = 0.0;  // QoScD: tau_u^E - q * tau_u^C at the optimum
  std::optional<double> q;        // QoScD only
  ThroughputReport report;        // full throughput report at (omega*, zeta*)
};

// Fixed-allocation design: zeta is pinned to zeta_o (must belong to S_zeta);
// omega is maximised over [R_0m/R_m, 1] with a coarse grid followed by
// golden-section refinement to omega_tol. Smallest omega wins ties.
DesignSolution solve_fxd(const DesignContext& ctx, double zeta_o, double omega_tol = 1e-3);

// Area-proportional design: omega = sqrt(zeta), exhaustive over S_zeta.
DesignSolution solve_apd(const DesignContext& ctx);

// QoS-constrained design: joint grid max over S_zeta x omega grid subject to
// tau_u^E >= q * tau_u^C. Infeasibility is reported, never thrown.
DesignSolution solve_qoscd(const DesignContext& ctx, double q);

// Appends one solution row to a CSV ledger, creating the header when the file
// does not exist yet. Columns:
// design,scheduler,rate_model,M,q,omega_star,zeta_star,tau_star,feasible
void append_ledger(const std::string& path, const DesignContext& ctx, const DesignSolution& sol);

}  // namespace ffr
