#include "ffrplan/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "ffrplan/errors.hpp"

namespace ffr {

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

struct Candidate {
  double omega = 0.0;
  ThroughputReport report;
};

// Smallest omega wins ties, regardless of evaluation order.
void keep_if_better(Candidate& best, bool& have, const Candidate& next) {
  const bool better =
      !have || next.report.tau_bpshz_rb > best.report.tau_bpshz_rb ||
      (next.report.tau_bpshz_rb == best.report.tau_bpshz_rb && next.omega < best.omega);
  if (better) {
    best = next;
    have = true;
  }
}

std::vector<double> omega_grid(double lo, int points) {
  if (points < 2) throw ConfigError("optimizer: omega grid needs at least 2 points");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = std::min(1.0, lo + (1.0 - lo) * i / (points - 1));
  return grid;
}

}  // namespace

ThroughputReport DesignContext::evaluate(const FfrPartition& part) const {
  return cell_throughput(load, part, scheduler, rate_model, radio, geometry, angle_nodes,
                         distance_nodes);
}

DesignSolution solve_fxd(const DesignContext& ctx, double zeta_o, double omega_tol) {
  // from_zeta validates membership in S_zeta and fixes N_C/N_E once.
  const FfrPartition probe = FfrPartition::from_zeta(1.0, zeta_o, ctx.radio.N_b);
  auto eval = [&](double omega) {
    return Candidate{omega, ctx.evaluate(FfrPartition::from_edge_rbs(omega, probe.N_E, ctx.radio.N_b))};
  };

  const double lo = ctx.omega_lo();
  const std::vector<double> grid = omega_grid(lo, ctx.omega_grid_points);
  std::vector<Candidate> evals;
  evals.reserve(grid.size());
  Candidate best;
  bool have = false;
  size_t best_i = 0;
  double tau_min = 0.0, tau_max = 0.0;
  for (size_t i = 0; i < grid.size(); ++i) {
    evals.push_back(eval(grid[i]));
    const double tau = evals.back().report.tau_bpshz_rb;
    if (i == 0) tau_min = tau_max = tau;
    tau_min = std::min(tau_min, tau);
    tau_max = std::max(tau_max, tau);
    if (!have || tau > best.report.tau_bpshz_rb) best_i = i;
    keep_if_better(best, have, evals.back());
  }

  // Golden-section refinement inside the bracket around the best grid point.
  double a = grid[best_i == 0 ? 0 : best_i - 1];
  double b = grid[std::min(best_i + 1, grid.size() - 1)];
  if (b - a > omega_tol) {
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    Candidate c1 = eval(x1), c2 = eval(x2);
    keep_if_better(best, have, c1.omega <= c2.omega ? c1 : c2);
    keep_if_better(best, have, c1.omega <= c2.omega ? c2 : c1);
    while (b - a > omega_tol) {
      if (c1.report.tau_bpshz_rb < c2.report.tau_bpshz_rb) {
        a = x1;
        x1 = x2;
        c1 = c2;
        x2 = a + kInvPhi * (b - a);
        c2 = eval(x2);
        keep_if_better(best, have, c2);
      } else {
        b = x2;
        x2 = x1;
        c2 = c1;
        x1 = b - kInvPhi * (b - a);
        c1 = eval(x1);
        keep_if_better(best, have, c1);
      }
    }
  }

  DesignSolution sol;
  sol.design = "fxd";
  sol.omega_star = best.omega;
  sol.zeta_star = probe.zeta;
  sol.tau_star = best.report.tau_bpshz_rb;
  sol.report = best.report;
  const double spread = tau_max - tau_min;
  sol.plateau = probe.N_E == 0 || spread <= 1e-9 * std::max(std::abs(tau_max), 1e-300);
  return sol;
}

DesignSolution solve_apd(const DesignContext& ctx) {
  const double lo = ctx.omega_lo();
  DesignSolution sol;
  sol.design = "apd";
  bool have = false;
  for (double zeta : zeta_set(ctx.radio.N_b)) {
    const double omega = std::clamp(std::sqrt(zeta), lo, 1.0);
    const FfrPartition part = FfrPartition::from_zeta(omega, zeta, ctx.radio.N_b);
    const ThroughputReport rep = ctx.evaluate(part);
    if (!have || rep.tau_bpshz_rb > sol.tau_star) {
      sol.omega_star = omega;
      sol.zeta_star = zeta;
      sol.tau_star = rep.tau_bpshz_rb;
      sol.report = rep;
      have = true;
    }
  }
  return sol;
}

DesignSolution solve_qoscd(const DesignContext& ctx, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("qoscd: q must lie in [0, 1]");
  const std::vector<double> grid = omega_grid(ctx.omega_lo(), ctx.omega_grid_points);
  DesignSolution sol;
  sol.design = "qoscd";
  sol.q = q;
  sol.feasible = false;
  bool have = false;
  for (double zeta : zeta_set(ctx.radio.N_b)) {
    for (double omega : grid) {
      const FfrPartition part = FfrPartition::from_zeta(omega, zeta, ctx.radio.N_b);
      const ThroughputReport rep = ctx.evaluate(part);
      // a vacuous comparison (one user population empty, per-UE rate 0/0)
      // cannot certify the QoS ratio, so such points are not admissible
      if (q > 0.0 && rep.per_ue_flagged) continue;
      const double slack =
          q == 0.0 ? 0.0 : rep.per_ue_tau_edge - q * rep.per_ue_tau_centre;
      if (!(slack >= -1e-12)) continue;
      if (!have || rep.tau_bpshz_rb > sol.tau_star) {
        sol.omega_star = omega;
        sol.zeta_star = zeta;
        sol.tau_star = rep.tau_bpshz_rb;
        sol.constraint_slack = slack;
        sol.report = rep;
        sol.feasible = true;
        have = true;
      }
    }
  }
  return sol;
}

void append_ledger(const std::string& path, const DesignContext& ctx,
                   const DesignSolution& sol) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("ledger: cannot open '" + path + "' for appending");
  if (fresh)
    out << "design,scheduler,rate_model,M,q,omega_star,zeta_star,tau_star,feasible\n";
  std::ostringstream row;
  row << sol.design << ',' << scheduler_name(ctx.scheduler) << ',' << rate_model_name(ctx.rate_model)
      << ',' << ctx.load.mean_users << ',';
  if (sol.q) row << *sol.q;
  row << ',' << std::setprecision(10) << sol.omega_star << ',' << sol.zeta_star << ','
      << std::setprecision(12) << sol.tau_star << ',' << (sol.feasible ? 1 : 0) << '\n';
  out << row.str();
}

}  // namespace ffr
