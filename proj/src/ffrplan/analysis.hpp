#pragma once

#include <string>
#include <vector>

#include "ffrplan/channel.hpp"
#include "ffrplan/geometry.hpp"
#include "ffrplan/partition.hpp"
#include "ffrplan/rate_model.hpp"

namespace ffr {

enum class Scheduler { PF, MSINR, RR };

const char* scheduler_name(Scheduler s);
Scheduler scheduler_from_name(const std::string& name);

// Poisson user population: M is the mean count in the full disc of radius R_m,
// so the mean inside the serviceable annulus is M * (1 - (R_0m/R_m)^2).
struct LoadModel {
  double mean_users = 8.0;          // M = pi * lambda_m * R_m^2
  double truncation_delta = 1e-6;   // Poisson mass allowed outside the truncated sum

  double lambda_m(const NetworkGeometry& geo) const;
  double annulus_mean(const NetworkGeometry& geo) const;
};

// Probability that a uniformly placed user falls in the centre annulus.
double p_centre(double omega, const NetworkGeometry& geo);

// Poisson pmf over k = 0..K where K captures mass >= 1 - delta. The range is
// widened and retried on a shortfall before raising NumericalError.
std::vector<double> truncated_poisson_pmf(double mean, double delta);

// Distance-averaged conditional SINR CDF machinery for one cell region. The
// distance integral uses Gauss-Legendre nodes on [R_L, R_U] weighted by the
// radial density f(d) = 2d/(R_U^2 - R_L^2); the interference statistics are
// evaluated at angle 0 by default with an optional angular average over the
// 60-degree symmetry sector.
class RegionSinr {
 public:
  RegionSinr(Region band, const RegionBounds& bounds, const RadioParams& rp,
             const NetworkGeometry& geo, const FfrPartition& part, int distance_nodes = 64,
             int angle_nodes = 1);

  bool empty() const { return nodes_.empty(); }
  double bandwidth_per_rb() const { return B_b_; }

  // E_d[F(x|d)]: both the RR CDF and the MSINR base.
  double avg_cdf(double x) const;
  // Scheduler-conditioned CDF given k users in the region.
  double cond_cdf(double x, int k, Scheduler s) const;

  // Per-RB throughput (bits/s) for a single user count; the CRA integral uses
  // the substitution x = Lambda*u/(1-u) with adaptive Gauss-Kronrod.
  double rb_throughput(int k, Scheduler s, const RateModel& rm, double* quad_error = nullptr) const;

  // Per-RB throughput for every k = 0..k_max in one pass (power iteration over
  // the shared CDF samples). CRA integrates in v = ln(Lambda + x) with
  // panel-doubling until the k = 1 and k = k_max values stabilise.
  std::vector<double> rb_throughput_all(int k_max, Scheduler s, const RateModel& rm,
                                        double* quad_error = nullptr) const;

 private:
  struct Node {
    double weight;                // quadrature weight x radial density (sums to 1)
    double a;                     // noise / signal
    std::vector<double> ratios;   // interferer power / signal
  };
  double node_cdf(const Node& n, double x) const;
  double tail_bound(double x) const;  // max_i (1 - F_i(x))

  std::vector<Node> nodes_;
  double B_b_;
};

struct PerUeTau {
  double centre = 0.0;
  double edge = 0.0;
  bool flagged = false;  // a division guard (0/0 or x/0) was applied
};

// Scheduler-specific per-UE, per-RB throughput definitions used by the
// QoS-constrained design. PF/RR divide the region share by the expected user
// count; MSINR deliberately does not.
PerUeTau per_ue_tau(Scheduler s, const FfrPartition& part, double M, double P_C,
                    double tau_centre, double tau_edge);

struct ThroughputReport {
  double eta_bps = 0.0;          // cell throughput, Poisson/binomial aggregated
  double tau_bpshz_rb = 0.0;     // eta / (B_b * N_b)
  double tau_centre = 0.0;       // per-RB centre throughput / B_b
  double tau_edge = 0.0;
  double per_ue_tau_centre = 0.0;
  double per_ue_tau_edge = 0.0;
  bool per_ue_flagged = false;
  int truncation_k_max = 0;
  double quadrature_error = 0.0;
  std::string provenance = "analytical";
};

// Average cell throughput: Poisson over the user count, binomial over the
// centre/edge split, per-RB throughput arrays from RegionSinr.
ThroughputReport cell_throughput(const LoadModel& load, const FfrPartition& part, Scheduler s,
                                 const RateModel& rm, const RadioParams& rp,
                                 const NetworkGeometry& geo, int angle_nodes = 1,
                                 int distance_nodes = 64);

}  // namespace ffr
