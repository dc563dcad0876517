#pragma once

#include <cstdint>
#include <vector>

#include "ffrplan/analysis.hpp"
#include "ffrplan/channel.hpp"
#include "ffrplan/geometry.hpp"
#include "ffrplan/partition.hpp"
#include "ffrplan/rate_model.hpp"

namespace ffr {

// Discrete-time system simulation controls. Drops are independent network
// realizations; the drop count grows adaptively until the 95% CI half-width of
// the cell throughput reaches ci_target (relative) or max_drops is hit.
struct SimConfig {
  int drops = 128;          // initial batch
  int max_drops = 4096;
  int slots = 100;          // measured scheduling slots per drop
  int pf_window = 100;      // W
  int warmup_slots = 200;   // PF only: slots simulated before measuring
  uint64_t seed = 1;
  double ci_target = 0.02;  // 95% CI half-width / mean
  int threads = 1;

  void validate() const;    // W >= 50, warmup >= W, counts positive
};

// Simulation-side estimate for one rate model. The embedded report mirrors the
// analytical ThroughputReport so the two can be diffed field by field.
struct SimModelReport {
  ThroughputReport report;          // provenance = "simulated"
  double tau_ci95_rel = 0.0;        // cell tau: 95% CI half-width / mean
  double tau_centre_ci95_rel = 0.0;
  double tau_edge_ci95_rel = 0.0;
  bool ci_met = false;
  double max_rb_bps = 0.0;          // largest realized single-RB rate seen
  double jain_centre = 1.0;         // mean Jain index of RB allocation shares
  double jain_edge = 1.0;
  // DRA only: per-mode transmission attempts and block failures (index m,
  // 1-based like McsTable; [0] unused).
  std::vector<long long> dra_attempts;
  std::vector<long long> dra_failures;
};

// One simulation pass prices both rate models: scheduling depends on the SINR
// only, so the same fading/allocation history is reused for CRA and DRA.
struct SimSummary {
  SimModelReport cra;
  SimModelReport dra;
  int drops_run = 0;
  uint64_t seed = 0;
  bool conservation_ok = true;      // per-RB sums matched the cell totals
  std::vector<double> per_drop_tau_cra;  // per-drop cell tau, drop order
  std::vector<double> per_drop_tau_dra;
};

SimSummary simulate(const SimConfig& cfg, const LoadModel& load, const FfrPartition& part,
                    Scheduler scheduler, const RadioParams& rp, const NetworkGeometry& geo,
                    const McsTable& mcs, const CraParams& cra);

// Static-channel SINR draws at one position: gamma = S*E_0 / (noise + sum I_b E_b)
// with i.i.d. Exp(1) fades. Used to validate the closed-form conditional CDF.
std::vector<double> sinr_samples(const AvgPowerProfile& profile, int n, uint64_t seed);

// Scheduled-SINR draws with exactly k users placed uniformly in the region and
// a single RB, one independent sample per draw. Supports MSINR (argmax) and RR
// (rotation); PF needs the full simulator's warmup and is rejected here.
std::vector<double> scheduled_sinr_samples(Region band, const RegionBounds& bounds,
                                           const RadioParams& rp, const NetworkGeometry& geo,
                                           const FfrPartition& part, int k, Scheduler scheduler,
                                           int n, uint64_t seed);

// Mean user count and centre fraction over many drops (drop_users consistency
// checks without exposing the internal drop structure).
struct DropStats {
  double mean_count = 0.0;
  double centre_fraction = 0.0;
  long long total_users = 0;
};
DropStats drop_statistics(const LoadModel& load, const FfrPartition& part,
                          const NetworkGeometry& geo, int drops, uint64_t seed);

}  // namespace ffr
