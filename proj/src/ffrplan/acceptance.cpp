#include "ffrplan/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "ffrplan/analysis.hpp"
#include "ffrplan/channel.hpp"
#include "ffrplan/errors.hpp"
#include "ffrplan/geometry.hpp"
#include "ffrplan/montecarlo.hpp"
#include "ffrplan/optimizer.hpp"
#include "ffrplan/philox.hpp"
#include "ffrplan/rate_model.hpp"

namespace ffr {

namespace {

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

double ks_distance(std::vector<double> samples, const AvgPowerProfile& profile) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (size_t j = 0; j < samples.size(); ++j) {
    const double F = conditional_sinr_cdf(samples[j], profile);
    ks = std::max(ks, std::max(F - j / n, (j + 1) / n - F));
  }
  return ks;
}

}  // namespace

bool run_acceptance(std::ostream& log, const AcceptanceOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const NetworkGeometry geo = NetworkGeometry::from_circle_radius(500.0, 35.0);
  const RadioParams rp = RadioParams::lte_default();
  const McsTable mcs = McsTable::lte_default(0.1);
  const CraParams cra{};
  const RateModel rm_cra = cra;
  const RateModel rm_dra = mcs;
  const double zeta = 0.52;
  const double B_b = rp.bandwidth_per_rb();

  bool all = true;
  auto emit = [&](int idx, bool pass, const std::string& detail) {
    all = all && pass;
    log << (pass ? "PASS " : "FAIL ") << idx << ": " << detail << std::endl;
  };

  // --- Criterion 1: analytical vs Monte Carlo over the validation grid.
  struct Cell {
    double M;
    double omega;
    Scheduler s;
    ThroughputReport ana[2];  // [0] CRA, [1] DRA
    SimSummary sim;
  };
  const double Ms[] = {8.0, 32.0};
  const double omegas[] = {0.5, 0.7, 0.9};
  const Scheduler scheds[] = {Scheduler::PF, Scheduler::MSINR, Scheduler::RR};
  std::vector<Cell> grid;
  bool c1 = true;
  double worst_rel = 0.0, worst_ci = 0.0;
  int sim_index = 0;
  for (double M : Ms) {
    for (double omega : omegas) {
      for (Scheduler s : scheds) {
        Cell cell;
        cell.M = M;
        cell.omega = omega;
        cell.s = s;
        const FfrPartition part = FfrPartition::from_zeta(omega, zeta, rp.N_b);
        const LoadModel load{M, 1e-6};
        cell.ana[0] = cell_throughput(load, part, s, rm_cra, rp, geo);
        cell.ana[1] = cell_throughput(load, part, s, rm_dra, rp, geo);
        SimConfig sc;
        sc.slots = opt.sim_slots;
        sc.drops = opt.sim_initial_drops;
        sc.max_drops = opt.sim_max_drops;
        sc.threads = opt.threads;
        sc.seed = opt.seed + 1000 + static_cast<uint64_t>(sim_index++);
        cell.sim = simulate(sc, load, part, s, rp, geo, mcs, cra);
        for (int model = 0; model < 2; ++model) {
          const SimModelReport& mr = model == 0 ? cell.sim.cra : cell.sim.dra;
          const double rel = std::abs(cell.ana[model].tau_bpshz_rb - mr.report.tau_bpshz_rb) /
                             mr.report.tau_bpshz_rb;
          worst_rel = std::max(worst_rel, rel);
          worst_ci = std::max(worst_ci, mr.tau_ci95_rel);
          if (rel > 0.05 || !mr.ci_met) c1 = false;
        }
        grid.push_back(std::move(cell));
      }
    }
  }
  const double c1_time = elapsed();
  c1 = c1 && c1_time <= 600.0;
  emit(1, c1,
       "analytic vs simulated cell throughput on the 36-config grid: worst relative error " +
           fmt(worst_rel) + " (limit 0.05), worst CI half-width " + fmt(worst_ci) +
           " (limit 0.02), runtime " + fmt(c1_time, 1) + " s (limit 600)");

  // --- Criterion 2: scheduler ordering, analytic exactly and MC within CI overlap.
  bool c2 = true;
  std::string c2_note = "tau_RR <= tau_PF <= tau_MSINR on every grid config";
  for (double M : Ms) {
    for (double omega : omegas) {
      const Cell *pf = nullptr, *ms = nullptr, *rr = nullptr;
      for (const Cell& cell : grid) {
        if (cell.M != M || cell.omega != omega) continue;
        (cell.s == Scheduler::PF ? pf : cell.s == Scheduler::MSINR ? ms : rr) = &cell;
      }
      for (int model = 0; model < 2; ++model) {
        const double a_pf = pf->ana[model].tau_bpshz_rb;
        const double a_ms = ms->ana[model].tau_bpshz_rb;
        const double a_rr = rr->ana[model].tau_bpshz_rb;
        const double tol = 1e-9 * a_ms;
        if (!(a_rr <= a_pf + tol && a_pf <= a_ms + tol)) {
          c2 = false;
          c2_note = "analytic ordering broken at M=" + fmt(M) + " omega=" + fmt(omega);
        }
        auto sim_of = [model](const Cell* c) {
          return model == 0 ? c->sim.cra : c->sim.dra;
        };
        const SimModelReport s_pf = sim_of(pf), s_ms = sim_of(ms), s_rr = sim_of(rr);
        const double lo_pf = s_pf.report.tau_bpshz_rb * (1.0 - s_pf.tau_ci95_rel);
        const double hi_pf = s_pf.report.tau_bpshz_rb * (1.0 + s_pf.tau_ci95_rel);
        const double lo_rr = s_rr.report.tau_bpshz_rb * (1.0 - s_rr.tau_ci95_rel);
        const double hi_ms = s_ms.report.tau_bpshz_rb * (1.0 + s_ms.tau_ci95_rel);
        if (!(lo_rr <= hi_pf && lo_pf <= hi_ms)) {
          c2 = false;
          c2_note = "simulated ordering outside CI overlap at M=" + fmt(M) + " omega=" + fmt(omega);
        }
      }
    }
  }
  emit(2, c2, c2_note);

  // --- Criterion 3: RR CDF identical to MSINR with one user.
  bool c3 = true;
  double c3_worst = 0.0;
  {
    const FfrPartition part = FfrPartition::from_zeta(0.7, zeta, rp.N_b);
    for (Region band : {Region::Centre, Region::Edge}) {
      const RegionSinr engine(band, geo.region_bounds(band, 0.7), rp, geo, part);
      for (int i = 0; i < 200; ++i) {
        const double x = std::pow(10.0, -6.0 + 12.0 * i / 199.0);
        const double diff = std::abs(engine.cond_cdf(x, 7, Scheduler::RR) -
                                     engine.cond_cdf(x, 1, Scheduler::MSINR));
        c3_worst = std::max(c3_worst, diff);
      }
    }
    c3 = c3_worst <= 1e-15;
  }
  emit(3, c3,
       "RR conditional CDF equals one-user MSINR CDF on a 200-point grid: max |diff| " +
           fmt(c3_worst, 3) + " (limit 1e-15)");

  // --- Criterion 4: closed-form conditional CDF vs fading draws (KS).
  bool c4 = true;
  double c4_worst = 0.0;
  {
    const FfrPartition part = FfrPartition::from_zeta(0.7, zeta, rp.N_b);
    const CounterRng pos_rng(opt.seed + 77);
    for (int i = 0; i < 10; ++i) {
      const double u = pos_rng.uniform(static_cast<uint32_t>(i), 0, 0, 9);
      const double d = geo.min_distance() + u * (geo.circle_radius() - geo.min_distance());
      const Region band = i % 2 == 0 ? Region::Centre : Region::Edge;
      const AvgPowerProfile profile = avg_power_profile(d, 0.35 * i, band, rp, geo, part);
      const double ks =
          ks_distance(sinr_samples(profile, 100000, opt.seed + 100 + i), profile);
      c4_worst = std::max(c4_worst, ks);
    }
    c4 = c4_worst <= 0.01;
  }
  emit(4, c4,
       "closed-form SINR CDF vs 1e5 fading draws at 10 random positions: worst KS distance " +
           fmt(c4_worst, 3) + " (limit 0.01)");

  // --- Criterion 5: ApD with MSINR picks full reuse.
  bool c5 = true;
  std::string c5_note = "ApD-MSINR returns (omega*, zeta*) = (1, 1) for M in {8, 128}, CRA and DRA";
  for (double M : {8.0, 128.0}) {
    for (const RateModel* rm : {&rm_cra, &rm_dra}) {
      DesignContext ctx;
      ctx.radio = rp;
      ctx.geometry = geo;
      ctx.load = LoadModel{M, 1e-6};
      ctx.scheduler = Scheduler::MSINR;
      ctx.rate_model = *rm;
      const DesignSolution sol = solve_apd(ctx);
      if (!(sol.zeta_star > 0.999999 && sol.omega_star > 0.999999)) {
        c5 = false;
        c5_note = "ApD-MSINR returned zeta*=" + fmt(sol.zeta_star) + " at M=" + fmt(M) +
                  " rate_model=" + rate_model_name(*rm);
      }
    }
  }
  emit(5, c5, c5_note);

  // --- Criterion 6: QoScD structure at M=32 under CRA.
  bool c6 = true;
  std::string c6_note;
  {
    auto qos_ctx = [&](Scheduler s) {
      DesignContext ctx;
      ctx.radio = rp;
      ctx.geometry = geo;
      ctx.load = LoadModel{32.0, 1e-6};
      ctx.scheduler = s;
      ctx.rate_model = rm_cra;
      return ctx;
    };
    double zeta_msinr = 0.0;
    for (Scheduler s : scheds) {
      const DesignSolution lo_q = solve_qoscd(qos_ctx(s), 0.02);
      const DesignSolution hi_q = solve_qoscd(qos_ctx(s), 0.2);
      if (s == Scheduler::MSINR) zeta_msinr = lo_q.zeta_star;
      const bool constraint_ok =
          lo_q.feasible && hi_q.feasible && lo_q.constraint_slack >= -1e-12 &&
          hi_q.constraint_slack >= -1e-12;
      if (!constraint_ok || !(hi_q.tau_star < lo_q.tau_star)) c6 = false;
      if (s == Scheduler::MSINR && !(lo_q.zeta_star >= 0.90)) c6 = false;
    }
    c6_note = "QoScD (M=32, CRA): MSINR zeta*(q=0.02) = " + fmt(zeta_msinr) +
              " (needs >= 0.90); tau*(0.2) < tau*(0.02) for all schedulers; optima satisfy "
              "the per-UE constraint";
  }
  emit(6, c6, c6_note);

  // --- Criterion 7: FxD omega* non-increasing in M (CRA, zeta_o = 0.52).
  bool c7 = true;
  std::string c7_trend;
  for (Scheduler s : scheds) {
    double prev = 2.0;
    c7_trend += std::string(scheduler_name(s)) + ": ";
    for (double M : {4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
      DesignContext ctx;
      ctx.radio = rp;
      ctx.geometry = geo;
      ctx.load = LoadModel{M, 1e-6};
      ctx.scheduler = s;
      ctx.rate_model = rm_cra;
      const DesignSolution sol = solve_fxd(ctx, zeta);
      if (sol.omega_star > prev + 1e-3) c7 = false;
      prev = sol.omega_star;
      c7_trend += fmt(sol.omega_star, 3) + " ";
    }
  }
  emit(7, c7, "FxD omega*(M) non-increasing over M in {4..128} for each scheduler: " + c7_trend);

  // --- Criterion 8: DRA ceiling and saturation.
  bool c8 = true;
  std::string c8_note;
  {
    const double cap = 5.55;
    double worst_tau = 0.0, worst_sim = 0.0;
    for (const Cell& cell : grid) {
      worst_tau = std::max({worst_tau, cell.ana[1].tau_centre, cell.ana[1].tau_edge,
                            cell.ana[1].tau_bpshz_rb});
      worst_sim = std::max(worst_sim, cell.sim.dra.max_rb_bps / B_b);
    }
    if (worst_tau > cap * (1.0 + 1e-12) || worst_sim > cap * (1.0 + 1e-12)) c8 = false;

    const FfrPartition part = FfrPartition::from_zeta(0.7, zeta, rp.N_b);
    auto tau_of = [&](double M, const RateModel& rm) {
      return cell_throughput(LoadModel{M, 1e-6}, part, Scheduler::MSINR, rm, rp, geo)
          .tau_bpshz_rb;
    };
    const double gain_cra = tau_of(128.0, rm_cra) - tau_of(8.0, rm_cra);
    const double gain_dra = tau_of(128.0, rm_dra) - tau_of(8.0, rm_dra);
    const double ratio = gain_dra / gain_cra;
    if (!(ratio < 0.5)) c8 = false;
    c8_note = "per-RB DRA throughput capped at 5.55 bits/s/Hz (worst analytic " + fmt(worst_tau) +
              ", worst simulated " + fmt(worst_sim) + "); MSINR M=8->128 gain ratio DRA/CRA " +
              fmt(ratio) + " (limit 0.5)";
  }
  emit(8, c8, c8_note);

  // --- Criterion 9: property spot checks mirrored from the unit suites.
  bool c9 = true;
  std::string c9_fail;
  {
    const FfrPartition part = FfrPartition::from_zeta(0.7, zeta, rp.N_b);
    const RegionSinr engine(Region::Centre, geo.region_bounds(Region::Centre, 0.7), rp, geo,
                            part);
    // CDF bounds/monotonicity and the stochastic-dominance chain.
    double prev_pf = -1.0;
    for (int i = 0; i < 60 && c9; ++i) {
      const double x = std::pow(10.0, -4.0 + 8.0 * i / 59.0);
      const double f_pf = engine.cond_cdf(x, 4, Scheduler::PF);
      const double f_ms = engine.cond_cdf(x, 4, Scheduler::MSINR);
      const double f_rr = engine.cond_cdf(x, 4, Scheduler::RR);
      if (f_pf < 0.0 || f_pf > 1.0 || f_pf + 1e-15 < prev_pf) {
        c9 = false;
        c9_fail = "CDF bounds/monotonicity";
      }
      if (f_ms > f_pf + 1e-12 || f_pf > f_rr + 1e-12) {
        c9 = false;
        c9_fail = "dominance chain";
      }
      prev_pf = f_pf;
    }
    // Rate staircase monotone in SINR.
    int prev_mode = 0;
    for (int i = 0; i < 100 && c9; ++i) {
      const int m = mcs.select_mode(0.01 * std::pow(10.0, 4.0 * i / 99.0));
      if (m < prev_mode) {
        c9 = false;
        c9_fail = "MCS staircase monotonicity";
      }
      prev_mode = m;
    }
    // Truncated Poisson captures the requested mass.
    for (double mean : {0.5, 8.0, 127.0}) {
      const std::vector<double> pmf = truncated_poisson_pmf(mean, 1e-6);
      double total = 0.0;
      for (double p : pmf) total += p;
      if (!(total >= 1.0 - 1e-6 && total <= 1.0 + 1e-12)) {
        c9 = false;
        c9_fail = "Poisson truncation mass";
      }
    }
    // Quadrature refinement stability: 64 -> 96 distance nodes.
    if (c9) {
      const RegionSinr fine(Region::Centre, geo.region_bounds(Region::Centre, 0.7), rp, geo,
                            part, 96);
      const double a = engine.rb_throughput(3, Scheduler::PF, rm_cra);
      const double b = fine.rb_throughput(3, Scheduler::PF, rm_cra);
      if (std::abs(a - b) > 1e-6 * std::abs(b)) {
        c9 = false;
        c9_fail = "quadrature refinement stability";
      }
    }
    // Simulator determinism: same seed, different thread counts.
    if (c9) {
      const LoadModel load{4.0, 1e-6};
      SimConfig sc;
      sc.drops = 16;
      sc.max_drops = 16;
      sc.slots = 20;
      sc.seed = opt.seed + 4242;
      sc.ci_target = 10.0;
      SimConfig sc2 = sc;
      sc2.threads = 2;
      const SimSummary s1 = simulate(sc, load, part, Scheduler::PF, rp, geo, mcs, cra);
      const SimSummary s2 = simulate(sc2, load, part, Scheduler::PF, rp, geo, mcs, cra);
      if (s1.per_drop_tau_cra != s2.per_drop_tau_cra ||
          s1.per_drop_tau_dra != s2.per_drop_tau_dra ||
          s1.cra.report.tau_bpshz_rb != s2.cra.report.tau_bpshz_rb) {
        c9 = false;
        c9_fail = "simulator seed/thread determinism";
      }
    }
  }
  emit(9, c9,
       c9 ? std::string("property spot checks: CDF bounds, dominance chain, MCS staircase, "
                        "Poisson mass, quadrature stability, simulator determinism")
          : "property spot check failed: " + c9_fail);

  log << "SUMMARY: " << (all ? "all 9 criteria passed" : "one or more criteria FAILED")
      << " (runtime " << fmt(elapsed(), 1) << " s)" << std::endl;
  return all;
}

}  // namespace ffr
