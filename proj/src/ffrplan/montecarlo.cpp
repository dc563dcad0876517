#include "ffrplan/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "ffrplan/errors.hpp"
#include "ffrplan/philox.hpp"

namespace ffr {

namespace {

// Counter layout: (c0 = drop/sample, c1 = slot/sequence, c2 = stream, c3 = kind).
constexpr uint32_t kKindFade = 0;
constexpr uint32_t kKindCount = 1;
constexpr uint32_t kKindBler = 2;
constexpr uint32_t kKindPosition = 4;

uint32_t stream_id(int q, int b, int rb) {
  return (static_cast<uint32_t>(q) << 16) | (static_cast<uint32_t>(b) << 10) |
         static_cast<uint32_t>(rb);
}

struct User {
  double d = 0.0;
  double theta = 0.0;
  bool centre = false;
  double S = 0.0;           // mean serving power [W]
  std::vector<double> I;    // mean interferer powers, band order
  double mu = 1.0;          // PF windowed average SINR
};

int poisson_count(const CounterRng& rng, uint32_t drop, double mean) {
  if (mean <= 0.0) return 0;
  int count = 0;
  double acc = 0.0;
  for (uint32_t i = 0;; ++i) {
    acc += -std::log(rng.uniform(drop, i, 0, kKindCount));
    if (acc > mean) break;
    if (++count > 1000000) throw NumericalError("simulate: runaway Poisson count");
  }
  return count;
}

std::vector<User> make_drop_users(const CounterRng& rng, uint32_t drop, const LoadModel& load,
                                  const FfrPartition& part, const RadioParams& rp,
                                  const NetworkGeometry& geo, bool with_powers) {
  const double R_m = geo.circle_radius();
  const double R_0m = geo.min_distance();
  const int k = poisson_count(rng, drop, load.annulus_mean(geo));
  if (k >= 65536) throw NumericalError("simulate: more than 65535 users in one drop");
  const double R_th = std::clamp(part.omega, R_0m / R_m, 1.0) * R_m;
  std::vector<User> users(static_cast<size_t>(k));
  for (int q = 0; q < k; ++q) {
    const auto u = rng.uniform2(drop, static_cast<uint32_t>(q), 0, kKindPosition);
    User& usr = users[q];
    usr.d = std::sqrt(R_0m * R_0m + u[0] * (R_m * R_m - R_0m * R_0m));
    usr.theta = 2.0 * M_PI * u[1];
    usr.centre = usr.d < R_th;
    if (with_powers) {
      const Region band = usr.centre ? Region::Centre : Region::Edge;
      const AvgPowerProfile p = avg_power_profile(usr.d, usr.theta, band, rp, geo, part);
      usr.S = p.signal;
      usr.I = p.interferers;
      double denom = p.noise;
      for (double ib : p.interferers) denom += ib;
      usr.mu = usr.S / denom;  // distance-conditioned mean-SINR warm start
    }
  }
  return users;
}

struct DropContext {
  const LoadModel* load;
  const FfrPartition* part;
  Scheduler scheduler;
  const RadioParams* rp;
  const NetworkGeometry* geo;
  const McsTable* mcs;
  double lambda;        // CRA coding gap
  double cra_scale;     // N_sc / T_o
  double B_b;
  double noise;
  int slots;
  int warmup;
  int pf_window;
};

struct DropResult {
  // [0] = CRA, [1] = DRA; realized bits/s summed over RB-slots in measured time.
  double sum_c[2] = {0.0, 0.0};
  double sum_e[2] = {0.0, 0.0};
  double max_rb[2] = {0.0, 0.0};
  double jain_c = -1.0;  // negative: region had no users or no RBs
  double jain_e = -1.0;
  std::vector<long long> attempts;
  std::vector<long long> failures;
  bool conservation_ok = true;
  int k_c = 0;
  int k_e = 0;
};

double jain_index(const std::vector<long long>& counts, const std::vector<int>& idx) {
  if (idx.empty()) return -1.0;
  double sum = 0.0, sumsq = 0.0;
  for (int q : idx) {
    const double x = static_cast<double>(counts[q]);
    sum += x;
    sumsq += x * x;
  }
  if (sumsq <= 0.0) return -1.0;
  return (sum * sum) / (static_cast<double>(idx.size()) * sumsq);
}

DropResult run_drop(const CounterRng& rng, uint32_t drop, const DropContext& C) {
  DropResult res;
  res.attempts.assign(C.mcs->num_modes() + 1, 0);
  res.failures.assign(C.mcs->num_modes() + 1, 0);
  std::vector<User> users =
      make_drop_users(rng, drop, *C.load, *C.part, *C.rp, *C.geo, /*with_powers=*/true);

  std::vector<int> idx_c, idx_e;
  for (int q = 0; q < static_cast<int>(users.size()); ++q)
    (users[q].centre ? idx_c : idx_e).push_back(q);
  res.k_c = static_cast<int>(idx_c.size());
  res.k_e = static_cast<int>(idx_e.size());

  const bool pf = C.scheduler == Scheduler::PF;
  const bool rr = C.scheduler == Scheduler::RR;
  const int T_total = C.slots + (pf ? C.warmup : 0);
  const int T_meas_begin = pf ? C.warmup : 0;
  const double inv_w = 1.0 / C.pf_window;
  const int N_C = C.part->N_C;
  const int N_E = C.part->N_E;
  const int n_rb = N_C + N_E;

  const std::vector<int>& bss_c = C.geo->interferers(Region::Centre);
  const std::vector<int>& bss_e = C.geo->interferers(Region::Edge);

  std::vector<long long> alloc(users.size(), 0);
  std::vector<double> sched_sum(users.size(), 0.0);
  std::vector<double> per_rb[2];
  per_rb[0].assign(n_rb, 0.0);
  per_rb[1].assign(n_rb, 0.0);
  int rot_c = 0, rot_e = 0;

  for (int t = 0; t < T_total; ++t) {
    const bool measuring = t >= T_meas_begin;
    if (pf) std::fill(sched_sum.begin(), sched_sum.end(), 0.0);

    for (int region = 0; region < 2; ++region) {
      const bool centre = region == 0;
      const std::vector<int>& idx = centre ? idx_c : idx_e;
      const std::vector<int>& bss = centre ? bss_c : bss_e;
      const int rb_begin = centre ? 0 : N_C;
      const int rb_count = centre ? N_C : N_E;
      int& rot = centre ? rot_c : rot_e;
      const int k = static_cast<int>(idx.size());
      if (rb_count == 0) continue;
      if (k == 0) {
        // No winner: the RBs stay silent this slot.
        continue;
      }
      for (int j = 0; j < rb_count; ++j) {
        const int rb = rb_begin + j;
        int winner = -1;
        double w_gamma = 0.0;
        if (rr) {
          winner = idx[(rot + j) % k];
          const User& u = users[winner];
          const double e0 =
              rng.exponential(drop, t, stream_id(winner, 0, rb), kKindFade);
          double den = C.noise;
          for (size_t bi = 0; bi < bss.size(); ++bi)
            den += u.I[bi] * rng.exponential(drop, t, stream_id(winner, bss[bi], rb), kKindFade);
          w_gamma = u.S * e0 / den;
        } else {
          double best = -1.0;
          for (int q : idx) {
            const User& u = users[q];
            const double e0 = rng.exponential(drop, t, stream_id(q, 0, rb), kKindFade);
            double den = C.noise;
            for (size_t bi = 0; bi < bss.size(); ++bi)
              den += u.I[bi] * rng.exponential(drop, t, stream_id(q, bss[bi], rb), kKindFade);
            const double gamma = u.S * e0 / den;
            const double metric = pf ? gamma / u.mu : gamma;
            if (metric > best) {
              best = metric;
              winner = q;
              w_gamma = gamma;
            }
          }
        }
        if (pf) sched_sum[winner] += w_gamma;

        const double cra_bps = C.cra_scale * std::log2(1.0 + w_gamma / C.lambda);
        double dra_bps = 0.0;
        const int m = C.mcs->select_mode(w_gamma);
        if (m >= 1) {
          const double eps = C.mcs->bler(w_gamma, m);
          const bool ok = rng.uniform(drop, t, static_cast<uint32_t>(rb), kKindBler) >= eps;
          if (measuring) {
            ++res.attempts[m];
            if (!ok) ++res.failures[m];
          }
          if (ok) dra_bps = C.B_b * C.mcs->mode(m).bits_per_symbol;
        }
        if (measuring) {
          double* sum = centre ? res.sum_c : res.sum_e;
          sum[0] += cra_bps;
          sum[1] += dra_bps;
          per_rb[0][rb] += cra_bps;
          per_rb[1][rb] += dra_bps;
          res.max_rb[0] = std::max(res.max_rb[0], cra_bps);
          res.max_rb[1] = std::max(res.max_rb[1], dra_bps);
          ++alloc[winner];
        }
      }
      rot = (rot + rb_count) % k;
    }
    if (pf)
      for (size_t q = 0; q < users.size(); ++q)
        users[q].mu = (1.0 - inv_w) * users[q].mu + sched_sum[q] * inv_w;
  }

  if (N_C > 0) res.jain_c = jain_index(alloc, idx_c);
  if (N_E > 0) res.jain_e = jain_index(alloc, idx_e);
  for (int model = 0; model < 2; ++model) {
    double total = 0.0;
    for (int rb = 0; rb < n_rb; ++rb) total += per_rb[model][rb];
    const double direct = res.sum_c[model] + res.sum_e[model];
    if (std::abs(total - direct) > 1e-9 * std::max(1.0, std::abs(direct)))
      res.conservation_ok = false;
  }
  return res;
}

struct Stats {
  double mean = 0.0;
  double ci95 = 0.0;  // absolute half-width
  double rel = 0.0;
  bool met = false;
};

Stats stats_of(const std::vector<double>& xs, double ci_target) {
  Stats s;
  const size_t n = xs.size();
  if (n == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  s.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(n));
  if (s.mean != 0.0) {
    s.rel = s.ci95 / std::abs(s.mean);
    s.met = s.rel <= ci_target;
  } else {
    s.rel = sd == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    s.met = sd == 0.0;
  }
  return s;
}

}  // namespace

void SimConfig::validate() const {
  if (pf_window < 50) throw ConfigError("sim: pf_window must be >= 50");
  if (warmup_slots < pf_window) throw ConfigError("sim: warmup_slots must be >= pf_window");
  if (slots < 1) throw ConfigError("sim: slots must be >= 1");
  if (drops < 2) throw ConfigError("sim: drops must be >= 2");
  if (max_drops < drops) throw ConfigError("sim: max_drops must be >= drops");
  if (!(ci_target > 0.0)) throw ConfigError("sim: ci_target must be > 0");
  if (threads < 1 || threads > 256) throw ConfigError("sim: threads must be in [1, 256]");
}

SimSummary simulate(const SimConfig& cfg, const LoadModel& load, const FfrPartition& part,
                    Scheduler scheduler, const RadioParams& rp, const NetworkGeometry& geo,
                    const McsTable& mcs, const CraParams& cra) {
  cfg.validate();
  rp.validate();
  if (rp.N_b != part.N_b) throw ConfigError("sim: partition N_b != radio N_b");
  if (rp.N_b > 1023) throw ConfigError("sim: N_b > 1023 exceeds the RNG stream layout");

  DropContext C{};
  C.load = &load;
  C.part = &part;
  C.scheduler = scheduler;
  C.rp = &rp;
  C.geo = &geo;
  C.mcs = &mcs;
  C.lambda = cra.coding_gap;
  C.cra_scale = rp.N_sc / cra.T_o;
  C.B_b = rp.bandwidth_per_rb();
  C.noise = rp.noise_watts();
  C.slots = cfg.slots;
  C.warmup = cfg.warmup_slots;
  C.pf_window = cfg.pf_window;

  const CounterRng rng(cfg.seed);
  std::vector<DropResult> results;
  int total = 0;
  int batch = cfg.drops;
  std::vector<double> tau_cell[2], tau_c[2], tau_e[2];
  const double denom_cell = static_cast<double>(cfg.slots) * C.B_b * part.N_b;
  const double denom_c = part.N_C > 0 ? cfg.slots * C.B_b * part.N_C : 0.0;
  const double denom_e = part.N_E > 0 ? cfg.slots * C.B_b * part.N_E : 0.0;

  Stats cell_stats[2];
  while (true) {
    const size_t first = results.size();
    results.resize(first + batch);
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
      try {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i >= batch) return;
          results[first + i] = run_drop(rng, static_cast<uint32_t>(first + i), C);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    };
    if (cfg.threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < cfg.threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    for (size_t i = first; i < results.size(); ++i) {
      const DropResult& r = results[i];
      for (int model = 0; model < 2; ++model) {
        tau_cell[model].push_back((r.sum_c[model] + r.sum_e[model]) / denom_cell);
        tau_c[model].push_back(denom_c > 0.0 ? r.sum_c[model] / denom_c : 0.0);
        tau_e[model].push_back(denom_e > 0.0 ? r.sum_e[model] / denom_e : 0.0);
      }
    }
    total += batch;
    cell_stats[0] = stats_of(tau_cell[0], cfg.ci_target);
    cell_stats[1] = stats_of(tau_cell[1], cfg.ci_target);
    if ((cell_stats[0].met && cell_stats[1].met) || total >= cfg.max_drops) break;
    batch = std::min(std::max((total + 1) / 2, cfg.drops), cfg.max_drops - total);
  }

  SimSummary out;
  out.drops_run = total;
  out.seed = cfg.seed;
  out.per_drop_tau_cra = tau_cell[0];
  out.per_drop_tau_dra = tau_cell[1];

  const double mean_users = load.annulus_mean(geo);
  const double P_C = p_centre(part.omega, geo);
  for (int model = 0; model < 2; ++model) {
    SimModelReport& rep = model == 0 ? out.cra : out.dra;
    const Stats sc = stats_of(tau_c[model], cfg.ci_target);
    const Stats se = stats_of(tau_e[model], cfg.ci_target);
    rep.report.tau_bpshz_rb = cell_stats[model].mean;
    rep.report.eta_bps = cell_stats[model].mean * C.B_b * part.N_b;
    rep.report.tau_centre = sc.mean;
    rep.report.tau_edge = se.mean;
    if (mean_users > 0.0) {
      const PerUeTau ue = per_ue_tau(scheduler, part, mean_users, P_C, sc.mean, se.mean);
      rep.report.per_ue_tau_centre = ue.centre;
      rep.report.per_ue_tau_edge = ue.edge;
      rep.report.per_ue_flagged = ue.flagged;
    }
    rep.report.truncation_k_max = 0;
    rep.report.quadrature_error = 0.0;
    rep.report.provenance = "simulated";
    rep.tau_ci95_rel = cell_stats[model].rel;
    rep.tau_centre_ci95_rel = sc.rel;
    rep.tau_edge_ci95_rel = se.rel;
    rep.ci_met = cell_stats[model].met;
  }
  out.dra.dra_attempts.assign(mcs.num_modes() + 1, 0);
  out.dra.dra_failures.assign(mcs.num_modes() + 1, 0);

  double jc_sum = 0.0, je_sum = 0.0;
  int jc_n = 0, je_n = 0;
  for (const DropResult& r : results) {
    out.cra.max_rb_bps = std::max(out.cra.max_rb_bps, r.max_rb[0]);
    out.dra.max_rb_bps = std::max(out.dra.max_rb_bps, r.max_rb[1]);
    if (!r.conservation_ok) out.conservation_ok = false;
    if (r.jain_c >= 0.0) {
      jc_sum += r.jain_c;
      ++jc_n;
    }
    if (r.jain_e >= 0.0) {
      je_sum += r.jain_e;
      ++je_n;
    }
    for (size_t m = 0; m < r.attempts.size(); ++m) {
      out.dra.dra_attempts[m] += r.attempts[m];
      out.dra.dra_failures[m] += r.failures[m];
    }
  }
  out.cra.jain_centre = out.dra.jain_centre = jc_n > 0 ? jc_sum / jc_n : 1.0;
  out.cra.jain_edge = out.dra.jain_edge = je_n > 0 ? je_sum / je_n : 1.0;
  return out;
}

std::vector<double> sinr_samples(const AvgPowerProfile& profile, int n, uint64_t seed) {
  if (n < 1) throw ConfigError("sinr_samples: n must be >= 1");
  const CounterRng rng(seed);
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double e0 = rng.exponential(static_cast<uint32_t>(i), 0, 0, kKindFade);
    double den = profile.noise;
    for (size_t b = 0; b < profile.interferers.size(); ++b)
      den += profile.interferers[b] *
             rng.exponential(static_cast<uint32_t>(i), 0, static_cast<uint32_t>(b + 1), kKindFade);
    out[i] = profile.signal * e0 / den;
  }
  return out;
}

std::vector<double> scheduled_sinr_samples(Region band, const RegionBounds& bounds,
                                           const RadioParams& rp, const NetworkGeometry& geo,
                                           const FfrPartition& part, int k, Scheduler scheduler,
                                           int n, uint64_t seed) {
  if (k < 1) throw ConfigError("scheduled_sinr_samples: k must be >= 1");
  if (n < 1) throw ConfigError("scheduled_sinr_samples: n must be >= 1");
  if (bounds.empty()) throw ConfigError("scheduled_sinr_samples: empty region");
  if (scheduler == Scheduler::PF)
    throw ConfigError("scheduled_sinr_samples: PF needs the full simulator (warmup state)");
  const CounterRng rng(seed);
  const std::vector<int>& bss = geo.interferers(band);
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const uint32_t c0 = static_cast<uint32_t>(i);
    double chosen = 0.0;
    double best = -1.0;
    const int rr_pick = i % k;
    for (int q = 0; q < k; ++q) {
      if (scheduler == Scheduler::RR && q != rr_pick) continue;
      const auto u = rng.uniform2(c0, static_cast<uint32_t>(q), 0, kKindPosition);
      const double d =
          std::sqrt(bounds.R_L * bounds.R_L + u[0] * (bounds.R_U * bounds.R_U - bounds.R_L * bounds.R_L));
      const double theta = 2.0 * M_PI * u[1];
      const AvgPowerProfile p = avg_power_profile(d, theta, band, rp, geo, part);
      const double e0 = rng.exponential(c0, 0, stream_id(q, 0, 0), kKindFade);
      double den = p.noise;
      for (size_t bi = 0; bi < bss.size(); ++bi)
        den += p.interferers[bi] * rng.exponential(c0, 0, stream_id(q, bss[bi], 0), kKindFade);
      const double gamma = p.signal * e0 / den;
      if (scheduler == Scheduler::RR) {
        chosen = gamma;
        break;
      }
      if (gamma > best) {
        best = gamma;
        chosen = gamma;
      }
    }
    out[i] = chosen;
  }
  return out;
}

DropStats drop_statistics(const LoadModel& load, const FfrPartition& part,
                          const NetworkGeometry& geo, int drops, uint64_t seed) {
  if (drops < 1) throw ConfigError("drop_statistics: drops must be >= 1");
  const CounterRng rng(seed);
  const RadioParams rp = RadioParams::lte_default();
  DropStats st;
  long long centre = 0;
  for (int i = 0; i < drops; ++i) {
    const std::vector<User> users =
        make_drop_users(rng, static_cast<uint32_t>(i), load, part, rp, geo, /*with_powers=*/false);
    st.total_users += static_cast<long long>(users.size());
    for (const User& u : users) centre += u.centre ? 1 : 0;
  }
  st.mean_count = static_cast<double>(st.total_users) / drops;
  st.centre_fraction = st.total_users > 0 ? static_cast<double>(centre) / st.total_users : 0.0;
  return st;
}

}  // namespace ffr
