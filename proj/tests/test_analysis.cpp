#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "ffrplan/analysis.hpp"
#include "ffrplan/errors.hpp"
#include "ffrplan/units.hpp"

using namespace ffr;

namespace {
const RadioParams kRp = RadioParams::lte_default();
const NetworkGeometry kGeo = NetworkGeometry::from_circle_radius(500.0, 35.0);
const FfrPartition kPart = FfrPartition::from_zeta(0.7, 0.52, 100);

RegionSinr centre_engine(int dn = 64, int an = 1) {
  return RegionSinr(Region::Centre, kGeo.region_bounds(Region::Centre, 0.7), kRp, kGeo, kPart,
                    dn, an);
}
RegionSinr edge_engine(int dn = 64, int an = 1) {
  return RegionSinr(Region::Edge, kGeo.region_bounds(Region::Edge, 0.7), kRp, kGeo, kPart, dn,
                    an);
}
}  // namespace

TEST_CASE("scheduler names") {
  CHECK(std::string(scheduler_name(Scheduler::PF)) == "pf");
  CHECK(std::string(scheduler_name(Scheduler::MSINR)) == "msinr");
  CHECK(std::string(scheduler_name(Scheduler::RR)) == "rr");
  CHECK(scheduler_from_name("pf") == Scheduler::PF);
  CHECK(scheduler_from_name("msinr") == Scheduler::MSINR);
  CHECK(scheduler_from_name("rr") == Scheduler::RR);
  CHECK_THROWS_AS(scheduler_from_name("maxcqi"), ConfigError);
}

TEST_CASE("load model means") {
  LoadModel load;
  load.mean_users = 8.0;
  // annulus mean: M (1 - (R_0m/R_m)^2), frozen for the default geometry
  CHECK(load.annulus_mean(kGeo) == doctest::Approx(7.9608).epsilon(1e-14));
  CHECK(load.lambda_m(kGeo) ==
        doctest::Approx(8.0 / (std::numbers::pi * 500.0 * 500.0)).epsilon(1e-13));
}

TEST_CASE("p_centre") {
  // (omega^2 R_m^2 - R_0m^2) / (R_m^2 - R_0m^2), frozen at omega = 0.7
  CHECK(p_centre(0.7, kGeo) == doctest::Approx(0.4874886946035574).epsilon(1e-14));
  CHECK(p_centre(1.0, kGeo) == doctest::Approx(1.0));
  CHECK(p_centre(35.0 / 500.0, kGeo) == doctest::Approx(0.0).epsilon(1e-12));
  // outside the geometric range is rejected, not clamped
  CHECK_THROWS_AS(p_centre(0.0, kGeo), ConfigError);
}

TEST_CASE("truncated poisson pmf") {
  const auto pmf = truncated_poisson_pmf(7.9608, 1e-6);
  CHECK(pmf.size() == 26);  // frozen: k_max = 25
  const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  CHECK(total >= 1.0 - 1e-6);
  CHECK(total <= 1.0);
  // entries match the closed form
  CHECK(pmf[0] == doctest::Approx(std::exp(-7.9608)).epsilon(1e-13));
  CHECK(pmf[3] ==
        doctest::Approx(std::exp(-7.9608) * std::pow(7.9608, 3) / 6.0).epsilon(1e-12));

  CHECK(truncated_poisson_pmf(0.0, 1e-6).size() == 1);
  CHECK(truncated_poisson_pmf(0.5, 1e-6).size() > 2);
  // smaller delta keeps more terms
  CHECK(truncated_poisson_pmf(8.0, 1e-12).size() > truncated_poisson_pmf(8.0, 1e-3).size());
  CHECK_THROWS_AS(truncated_poisson_pmf(-1.0, 1e-6), ConfigError);
  CHECK_THROWS_AS(truncated_poisson_pmf(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(truncated_poisson_pmf(1.0, 1.0), ConfigError);
}

TEST_CASE("region average cdf frozen values") {
  const RegionSinr c = centre_engine();
  const RegionSinr e = edge_engine();
  CHECK(c.avg_cdf(0.1) == doctest::Approx(0.008186394190369362).epsilon(1e-12));
  CHECK(c.avg_cdf(1.0) == doctest::Approx(0.07536478200451058).epsilon(1e-12));
  CHECK(c.avg_cdf(10.0) == doctest::Approx(0.42172268812725155).epsilon(1e-12));
  CHECK(e.avg_cdf(0.1) == doctest::Approx(0.0051922731208213346).epsilon(1e-12));
  CHECK(e.avg_cdf(1.0) == doctest::Approx(0.050203993339028155).epsilon(1e-12));
  CHECK(e.avg_cdf(10.0) == doctest::Approx(0.374411578788621).epsilon(1e-12));
}

TEST_CASE("scheduler-conditioned cdf") {
  const RegionSinr c = centre_engine();
  // frozen PF k=4 value
  CHECK(c.cond_cdf(1.0, 4, Scheduler::PF) ==
        doctest::Approx(0.0002938434138232399).epsilon(1e-11));
  // RR is k-independent and equals the average cdf
  CHECK(c.cond_cdf(1.0, 1, Scheduler::RR) == doctest::Approx(c.avg_cdf(1.0)).epsilon(1e-15));
  CHECK(c.cond_cdf(1.0, 9, Scheduler::RR) == doctest::Approx(c.avg_cdf(1.0)).epsilon(1e-15));
  // k = 1: all schedulers coincide with the average cdf
  for (Scheduler s : {Scheduler::PF, Scheduler::MSINR, Scheduler::RR})
    CHECK(c.cond_cdf(2.5, 1, s) == doctest::Approx(c.avg_cdf(2.5)).epsilon(1e-14));
  // multiuser selection dominates: F_k(x) <= F_1(x) and decreases with k
  for (double x : {0.2, 1.0, 5.0}) {
    double prev_pf = 2.0, prev_ms = 2.0;
    for (int k = 1; k <= 8; ++k) {
      const double f_pf = c.cond_cdf(x, k, Scheduler::PF);
      const double f_ms = c.cond_cdf(x, k, Scheduler::MSINR);
      CHECK(f_pf <= prev_pf + 1e-15);
      CHECK(f_ms <= prev_ms + 1e-15);
      CHECK(f_pf >= 0.0);
      CHECK(f_ms >= 0.0);
      CHECK(f_pf <= 1.0);
      CHECK(f_ms <= 1.0);
      prev_pf = f_pf;
      prev_ms = f_ms;
    }
  }
  CHECK_THROWS_AS(c.cond_cdf(1.0, 0, Scheduler::PF), ConfigError);
}

TEST_CASE("pf and msinr cdf identity on equal-statistics users") {
  // When every user shares one CDF F, PF selects by normalised rate and MSINR
  // by rate; both give F^k for the scheduled user... but PF averages F_i^k
  // over positions while MSINR averages F_i first. Jensen: (E F)^k <= E F^k.
  const RegionSinr c = centre_engine();
  for (double x : {0.3, 1.0, 4.0})
    for (int k : {2, 3, 6})
      CHECK(c.cond_cdf(x, k, Scheduler::MSINR) <= c.cond_cdf(x, k, Scheduler::PF) + 1e-15);
}

TEST_CASE("rb throughput frozen single-k values") {
  const RegionSinr c = centre_engine();
  const RegionSinr e = edge_engine();
  const RateModel cra = CraParams{};
  const RateModel dra = McsTable::lte_default(0.1);
  CHECK(c.rb_throughput(3, Scheduler::PF, cra) ==
        doctest::Approx(1032324.1838966843).epsilon(1e-8));
  CHECK(c.rb_throughput(1, Scheduler::MSINR, cra) ==
        doctest::Approx(800177.4275145016).epsilon(1e-8));
  CHECK(c.rb_throughput(3, Scheduler::PF, dra) ==
        doctest::Approx(714723.6682740503).epsilon(1e-10));
  CHECK(e.rb_throughput(1, Scheduler::RR, cra) ==
        doctest::Approx(715977.5422338684).epsilon(1e-8));
  // k = 0 carries no traffic
  CHECK(c.rb_throughput(0, Scheduler::PF, cra) == doctest::Approx(0.0));
  // multiuser diversity gain for PF/MSINR, none for RR
  CHECK(c.rb_throughput(4, Scheduler::PF, cra) > c.rb_throughput(1, Scheduler::PF, cra));
  CHECK(c.rb_throughput(4, Scheduler::MSINR, cra) > c.rb_throughput(1, Scheduler::MSINR, cra));
  CHECK(c.rb_throughput(4, Scheduler::RR, cra) ==
        doctest::Approx(c.rb_throughput(1, Scheduler::RR, cra)).epsilon(1e-12));
}

TEST_CASE("all-k throughput agrees with single-k calls") {
  const RegionSinr c = centre_engine();
  const RateModel cra = CraParams{};
  const RateModel dra = McsTable::lte_default(0.1);
  for (auto* rm : {&cra, &dra}) {
    for (Scheduler s : {Scheduler::PF, Scheduler::MSINR, Scheduler::RR}) {
      const auto all = c.rb_throughput_all(12, s, *rm);
      REQUIRE(all.size() == 13);
      CHECK(all[0] == doctest::Approx(0.0));
      for (int k : {1, 2, 5, 12}) {
        const double single = c.rb_throughput(k, s, *rm);
        CHECK(all[k] == doctest::Approx(single).epsilon(1e-9));
      }
      // multiuser diversity is monotone in k (weakly for RR)
      for (int k = 2; k <= 12; ++k) CHECK(all[k] >= all[k - 1] - 1e-6 * all[k - 1]);
    }
  }
}

TEST_CASE("denser distance grids change nothing material") {
  const RateModel cra = CraParams{};
  const auto r64 = centre_engine(64).rb_throughput(3, Scheduler::PF, cra);
  const auto r96 = centre_engine(96).rb_throughput(3, Scheduler::PF, cra);
  const auto r128 = centre_engine(128).rb_throughput(3, Scheduler::PF, cra);
  CHECK(std::abs(r96 / r64 - 1.0) < 1e-6);
  CHECK(std::abs(r128 / r64 - 1.0) < 1e-6);
}

TEST_CASE("angular averaging is a small correction") {
  const RateModel cra = CraParams{};
  const auto q1 = edge_engine(64, 1).rb_throughput(2, Scheduler::PF, cra);
  const auto q8 = edge_engine(64, 8).rb_throughput(2, Scheduler::PF, cra);
  CHECK(std::abs(q8 / q1 - 1.0) < 2e-3);
}

TEST_CASE("rayleigh ergodic capacity closed form in an interference-free narrow ring") {
  // One user on a thin ring with interferers removed: E[log2(1+g E/noise)] =
  // log2(e) * exp(1/s) * E1(1/s) with s = g/noise the mean SNR. Compare the
  // CRA rb throughput (RR, k=1) on an almost-degenerate annulus against it.
  const double d = 200.0;
  RegionBounds ring{Region::Centre, d * (1.0 - 1e-9), d * (1.0 + 1e-9)};
  // geometry with interferers pushed out by a huge hex side: their power is
  // negligible relative to noise at this distance
  const NetworkGeometry far = NetworkGeometry::from_hex_side(5e7, 1.0);
  const FfrPartition part = FfrPartition::from_zeta(0.7, 0.52, 100);
  const RegionSinr eng(Region::Centre, ring, kRp, far, part, 8, 1);
  const double g = per_subcarrier_power(kRp, part) * kRp.antenna_gain() *
                   db_to_linear(-pathloss_db(kRp, d));
  const double s = g / kRp.noise_watts();
  const double closed =
      kRp.bandwidth_per_rb() * std::numbers::log2e * std::exp(1.0 / s) * std::expint(-1.0 / s) *
      -1.0;  // E1(x) = -Ei(-x)
  const RateModel cra = CraParams{};
  CHECK(eng.rb_throughput(1, Scheduler::RR, cra) == doctest::Approx(closed).epsilon(1e-6));

  // and a direct monte carlo of the same expectation
  std::mt19937_64 gen(3);
  std::exponential_distribution<double> expd(1.0);
  double acc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) acc += std::log2(1.0 + s * expd(gen));
  acc = acc / n * kRp.bandwidth_per_rb();
  CHECK(eng.rb_throughput(1, Scheduler::RR, cra) == doctest::Approx(acc).epsilon(5e-3));
}

TEST_CASE("cell throughput frozen values") {
  LoadModel load;
  load.mean_users = 8.0;
  const RateModel cra = CraParams{};
  const RateModel dra = McsTable::lte_default(0.1);
  struct Row {
    Scheduler s;
    const RateModel* rm;
    double want;
  };
  const Row rows[] = {
      {Scheduler::PF, &cra, 3.8239834118143605},   {Scheduler::PF, &dra, 2.7182640569778576},
      {Scheduler::MSINR, &cra, 4.557824786070766}, {Scheduler::MSINR, &dra, 3.063472714561657},
      {Scheduler::RR, &cra, 2.889588117791684},    {Scheduler::RR, &dra, 2.04910972158505},
  };
  for (const auto& r : rows) {
    const auto rep = cell_throughput(load, kPart, r.s, *r.rm, kRp, kGeo);
    CHECK(rep.tau_bpshz_rb == doctest::Approx(r.want).epsilon(1e-9));
    CHECK(rep.eta_bps ==
          doctest::Approx(r.want * kRp.bandwidth_per_rb() * kPart.N_b).epsilon(1e-9));
    CHECK(rep.truncation_k_max == 25);
    CHECK(rep.provenance == "analytical");
  }
  const auto rr = cell_throughput(load, kPart, Scheduler::RR, cra, kRp, kGeo);
  CHECK(rr.tau_centre == doctest::Approx(4.353700321812861).epsilon(1e-9));
  CHECK(rr.tau_edge == doctest::Approx(3.910399690306226).epsilon(1e-9));
  const auto ms = cell_throughput(load, kPart, Scheduler::MSINR, cra, kRp, kGeo);
  CHECK(ms.per_ue_tau_centre == doctest::Approx(3.6797607922257285).epsilon(1e-9));
  CHECK(ms.per_ue_tau_edge == doctest::Approx(0.8780639938450369).epsilon(1e-9));
  const auto pf = cell_throughput(load, kPart, Scheduler::PF, cra, kRp, kGeo);
  CHECK(pf.per_ue_tau_centre == doctest::Approx(0.7633115051113937).epsilon(1e-9));
  CHECK(pf.per_ue_tau_edge == doctest::Approx(0.2112068928377609).epsilon(1e-9));
  CHECK(!pf.per_ue_flagged);
}

TEST_CASE("cell throughput degenerate partitions") {
  LoadModel load;
  load.mean_users = 8.0;
  const RateModel cra = CraParams{};
  // zeta = 1: no edge band; frozen value
  const auto z1 = cell_throughput(load, FfrPartition::from_zeta(0.7, 1.0, 100), Scheduler::RR,
                                  cra, kRp, kGeo);
  CHECK(z1.tau_bpshz_rb == doctest::Approx(4.353598420362254).epsilon(1e-9));
  CHECK(z1.tau_edge == doctest::Approx(0.0));
  // omega = 1: everyone is a centre user, edge RBs idle; frozen value
  const auto w1 = cell_throughput(load, FfrPartition::from_zeta(1.0, 0.52, 100), Scheduler::RR,
                                  cra, kRp, kGeo);
  CHECK(w1.tau_bpshz_rb == doctest::Approx(1.4534988307084415).epsilon(1e-9));
  CHECK(w1.tau_edge == doctest::Approx(0.0));
  // omega at the lower limit: everyone is an edge user
  const auto w0 = cell_throughput(load, FfrPartition::from_zeta(35.0 / 500.0, 0.52, 100),
                                  Scheduler::RR, cra, kRp, kGeo);
  CHECK(w0.tau_centre == doctest::Approx(0.0));
  CHECK(w0.tau_bpshz_rb > 0.0);
  // zero load: nothing flows anywhere
  LoadModel none;
  none.mean_users = 0.0;
  const auto z = cell_throughput(none, kPart, Scheduler::PF, cra, kRp, kGeo);
  CHECK(z.tau_bpshz_rb == doctest::Approx(0.0));
  CHECK(z.eta_bps == doctest::Approx(0.0));
}

TEST_CASE("poisson thinning identity") {
  // Splitting Poisson(mu) users binomially with p = P_C is the same as two
  // independent Poisson populations with means mu p and mu (1-p). The cell
  // average must therefore equal
  //   N_C E_{k~Pois(mu p)}[eta_C(k)] + N_E E_{k~Pois(mu(1-p))}[eta_E(k)].
  LoadModel load;
  load.mean_users = 8.0;
  load.truncation_delta = 1e-10;
  const RateModel cra = CraParams{};
  const auto rep = cell_throughput(load, kPart, Scheduler::PF, cra, kRp, kGeo);

  const double mu = load.annulus_mean(kGeo);
  const double pc = p_centre(0.7, kGeo);
  const RegionSinr c = centre_engine();
  const RegionSinr e = edge_engine();
  const auto pmf_c = truncated_poisson_pmf(mu * pc, 1e-12);
  const auto pmf_e = truncated_poisson_pmf(mu * (1.0 - pc), 1e-12);
  const auto eta_c = c.rb_throughput_all(static_cast<int>(pmf_c.size()) - 1, Scheduler::PF, cra);
  const auto eta_e = e.rb_throughput_all(static_cast<int>(pmf_e.size()) - 1, Scheduler::PF, cra);
  double want = 0.0;
  for (size_t k = 0; k < pmf_c.size(); ++k) want += kPart.N_C * pmf_c[k] * eta_c[k];
  for (size_t k = 0; k < pmf_e.size(); ++k) want += kPart.N_E * pmf_e[k] * eta_e[k];
  CHECK(rep.eta_bps == doctest::Approx(want).epsilon(1e-7));
}

TEST_CASE("per-ue tau definitions and guards") {
  const double M = 7.9608, pc = 0.4874886946035574;
  // MSINR: region shares, no division by the population
  const auto ms = per_ue_tau(Scheduler::MSINR, kPart, M, pc, 7.0766, 5.4879);
  CHECK(ms.centre == doctest::Approx(0.52 * 7.0766).epsilon(1e-12));
  CHECK(ms.edge == doctest::Approx(0.48 * 5.4879 / 3.0).epsilon(1e-12));
  CHECK(!ms.flagged);
  // PF divides by the expected per-region populations
  const auto pf = per_ue_tau(Scheduler::PF, kPart, M, pc, 5.6967, 5.3858);
  CHECK(pf.centre == doctest::Approx(0.52 * 5.6967 / (M * pc)).epsilon(1e-12));
  CHECK(pf.edge == doctest::Approx(0.48 / 3.0 * 5.3858 / (M * (1.0 - pc))).epsilon(1e-12));
  CHECK(!pf.flagged);
  // guards: P_C = 1 starves the edge population; 0/0 -> 0 with a flag
  const auto g0 = per_ue_tau(Scheduler::RR, kPart, M, 1.0, 4.0, 0.0);
  CHECK(g0.edge == doctest::Approx(0.0));
  CHECK(g0.flagged);
  // x/0 -> +inf with a flag
  const auto gi = per_ue_tau(Scheduler::RR, kPart, M, 1.0, 4.0, 2.0);
  CHECK(std::isinf(gi.edge));
  CHECK(gi.flagged);
}

TEST_CASE("throughput rises with the user count for opportunistic schedulers") {
  const RateModel cra = CraParams{};
  LoadModel lo, hi;
  lo.mean_users = 4.0;
  hi.mean_users = 32.0;
  for (Scheduler s : {Scheduler::PF, Scheduler::MSINR}) {
    const double t_lo = cell_throughput(lo, kPart, s, cra, kRp, kGeo).tau_bpshz_rb;
    const double t_hi = cell_throughput(hi, kPart, s, cra, kRp, kGeo).tau_bpshz_rb;
    CHECK(t_hi > t_lo);
  }
  // frozen M = 32 spot values
  LoadModel m32;
  m32.mean_users = 32.0;
  const auto ms = cell_throughput(m32, FfrPartition::from_zeta(0.5, 0.52, 100),
                                  Scheduler::MSINR, cra, kRp, kGeo);
  CHECK(ms.tau_bpshz_rb == doctest::Approx(6.7262330136582085).epsilon(1e-9));
  const auto pf = cell_throughput(m32, FfrPartition::from_zeta(0.3147368421052632, 0.52, 100),
                                  Scheduler::PF, cra, kRp, kGeo);
  CHECK(pf.tau_bpshz_rb == doctest::Approx(6.114307474553133).epsilon(1e-9));
}

TEST_CASE("scheduler ordering of cell throughput") {
  LoadModel load;
  load.mean_users = 8.0;
  const RateModel cra = CraParams{};
  const double rr = cell_throughput(load, kPart, Scheduler::RR, cra, kRp, kGeo).tau_bpshz_rb;
  const double pf = cell_throughput(load, kPart, Scheduler::PF, cra, kRp, kGeo).tau_bpshz_rb;
  const double ms = cell_throughput(load, kPart, Scheduler::MSINR, cra, kRp, kGeo).tau_bpshz_rb;
  CHECK(rr < pf);
  CHECK(pf < ms);
}

TEST_CASE("dra throughput is capped by the top rate") {
  const RegionSinr c = centre_engine();
  const RateModel dra = McsTable::lte_default(0.1);
  const auto all = c.rb_throughput_all(40, Scheduler::MSINR, dra);
  for (double v : all) CHECK(v <= kRp.bandwidth_per_rb() * 5.55 * (1.0 + 1e-12));
}

TEST_CASE("input validation") {
  LoadModel load;
  load.mean_users = 8.0;
  const RateModel cra = CraParams{};
  // partition and radio RB totals must agree
  RadioParams rp = kRp;
  rp.N_b = 50;
  CHECK_THROWS_AS(cell_throughput(load, kPart, Scheduler::PF, cra, rp, kGeo), ConfigError);
  LoadModel bad;
  bad.mean_users = -1.0;
  CHECK_THROWS_AS(cell_throughput(bad, kPart, Scheduler::PF, cra, kRp, kGeo), ConfigError);
}
