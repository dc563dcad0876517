#include "ffrplan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ffrplan/errors.hpp"
#include "ffrplan/quadrature.hpp"

namespace ffr {

namespace {

constexpr double kLog2E = 1.4426950408889634;  // log2(e)

// Integer power with exact k = 1 behaviour (pow-by-squaring).
double ipow(double base, int k) {
  double r = 1.0;
  double b = base;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

double binom_log_pmf(int k, int k_C, double log_p, double log_q) {
  return std::lgamma(k + 1.0) - std::lgamma(k_C + 1.0) - std::lgamma(k - k_C + 1.0) +
         k_C * log_p + (k - k_C) * log_q;
}

}  // namespace

const char* scheduler_name(Scheduler s) {
  switch (s) {
    case Scheduler::PF: return "pf";
    case Scheduler::MSINR: return "msinr";
    case Scheduler::RR: return "rr";
  }
  return "?";
}

Scheduler scheduler_from_name(const std::string& name) {
  if (name == "pf" || name == "PF") return Scheduler::PF;
  if (name == "msinr" || name == "MSINR") return Scheduler::MSINR;
  if (name == "rr" || name == "RR") return Scheduler::RR;
  throw ConfigError("unknown scheduler '" + name + "' (expected pf, msinr or rr)");
}

double LoadModel::lambda_m(const NetworkGeometry& geo) const {
  const double R = geo.circle_radius();
  return mean_users / (M_PI * R * R);
}

double LoadModel::annulus_mean(const NetworkGeometry& geo) const {
  const double r0 = geo.min_distance() / geo.circle_radius();
  return mean_users * (1.0 - r0 * r0);
}

double p_centre(double omega, const NetworkGeometry& geo) {
  const double R_m = geo.circle_radius();
  const double R_0m = geo.min_distance();
  const double lo = R_0m / R_m;
  if (!(omega >= lo - 1e-12 && omega <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os << "p_centre: omega=" << omega << " outside [R_0m/R_m, 1]";
    throw ConfigError(os.str());
  }
  const double R_th = std::clamp(omega, lo, 1.0) * R_m;
  return (R_th * R_th - R_0m * R_0m) / (R_m * R_m - R_0m * R_0m);
}

std::vector<double> truncated_poisson_pmf(double mean, double delta) {
  if (!(mean >= 0.0)) throw ConfigError("poisson: mean must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("poisson: delta must be in (0, 1)");
  if (mean == 0.0) return {1.0};
  const double log_mean = std::log(mean);
  int K = static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(mean) + 10.0));
  for (int attempt = 0; attempt < 5; ++attempt) {
    std::vector<double> pmf(K + 1);
    double total = 0.0;
    int cut = -1;
    for (int k = 0; k <= K; ++k) {
      pmf[k] = std::exp(k * log_mean - mean - std::lgamma(k + 1.0));
      total += pmf[k];
      if (cut < 0 && total >= 1.0 - delta) cut = k;
    }
    if (cut >= 0) {
      pmf.resize(cut + 1);
      return pmf;
    }
    K *= 2;  // mass shortfall: widen the range and retry
  }
  std::ostringstream os;
  os << "poisson: cannot capture mass 1-" << delta << " for mean " << mean;
  throw NumericalError(os.str());
}

RegionSinr::RegionSinr(Region band, const RegionBounds& bounds, const RadioParams& rp,
                       const NetworkGeometry& geo, const FfrPartition& part, int distance_nodes,
                       int angle_nodes)
    : B_b_(rp.bandwidth_per_rb()) {
  if (distance_nodes < 2) throw ConfigError("region: need at least 2 distance nodes");
  if (angle_nodes < 1) throw ConfigError("region: need at least 1 angle node");
  if (bounds.empty()) return;
  const QuadratureRule& rule = gauss_legendre(distance_nodes);
  const double c = 0.5 * (bounds.R_U + bounds.R_L);
  const double h = 0.5 * (bounds.R_U - bounds.R_L);
  // factored form: the squared difference cancels catastrophically when the
  // region degenerates to a thin ring
  const double span = (bounds.R_U - bounds.R_L) * (bounds.R_U + bounds.R_L);
  nodes_.reserve(static_cast<size_t>(distance_nodes) * angle_nodes);
  for (int j = 0; j < angle_nodes; ++j) {
    // 60-degree sector by hexagonal symmetry; theta = 0 when angle_nodes == 1.
    const double theta = j * (M_PI / 3.0) / angle_nodes;
    for (int i = 0; i < distance_nodes; ++i) {
      const double d = c + h * rule.nodes[i];
      const AvgPowerProfile p = avg_power_profile(d, theta, band, rp, geo, part);
      Node node;
      node.weight = rule.weights[i] * h * (2.0 * d / span) / angle_nodes;
      node.a = p.noise / p.signal;
      node.ratios.reserve(p.interferers.size());
      for (double gb : p.interferers) node.ratios.push_back(gb / p.signal);
      nodes_.push_back(std::move(node));
    }
  }
  double wsum = 0.0;
  for (const Node& n : nodes_) wsum += n.weight;
  for (Node& n : nodes_) n.weight /= wsum;  // exact unit mass for the mixture
}

double RegionSinr::node_cdf(const Node& n, double x) const {
  if (x <= 0.0) return 0.0;
  double e = n.a * x;
  for (double r : n.ratios) e += std::log1p(x * r);
  return -std::expm1(-e);
}

double RegionSinr::tail_bound(double x) const {
  double worst = 0.0;
  for (const Node& n : nodes_) {
    double e = n.a * x;
    for (double r : n.ratios) e += std::log1p(x * r);
    worst = std::max(worst, std::exp(-e));
  }
  return worst;
}

double RegionSinr::avg_cdf(double x) const {
  if (empty()) throw ConfigError("region: avg_cdf on an empty region");
  double acc = 0.0;
  for (const Node& n : nodes_) acc += n.weight * node_cdf(n, x);
  return acc;
}

double RegionSinr::cond_cdf(double x, int k, Scheduler s) const {
  if (k < 1) throw ConfigError("cond_cdf: k must be >= 1 (empty regions are the caller's case)");
  if (empty()) throw ConfigError("region: cond_cdf on an empty region");
  switch (s) {
    case Scheduler::PF: {
      double acc = 0.0;
      for (const Node& n : nodes_) acc += n.weight * ipow(node_cdf(n, x), k);
      return acc;
    }
    case Scheduler::MSINR:
      return ipow(avg_cdf(x), k);
    case Scheduler::RR:
      return avg_cdf(x);
  }
  return 0.0;
}

double RegionSinr::rb_throughput(int k, Scheduler s, const RateModel& rm,
                                 double* quad_error) const {
  if (k < 0) throw ConfigError("rb_throughput: k must be >= 0");
  if (quad_error) *quad_error = 0.0;
  if (k == 0 || empty()) return 0.0;
  if (is_dra(rm)) {
    const McsTable& table = std::get<McsTable>(rm);
    const int Nm = table.num_modes();
    double eta = 0.0;
    double F_prev = cond_cdf(table.threshold(1), k, s);
    for (int m = 1; m <= Nm; ++m) {
      const double F_next = (m == Nm) ? 1.0 : cond_cdf(table.threshold(m + 1), k, s);
      eta += table.mode(m).bits_per_symbol * (F_next - F_prev);
      F_prev = F_next;
    }
    return B_b_ * eta;
  }
  const CraParams& cra = std::get<CraParams>(rm);
  const double lambda = cra.coding_gap;
  auto integrand = [&](double u) {
    const double x = lambda * u / (1.0 - u);
    return (1.0 - cond_cdf(x, k, s)) / (1.0 - u);
  };
  // One straight pass fixes the scale, then the adaptive run targets 1e-9 of it.
  const double scale = std::abs(gl_integrate(integrand, 0.0, 1.0, 32));
  const AdaptiveResult r =
      gk15_adaptive(integrand, 0.0, 1.0, 1e-9 * std::max(scale, 1e-12), 1e-9);
  if (quad_error) *quad_error = B_b_ * kLog2E * r.error_estimate;
  return B_b_ * kLog2E * r.value;
}

std::vector<double> RegionSinr::rb_throughput_all(int k_max, Scheduler s, const RateModel& rm,
                                                  double* quad_error) const {
  if (k_max < 0) throw ConfigError("rb_throughput_all: k_max must be >= 0");
  if (quad_error) *quad_error = 0.0;
  std::vector<double> eta(k_max + 1, 0.0);
  if (empty() || k_max == 0) return eta;
  if (s == Scheduler::RR) {
    const double value = rb_throughput(1, Scheduler::MSINR, rm, quad_error);
    std::fill(eta.begin() + 1, eta.end(), value);
    return eta;
  }

  const size_t N = nodes_.size();
  if (is_dra(rm)) {
    const McsTable& table = std::get<McsTable>(rm);
    const int Nm = table.num_modes();
    // cdf_[i][m] at the mode switching thresholds.
    std::vector<double> cdf(N * Nm);
    for (size_t i = 0; i < N; ++i)
      for (int m = 0; m < Nm; ++m) cdf[i * Nm + m] = node_cdf(nodes_[i], table.threshold(m + 1));
    std::vector<double> pow_buf(cdf);
    std::vector<double> Fk(Nm);
    std::vector<double> base;  // MSINR: distance-averaged CDF at the thresholds
    if (s == Scheduler::MSINR) {
      base.assign(Nm, 0.0);
      for (size_t i = 0; i < N; ++i)
        for (int m = 0; m < Nm; ++m) base[m] += nodes_[i].weight * cdf[i * Nm + m];
      Fk = base;
    }
    for (int k = 1; k <= k_max; ++k) {
      if (s == Scheduler::PF) {
        std::fill(Fk.begin(), Fk.end(), 0.0);
        for (size_t i = 0; i < N; ++i) {
          const double w = nodes_[i].weight;
          for (int m = 0; m < Nm; ++m) Fk[m] += w * pow_buf[i * Nm + m];
        }
      }
      double acc = 0.0;
      double F_prev = Fk[0];
      for (int m = 1; m <= Nm; ++m) {
        const double F_next = (m == Nm) ? 1.0 : Fk[m];
        acc += table.mode(m).bits_per_symbol * (F_next - F_prev);
        F_prev = F_next;
      }
      eta[k] = B_b_ * acc;
      if (k == k_max) break;
      if (s == Scheduler::PF) {
        for (size_t i = 0; i < N; ++i)
          for (int m = 0; m < Nm; ++m) pow_buf[i * Nm + m] *= cdf[i * Nm + m];
      } else {
        for (int m = 0; m < Nm; ++m) Fk[m] *= base[m];
      }
    }
    return eta;
  }

  const CraParams& cra = std::get<CraParams>(rm);
  const double lambda = cra.coding_gap;
  // Upper cutoff: beyond x_hi even the k_max-user maximum has negligible tail,
  // since 1 - F^A(x|k) <= k * max_i (1 - F(x|d_i)).
  double x_hi = 1.0;
  while (tail_bound(x_hi) * k_max > 1e-14 && x_hi < 1e300) x_hi *= 2.0;
  const double v0 = std::log(lambda);
  const double v1 = std::log(lambda + x_hi);
  const QuadratureRule& rule = gauss_legendre(16);

  double eta1_prev = 0.0, etaK_prev = 0.0, rel = 1.0;
  for (int panels = 8; panels <= 256; panels *= 2) {
    const size_t J = static_cast<size_t>(panels) * rule.nodes.size();
    std::vector<double> xw(J), cdf(N * J);
    {
      std::vector<double> xs(J);
      for (int p = 0; p < panels; ++p) {
        const double a = v0 + (v1 - v0) * p / panels;
        const double b = v0 + (v1 - v0) * (p + 1) / panels;
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
          const size_t j = p * rule.nodes.size() + q;
          xs[j] = std::exp(0.5 * (b - a) * rule.nodes[q] + 0.5 * (a + b)) - lambda;
          xw[j] = 0.5 * (b - a) * rule.weights[q];
        }
      }
      for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < J; ++j) cdf[i * J + j] = node_cdf(nodes_[i], xs[j]);
    }
    std::vector<double> Fk(J, 0.0);
    std::vector<double> pow_buf;
    std::vector<double> base;
    if (s == Scheduler::PF) {
      pow_buf = cdf;
    } else {
      base.assign(J, 0.0);
      for (size_t i = 0; i < N; ++i)
        for (size_t j = 0; j < J; ++j) base[j] += nodes_[i].weight * cdf[i * J + j];
      Fk = base;
    }
    for (int k = 1; k <= k_max; ++k) {
      if (s == Scheduler::PF) {
        std::fill(Fk.begin(), Fk.end(), 0.0);
        for (size_t i = 0; i < N; ++i) {
          const double w = nodes_[i].weight;
          for (size_t j = 0; j < J; ++j) Fk[j] += w * pow_buf[i * J + j];
        }
      }
      double acc = 0.0;
      for (size_t j = 0; j < J; ++j) acc += xw[j] * (1.0 - Fk[j]);
      eta[k] = B_b_ * kLog2E * acc;
      if (k == k_max) break;
      if (s == Scheduler::PF) {
        for (size_t i = 0; i < N; ++i)
          for (size_t j = 0; j < J; ++j) pow_buf[i * J + j] *= cdf[i * J + j];
      } else {
        for (size_t j = 0; j < J; ++j) Fk[j] *= base[j];
      }
    }
    if (panels > 8) {
      const double r1 = std::abs(eta[1] - eta1_prev) / std::max(std::abs(eta[1]), 1e-300);
      const double rK =
          std::abs(eta[k_max] - etaK_prev) / std::max(std::abs(eta[k_max]), 1e-300);
      rel = std::max(r1, rK);
      if (rel <= 1e-11) {
        if (quad_error) *quad_error = rel;
        return eta;
      }
    }
    eta1_prev = eta[1];
    etaK_prev = eta[k_max];
  }
  std::ostringstream os;
  os << "rb_throughput_all: CRA panel refinement stalled (relative change " << rel << ")";
  throw NumericalError(os.str());
}

PerUeTau per_ue_tau(Scheduler s, const FfrPartition& part, double M, double P_C,
                    double tau_centre, double tau_edge) {
  const double num_c = part.zeta * tau_centre;
  const double num_e = (1.0 - part.zeta) * tau_edge / 3.0;
  if (s == Scheduler::MSINR) return {num_c, num_e, false};
  if (!(M > 0.0)) throw ConfigError("per_ue_tau: PF/RR definitions require M > 0");
  PerUeTau out;
  auto guard = [&out](double num, double den) {
    if (den > 0.0) return num / den;
    out.flagged = true;
    return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  out.centre = guard(num_c, M * P_C);
  out.edge = guard(num_e, M * (1.0 - P_C));
  return out;
}

ThroughputReport cell_throughput(const LoadModel& load, const FfrPartition& part, Scheduler s,
                                 const RateModel& rm, const RadioParams& rp,
                                 const NetworkGeometry& geo, int angle_nodes,
                                 int distance_nodes) {
  rp.validate();
  if (part.N_b != rp.N_b) throw ConfigError("cell_throughput: partition N_b != radio N_b");
  const double P_C = p_centre(part.omega, geo);
  const double mean = load.annulus_mean(geo);
  const std::vector<double> pmf = truncated_poisson_pmf(mean, load.truncation_delta);
  const int k_max = static_cast<int>(pmf.size()) - 1;

  const RegionBounds bc = geo.region_bounds(Region::Centre, part.omega);
  const RegionBounds be = geo.region_bounds(Region::Edge, part.omega);
  double err_c = 0.0, err_e = 0.0;
  std::vector<double> eta_c(k_max + 1, 0.0), eta_e(k_max + 1, 0.0);
  if (part.N_C > 0 && !bc.empty() && k_max >= 1) {
    RegionSinr engine(Region::Centre, bc, rp, geo, part, distance_nodes, angle_nodes);
    eta_c = engine.rb_throughput_all(k_max, s, rm, &err_c);
  }
  if (part.N_E > 0 && !be.empty() && k_max >= 1) {
    RegionSinr engine(Region::Edge, be, rp, geo, part, distance_nodes, angle_nodes);
    eta_e = engine.rb_throughput_all(k_max, s, rm, &err_e);
  }

  // eta = sum_k Pr{M_0=k} sum_{k_C} Binom(k_C; k, P_C) [N_C eta^C(k_C) + N_E eta^E(k-k_C)]
  double S_c = 0.0, S_e = 0.0;
  const bool degenerate_c = P_C >= 1.0, degenerate_e = P_C <= 0.0;
  const double log_p = degenerate_e ? 0.0 : std::log(P_C);
  const double log_q = degenerate_c ? 0.0 : std::log(1.0 - P_C);
  for (int k = 0; k <= k_max; ++k) {
    if (pmf[k] == 0.0) continue;
    if (degenerate_c) {
      S_c += pmf[k] * eta_c[k];
      S_e += pmf[k] * eta_e[0];
    } else if (degenerate_e) {
      S_c += pmf[k] * eta_c[0];
      S_e += pmf[k] * eta_e[k];
    } else {
      double ec = 0.0, ee = 0.0;
      for (int k_C = 0; k_C <= k; ++k_C) {
        const double w = std::exp(binom_log_pmf(k, k_C, log_p, log_q));
        ec += w * eta_c[k_C];
        ee += w * eta_e[k - k_C];
      }
      S_c += pmf[k] * ec;
      S_e += pmf[k] * ee;
    }
  }

  const double B_b = rp.bandwidth_per_rb();
  ThroughputReport rep;
  rep.tau_centre = S_c / B_b;
  rep.tau_edge = S_e / B_b;
  rep.eta_bps = part.N_C * S_c + part.N_E * S_e;
  rep.tau_bpshz_rb = rep.eta_bps / (B_b * part.N_b);
  if (mean > 0.0) {
    const PerUeTau ue = per_ue_tau(s, part, mean, P_C, rep.tau_centre, rep.tau_edge);
    rep.per_ue_tau_centre = ue.centre;
    rep.per_ue_tau_edge = ue.edge;
    rep.per_ue_flagged = ue.flagged;
  }
  rep.truncation_k_max = k_max;
  rep.quadrature_error = std::max(err_c, err_e);
  rep.provenance = "analytical";
  return rep;
}

}  // namespace ffr
