#include "ffrplan/channel.hpp"

#include <cmath>
#include <sstream>

#include "ffrplan/errors.hpp"
#include "ffrplan/units.hpp"

namespace ffr {

RadioParams RadioParams::lte_default() {
  RadioParams rp;
  rp.P_T = dbm_to_watts(46.0);
  rp.tx_antenna_gain_db = 14.0;
  rp.K_db = 15.3;
  rp.alpha = 3.76;
  rp.N_0 = dbm_to_watts(-174.0);  // per Hz
  rp.noise_figure_db = 7.0;
  rp.delta_f = 15e3;
  rp.N_sc = 12;
  rp.T_o = 66.7e-6;
  rp.T_cp = 33.34e-6 / 7.0;  // short CP averaged over the 7 symbols of a slot
  rp.N_o = 7;
  rp.N_b = 100;
  return rp;
}

double RadioParams::noise_watts() const {
  return db_to_linear(noise_figure_db) * N_0 * delta_f;
}

double RadioParams::antenna_gain() const { return db_to_linear(tx_antenna_gain_db); }

void RadioParams::validate() const {
  if (!(P_T > 0.0)) throw ConfigError("radio: transmit power must be > 0");
  if (!(N_0 > 0.0)) throw ConfigError("radio: noise PSD must be > 0");
  if (!(delta_f > 0.0)) throw ConfigError("radio: subcarrier spacing must be > 0");
  if (N_sc < 1) throw ConfigError("radio: subcarriers per RB must be >= 1");
  if (!(T_o > 0.0) || !(T_cp >= 0.0)) throw ConfigError("radio: symbol timings must be positive");
  if (N_o < 1) throw ConfigError("radio: symbols per slot must be >= 1");
  if (N_b < 1) throw ConfigError("radio: total RBs must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("radio: path-loss exponent must be > 0");
}

double pathloss_db(const RadioParams& rp, double d) {
  if (!(d > 0.0)) throw ConfigError("pathloss_db: distance must be > 0");
  return rp.K_db + 10.0 * rp.alpha * std::log10(d);
}

double per_subcarrier_power(double P_T, int N_sc, int N_C, int N_E) {
  if (N_C + N_E < 1) throw ConfigError("per_subcarrier_power: partition has no RBs");
  if (!(P_T > 0.0) || N_sc < 1) throw ConfigError("per_subcarrier_power: invalid parameters");
  return P_T / (static_cast<double>(N_sc) * (N_C + N_E));
}

double per_subcarrier_power(const RadioParams& rp, const FfrPartition& part) {
  return per_subcarrier_power(rp.P_T, rp.N_sc, part.N_C, part.N_E);
}

AvgPowerProfile avg_power_profile(double d, double theta, Region band, const RadioParams& rp,
                                  const NetworkGeometry& geo, const FfrPartition& part) {
  if (!(d >= geo.min_distance() && d <= geo.circle_radius())) {
    std::ostringstream os;
    os << "avg_power_profile: d=" << d << " outside [R_0m, R_m]";
    throw ConfigError(os.str());
  }
  const double P_c = per_subcarrier_power(rp, part);
  const double gain = rp.antenna_gain();
  AvgPowerProfile profile;
  profile.signal = P_c * gain * db_to_linear(-pathloss_db(rp, d));
  profile.noise = rp.noise_watts();
  const std::vector<int>& phi = geo.interferers(band);
  profile.interferers.reserve(phi.size());
  for (int b : phi) {
    const double db = geo.interferer_distance(d, theta, b);
    profile.interferers.push_back(P_c * gain * db_to_linear(-pathloss_db(rp, db)));
  }
  return profile;
}

double conditional_sinr_cdf(double x, const AvgPowerProfile& profile) {
  if (x < 0.0) throw ConfigError("conditional_sinr_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  double e = x * profile.noise / profile.signal;
  for (double gb : profile.interferers) e += std::log1p(x * gb / profile.signal);
  return -std::expm1(-e);
}

}  // namespace ffr
