#pragma once

#include <vector>

#include "ffrplan/geometry.hpp"
#include "ffrplan/partition.hpp"

namespace ffr {

// Link-budget and OFDM numerology parameters (defaults: LTE downlink macro set).
struct RadioParams {
  double P_T;                  // total BS transmit power [W]
  double tx_antenna_gain_db;   // applied to every BS->UE link
  double K_db;                 // fixed path loss [dB]
  double alpha;                // path-loss exponent: L(d) = K_db + 10*alpha*log10(d)
  double N_0;                  // noise power spectral density [W/Hz]
  double noise_figure_db;      // receiver noise figure
  double delta_f;              // subcarrier spacing [Hz]
  int N_sc;                    // subcarriers per RB
  double T_o;                  // useful OFDM symbol time [s]
  double T_cp;                 // cyclic prefix time [s]
  int N_o;                     // OFDM symbols per slot
  int N_b;                     // total RBs

  static RadioParams lte_default();

  double bandwidth_per_rb() const { return N_sc * delta_f; }        // B_b
  double slot_duration() const { return N_o * (T_o + T_cp); }       // T_s
  double noise_watts() const;                                       // F * N_0 * delta_f
  double antenna_gain() const;                                      // linear
  void validate() const;
};

// Path loss K + 10*alpha*log10(d) in dB; d in metres, d > 0.
double pathloss_db(const RadioParams& rp, double d);

// Uniform per-subcarrier power P_c = P_T / (N_sc * (N_C + N_E)).
double per_subcarrier_power(double P_T, int N_sc, int N_C, int N_E);
double per_subcarrier_power(const RadioParams& rp, const FfrPartition& part);

// Mean received powers for a user at polar (d, theta): the serving link plus
// one entry per interferer of the band in force, all per subcarrier.
struct AvgPowerProfile {
  double signal = 0.0;              // W
  std::vector<double> interferers;  // W
  double noise = 0.0;               // W
};

AvgPowerProfile avg_power_profile(double d, double theta, Region band, const RadioParams& rp,
                                  const NetworkGeometry& geo, const FfrPartition& part);

// Pr{gamma <= x | d} for Rayleigh fading on every link: the signal power is
// exponential and the interference a sum of independent exponentials, giving
//   F(x) = 1 - exp(-x*noise/signal) * prod_b 1/(1 + x*gamma_b/signal).
// Evaluated in log space, so coinciding interferer powers are handled exactly.
double conditional_sinr_cdf(double x, const AvgPowerProfile& profile);

}  // namespace ffr
