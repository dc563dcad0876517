#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace ffr {

struct McsMode {
  int label;               // table row label (not necessarily contiguous)
  double bits_per_symbol;  // rho
  double kappa1;
  double kappa2;
  double gamma_db;         // fitted-curve onset (validity floor)
};

// AMC staircase: BLER(gamma, m) = min(1, kappa1*exp(-kappa2*gamma)) above the
// validity floor, and switching thresholds Gamma^(m) = ln(kappa1/eps)/kappa2
// for a target BLER eps. Mode 0 means no transmission.
class McsTable {
 public:
  McsTable(std::vector<McsMode> modes, double target_bler);

  static McsTable lte_default(double target_bler = 0.1);
  static McsTable from_csv(const std::string& path, double target_bler = 0.1);

  int num_modes() const { return static_cast<int>(modes_.size()); }
  const McsMode& mode(int m) const;      // m in 1..num_modes()
  double target_bler() const { return target_bler_; }
  const std::vector<double>& thresholds() const { return thresholds_; }
  // Gamma^(m); m = num_modes()+1 returns +inf.
  double threshold(int m) const;
  double max_bits_per_symbol() const { return modes_.back().bits_per_symbol; }

  // Block error probability when transmitting with mode m at linear SINR gamma.
  double bler(double gamma, int m) const;
  // Largest m with Gamma^(m) <= gamma; 0 below the first threshold.
  int select_mode(double gamma) const;

 private:
  std::vector<McsMode> modes_;
  double target_bler_;
  std::vector<double> thresholds_;
};

struct CraParams {
  double coding_gap = 1.0;  // Lambda >= 1 (1 = Shannon limit)
  double T_o = 66.7e-6;     // useful symbol time [s]
};

// Gap-to-capacity rate (1/T_o) * log2(1 + gamma/Lambda) in bits/s per subcarrier.
double cra_rate(double gamma, const CraParams& cra);

using RateModel = std::variant<CraParams, McsTable>;

inline bool is_cra(const RateModel& rm) { return std::holds_alternative<CraParams>(rm); }
inline bool is_dra(const RateModel& rm) { return std::holds_alternative<McsTable>(rm); }
inline const char* rate_model_name(const RateModel& rm) { return is_cra(rm) ? "cra" : "dra"; }

}  // namespace ffr
