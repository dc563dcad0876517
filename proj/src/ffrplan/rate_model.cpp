#include "ffrplan/rate_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ffrplan/errors.hpp"

namespace ffr {

namespace {

// LTE/LTE-A transmission modes: exponential BLER fits (kappa1, kappa2) and the
// fitted-curve onset gamma^(m). The published table has 14 rows; label 3 is
// absent, and the row count (not the labels) drives all computations.
const std::vector<McsMode>& builtin_modes() {
  static const std::vector<McsMode> modes = {
      {1, 0.15, 3.270e3, 53.678, -8.217},  {2, 0.23, 4.067e4, 43.868, -6.163},
      {4, 0.60, 2.677e7, 26.549, -1.910},  {5, 0.88, 1.005e9, 19.785, 0.202},
      {6, 1.18, 9.340e9, 13.888, 2.183},   {7, 1.48, 1.160e10, 8.790, 4.210},
      {8, 1.91, 1.443e11, 6.358, 6.065},   {9, 2.41, 1.000e10, 3.590, 8.071},
      {10, 2.73, 1.000e10, 2.373, 9.869},  {11, 3.32, 1.000e10, 1.526, 11.790},
      {12, 3.90, 1.000e10, 0.991, 13.663}, {13, 4.52, 1.000e10, 0.665, 15.396},
      {14, 5.12, 1.000e10, 0.426, 17.329}, {15, 5.55, 1.000e10, 0.268, 19.333},
  };
  return modes;
}

}  // namespace

McsTable::McsTable(std::vector<McsMode> modes, double target_bler)
    : modes_(std::move(modes)), target_bler_(target_bler) {
  if (modes_.empty()) throw ConfigError("mcs: table must contain at least one mode");
  double min_kappa1 = modes_.front().kappa1;
  for (const McsMode& m : modes_) {
    if (!(m.bits_per_symbol > 0.0) || !(m.kappa1 > 0.0) || !(m.kappa2 > 0.0)) {
      throw ConfigError("mcs: bits_per_symbol, kappa1 and kappa2 must all be > 0");
    }
    min_kappa1 = std::min(min_kappa1, m.kappa1);
  }
  if (!(target_bler > 0.0 && target_bler < min_kappa1 && target_bler < 1.0)) {
    throw ConfigError("mcs: target BLER must lie in (0, min(1, min kappa1))");
  }
  for (size_t i = 1; i < modes_.size(); ++i) {
    if (!(modes_[i].bits_per_symbol > modes_[i - 1].bits_per_symbol)) {
      throw ConfigError("mcs: bits_per_symbol must be strictly increasing");
    }
  }
  thresholds_.reserve(modes_.size());
  for (const McsMode& m : modes_) {
    thresholds_.push_back(std::log(m.kappa1 / target_bler) / m.kappa2);
  }
  for (size_t i = 1; i < thresholds_.size(); ++i) {
    if (!(thresholds_[i] > thresholds_[i - 1])) {
      std::ostringstream os;
      os << "mcs: thresholds not strictly increasing (rows " << i << "/" << i + 1
         << "); table inconsistent with target BLER " << target_bler;
      throw ConfigError(os.str());
    }
  }
}

McsTable McsTable::lte_default(double target_bler) {
  return McsTable(builtin_modes(), target_bler);
}

McsTable McsTable::from_csv(const std::string& path, double target_bler) {
  std::ifstream in(path);
  if (!in) throw ConfigError("mcs: cannot open CSV file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("mcs: empty CSV file: " + path);
  // Tolerate trailing CR from CRLF files.
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "mode,bits_per_symbol,kappa1,kappa2,gamma_db") {
    throw ConfigError("mcs: CSV header must be 'mode,bits_per_symbol,kappa1,kappa2,gamma_db'");
  }
  std::vector<McsMode> modes;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    McsMode m;
    char c1, c2, c3, c4;
    if (!(row >> m.label >> c1 >> m.bits_per_symbol >> c2 >> m.kappa1 >> c3 >> m.kappa2 >> c4 >>
          m.gamma_db) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',') {
      std::ostringstream os;
      os << "mcs: malformed CSV row at line " << lineno << " of " << path;
      throw ConfigError(os.str());
    }
    std::string rest;
    if (row >> rest) {
      std::ostringstream os;
      os << "mcs: trailing data at line " << lineno << " of " << path;
      throw ConfigError(os.str());
    }
    modes.push_back(m);
  }
  return McsTable(std::move(modes), target_bler);
}

const McsMode& McsTable::mode(int m) const {
  if (m < 1 || m > num_modes()) throw ConfigError("mcs: mode index out of range");
  return modes_[m - 1];
}

double McsTable::threshold(int m) const {
  if (m < 1 || m > num_modes() + 1) throw ConfigError("mcs: threshold index out of range");
  if (m == num_modes() + 1) return std::numeric_limits<double>::infinity();
  return thresholds_[m - 1];
}

double McsTable::bler(double gamma, int m) const {
  const McsMode& mode_m = mode(m);
  const double floor_lin = std::pow(10.0, mode_m.gamma_db / 10.0);
  if (gamma < floor_lin) return 1.0;
  return std::min(1.0, mode_m.kappa1 * std::exp(-mode_m.kappa2 * gamma));
}

int McsTable::select_mode(double gamma) const {
  if (!(gamma >= 0.0)) throw ConfigError("mcs: select_mode requires gamma >= 0");
  const auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), gamma);
  return static_cast<int>(it - thresholds_.begin());
}

double cra_rate(double gamma, const CraParams& cra) {
  if (!(gamma >= 0.0)) throw ConfigError("cra_rate: gamma must be >= 0");
  if (!(cra.coding_gap >= 1.0)) throw ConfigError("cra: coding gap must be >= 1");
  if (!(cra.T_o > 0.0)) throw ConfigError("cra: T_o must be > 0");
  return std::log2(1.0 + gamma / cra.coding_gap) / cra.T_o;
}

}  // namespace ffr
