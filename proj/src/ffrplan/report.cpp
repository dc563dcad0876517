#include "ffrplan/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "ffrplan/errors.hpp"

namespace ffr {

nlohmann::json report_to_json(const ThroughputReport& rep) {
  return nlohmann::json{{"eta_bps", rep.eta_bps},
                        {"tau_bpshz_rb", rep.tau_bpshz_rb},
                        {"tau_centre", rep.tau_centre},
                        {"tau_edge", rep.tau_edge},
                        {"per_ue_tau_centre", rep.per_ue_tau_centre},
                        {"per_ue_tau_edge", rep.per_ue_tau_edge},
                        {"per_ue_flagged", rep.per_ue_flagged},
                        {"truncation_k_max", rep.truncation_k_max},
                        {"quadrature_error", rep.quadrature_error},
                        {"provenance", rep.provenance}};
}

nlohmann::json sim_model_to_json(const SimModelReport& rep) {
  nlohmann::json j = report_to_json(rep.report);
  j["tau_ci95_rel"] = rep.tau_ci95_rel;
  j["tau_centre_ci95_rel"] = rep.tau_centre_ci95_rel;
  j["tau_edge_ci95_rel"] = rep.tau_edge_ci95_rel;
  j["ci_met"] = rep.ci_met;
  j["max_rb_bps"] = rep.max_rb_bps;
  j["jain_centre"] = rep.jain_centre;
  j["jain_edge"] = rep.jain_edge;
  return j;
}

double relative_error(double analytical, double simulated) {
  if (simulated == 0.0)
    return analytical == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::abs(analytical - simulated) / std::abs(simulated);
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
}

}  // namespace ffr
