#pragma once

#include <string>

#include <json.hpp>

#include "ffrplan/analysis.hpp"
#include "ffrplan/montecarlo.hpp"

namespace ffr {

nlohmann::json report_to_json(const ThroughputReport& rep);
nlohmann::json sim_model_to_json(const SimModelReport& rep);

// |analytical - simulated| / |simulated|, with 0/0 -> 0 and x/0 -> inf.
double relative_error(double analytical, double simulated);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace ffr
