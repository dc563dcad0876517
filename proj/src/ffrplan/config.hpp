#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffrplan/analysis.hpp"
#include "ffrplan/channel.hpp"
#include "ffrplan/geometry.hpp"
#include "ffrplan/montecarlo.hpp"
#include "ffrplan/optimizer.hpp"
#include "ffrplan/partition.hpp"
#include "ffrplan/rate_model.hpp"

namespace ffr {

enum class DesignKind { FxD, ApD, QoScD };

const char* design_name(DesignKind k);
DesignKind design_from_name(const std::string& name);

struct DesignSpec {
  DesignKind kind = DesignKind::FxD;
  double zeta0 = 0.52;          // FxD spectrum allocation factor
  double q = 0.0;               // QoScD fairness fraction
  int omega_grid_points = 50;
};

// Parsed experiment description. Defaults reproduce the standard LTE macro
// parameter set; every field can be overridden from JSON, unknown keys are
// rejected by name.
struct RunConfig {
  int schema_version = 1;
  NetworkGeometry geometry = NetworkGeometry::from_circle_radius(500.0, 35.0);
  RadioParams radio = RadioParams::lte_default();
  double omega = 0.7;
  double zeta = 0.52;
  std::vector<Scheduler> schedulers = {Scheduler::PF};
  std::vector<RateModel> rate_models = {CraParams{}};
  std::vector<double> mean_users = {8.0};
  double truncation_delta = 1e-6;
  DesignSpec design;
  int sweep_omega_points = 0;   // 0: single-omega rows; >= 2: grid over [lo, 1]
  SimConfig sim;
  int angle_nodes = 1;
  int distance_nodes = 64;
  uint64_t seed = 1;
  std::string output_dir = "out";

  FfrPartition partition() const;
  LoadModel load(double users) const;
  DesignContext design_context(double users, Scheduler s, const RateModel& rm) const;

  // Canonical serialized form (sorted keys, fixed precision) and its FNV-1a hash.
  std::string canonical_json() const;
  std::string hash() const;
};

// Parse from a JSON file / JSON text. Unknown keys raise ConfigError naming the
// key; type mismatches raise ConfigError with the JSON context.
RunConfig load_config_file(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace ffr
