#include "ffrplan/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ffrplan/errors.hpp"
#include "ffrplan/units.hpp"

namespace ffr {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError("config: unknown key '" + item.key() + "' in " + section);
  }
}

template <typename T>
T want(const json& obj, const std::string& section, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for '" + key + "' in " + section + ": " + e.what());
  }
}

RateModel parse_rate_model(const json& j) {
  if (!j.is_object()) throw ConfigError("config: rate_model entries must be objects");
  const std::string type = want<std::string>(j, "rate_model", "type", "cra");
  if (type == "cra") {
    reject_unknown(j, "rate_model", {"type", "coding_gap_db", "symbol_time_s"});
    CraParams cra;
    const double gap_db = want<double>(j, "rate_model", "coding_gap_db", 0.0);
    if (gap_db < 0.0) throw ConfigError("config: coding_gap_db must be >= 0");
    cra.coding_gap = db_to_linear(gap_db);
    cra.T_o = want<double>(j, "rate_model", "symbol_time_s", cra.T_o);
    if (!(cra.T_o > 0.0)) throw ConfigError("config: symbol_time_s must be > 0");
    return cra;
  }
  if (type == "dra") {
    reject_unknown(j, "rate_model", {"type", "target_bler", "table_csv"});
    const double bler = want<double>(j, "rate_model", "target_bler", 0.1);
    if (j.contains("table_csv"))
      return McsTable::from_csv(j.at("table_csv").get<std::string>(), bler);
    return McsTable::lte_default(bler);
  }
  throw ConfigError("config: rate_model type must be 'cra' or 'dra', got '" + type + "'");
}

}  // namespace

const char* design_name(DesignKind k) {
  switch (k) {
    case DesignKind::FxD: return "fxd";
    case DesignKind::ApD: return "apd";
    case DesignKind::QoScD: return "qoscd";
  }
  return "?";
}

DesignKind design_from_name(const std::string& name) {
  if (name == "fxd") return DesignKind::FxD;
  if (name == "apd") return DesignKind::ApD;
  if (name == "qoscd") return DesignKind::QoScD;
  throw ConfigError("config: unknown design '" + name + "' (expected fxd, apd or qoscd)");
}

FfrPartition RunConfig::partition() const { return FfrPartition::from_zeta(omega, zeta, radio.N_b); }

LoadModel RunConfig::load(double users) const {
  LoadModel lm;
  lm.mean_users = users;
  lm.truncation_delta = truncation_delta;
  return lm;
}

DesignContext RunConfig::design_context(double users, Scheduler s, const RateModel& rm) const {
  DesignContext ctx;
  ctx.radio = radio;
  ctx.geometry = geometry;
  ctx.load = load(users);
  ctx.scheduler = s;
  ctx.rate_model = rm;
  ctx.omega_grid_points = design.omega_grid_points;
  ctx.angle_nodes = angle_nodes;
  ctx.distance_nodes = distance_nodes;
  return ctx;
}

std::string RunConfig::canonical_json() const {
  json j;
  j["schema_version"] = schema_version;
  j["geometry"] = {{"cell_radius_m", geometry.circle_radius()},
                   {"min_distance_m", geometry.min_distance()}};
  j["radio"] = {{"tx_power_dbm", watts_to_dbm(radio.P_T)},
                {"antenna_gain_db", radio.tx_antenna_gain_db},
                {"pathloss_fixed_db", radio.K_db},
                {"pathloss_exponent", radio.alpha},
                {"noise_density_dbm_hz", watts_to_dbm(radio.N_0)},
                {"noise_figure_db", radio.noise_figure_db},
                {"subcarrier_spacing_hz", radio.delta_f},
                {"subcarriers_per_rb", radio.N_sc},
                {"symbol_time_s", radio.T_o},
                {"cyclic_prefix_s", radio.T_cp},
                {"symbols_per_slot", radio.N_o},
                {"total_rbs", radio.N_b}};
  j["partition"] = {{"omega", omega}, {"zeta", zeta}};
  json scheds = json::array();
  for (Scheduler s : schedulers) scheds.push_back(scheduler_name(s));
  j["scheduler"] = scheds;
  json rms = json::array();
  for (const RateModel& rm : rate_models) {
    if (is_cra(rm)) {
      const CraParams& cra = std::get<CraParams>(rm);
      rms.push_back({{"type", "cra"},
                     {"coding_gap_db", linear_to_db(cra.coding_gap)},
                     {"symbol_time_s", cra.T_o}});
    } else {
      const McsTable& t = std::get<McsTable>(rm);
      rms.push_back({{"type", "dra"}, {"target_bler", t.target_bler()}});
    }
  }
  j["rate_model"] = rms;
  j["load"] = {{"mean_users", mean_users}, {"truncation_delta", truncation_delta}};
  j["design"] = {{"type", design_name(design.kind)},
                 {"zeta0", design.zeta0},
                 {"q", design.q},
                 {"omega_grid_points", design.omega_grid_points}};
  j["sweep"] = {{"omega_points", sweep_omega_points}};
  j["sim"] = {{"drops", sim.drops},
              {"max_drops", sim.max_drops},
              {"slots", sim.slots},
              {"pf_window", sim.pf_window},
              {"warmup_slots", sim.warmup_slots},
              {"ci_target", sim.ci_target},
              {"threads", sim.threads}};
  j["angle_nodes"] = angle_nodes;
  j["distance_nodes"] = distance_nodes;
  j["seed"] = seed;
  return j.dump();  // nlohmann objects iterate in sorted key order
}

std::string RunConfig::hash() const {
  const std::string text = canonical_json();
  uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
  reject_unknown(root, "top level",
                 {"schema_version", "geometry", "radio", "partition", "scheduler", "rate_model",
                  "load", "design", "sweep", "sim", "angle_nodes", "distance_nodes", "seed",
                  "output_dir"});

  RunConfig cfg;
  cfg.schema_version = want<int>(root, "top level", "schema_version", 1);
  if (cfg.schema_version != 1)
    throw ConfigError("config: unsupported schema_version (expected 1)");

  if (root.contains("geometry")) {
    const json& g = root.at("geometry");
    reject_unknown(g, "geometry", {"cell_radius_m", "min_distance_m", "hex_side_m"});
    const double r0 = want<double>(g, "geometry", "min_distance_m", 35.0);
    if (g.contains("hex_side_m")) {
      if (g.contains("cell_radius_m"))
        throw ConfigError("config: give either hex_side_m or cell_radius_m, not both");
      cfg.geometry = NetworkGeometry::from_hex_side(g.at("hex_side_m").get<double>(), r0);
    } else {
      cfg.geometry =
          NetworkGeometry::from_circle_radius(want<double>(g, "geometry", "cell_radius_m", 500.0), r0);
    }
  }

  if (root.contains("radio")) {
    const json& r = root.at("radio");
    reject_unknown(r, "radio",
                   {"tx_power_dbm", "antenna_gain_db", "pathloss_fixed_db", "pathloss_exponent",
                    "noise_density_dbm_hz", "noise_figure_db", "subcarrier_spacing_hz",
                    "subcarriers_per_rb", "symbol_time_s", "cyclic_prefix_s", "symbols_per_slot",
                    "total_rbs"});
    RadioParams& rp = cfg.radio;
    rp.P_T = dbm_to_watts(want<double>(r, "radio", "tx_power_dbm", watts_to_dbm(rp.P_T)));
    rp.tx_antenna_gain_db = want<double>(r, "radio", "antenna_gain_db", rp.tx_antenna_gain_db);
    rp.K_db = want<double>(r, "radio", "pathloss_fixed_db", rp.K_db);
    rp.alpha = want<double>(r, "radio", "pathloss_exponent", rp.alpha);
    rp.N_0 = dbm_to_watts(want<double>(r, "radio", "noise_density_dbm_hz", watts_to_dbm(rp.N_0)));
    rp.noise_figure_db = want<double>(r, "radio", "noise_figure_db", rp.noise_figure_db);
    rp.delta_f = want<double>(r, "radio", "subcarrier_spacing_hz", rp.delta_f);
    rp.N_sc = want<int>(r, "radio", "subcarriers_per_rb", rp.N_sc);
    rp.T_o = want<double>(r, "radio", "symbol_time_s", rp.T_o);
    rp.T_cp = want<double>(r, "radio", "cyclic_prefix_s", rp.T_cp);
    rp.N_o = want<int>(r, "radio", "symbols_per_slot", rp.N_o);
    rp.N_b = want<int>(r, "radio", "total_rbs", rp.N_b);
    rp.validate();
  }

  if (root.contains("partition")) {
    const json& p = root.at("partition");
    reject_unknown(p, "partition", {"omega", "zeta", "edge_rbs"});
    cfg.omega = want<double>(p, "partition", "omega", cfg.omega);
    if (p.contains("edge_rbs")) {
      if (p.contains("zeta"))
        throw ConfigError("config: give either zeta or edge_rbs, not both");
      const int ne = p.at("edge_rbs").get<int>();
      cfg.zeta = FfrPartition::from_edge_rbs(cfg.omega, ne, cfg.radio.N_b).zeta;
    } else {
      cfg.zeta = want<double>(p, "partition", "zeta", cfg.zeta);
    }
  }

  if (root.contains("scheduler")) {
    const json& s = root.at("scheduler");
    cfg.schedulers.clear();
    if (s.is_string()) {
      cfg.schedulers.push_back(scheduler_from_name(s.get<std::string>()));
    } else if (s.is_array()) {
      for (const auto& item : s) cfg.schedulers.push_back(scheduler_from_name(item.get<std::string>()));
    } else {
      throw ConfigError("config: scheduler must be a string or array of strings");
    }
    if (cfg.schedulers.empty()) throw ConfigError("config: scheduler list is empty");
  }

  if (root.contains("rate_model")) {
    const json& r = root.at("rate_model");
    cfg.rate_models.clear();
    if (r.is_array()) {
      for (const auto& item : r) cfg.rate_models.push_back(parse_rate_model(item));
    } else {
      cfg.rate_models.push_back(parse_rate_model(r));
    }
    if (cfg.rate_models.empty()) throw ConfigError("config: rate_model list is empty");
  }

  if (root.contains("load")) {
    const json& l = root.at("load");
    reject_unknown(l, "load", {"mean_users", "truncation_delta"});
    if (l.contains("mean_users")) {
      const json& m = l.at("mean_users");
      cfg.mean_users.clear();
      if (m.is_array()) {
        for (const auto& item : m) cfg.mean_users.push_back(item.get<double>());
      } else {
        cfg.mean_users.push_back(m.get<double>());
      }
      if (cfg.mean_users.empty()) throw ConfigError("config: mean_users list is empty");
      for (double m_val : cfg.mean_users)
        if (!(m_val >= 0.0)) throw ConfigError("config: mean_users must be >= 0");
    }
    cfg.truncation_delta = want<double>(l, "load", "truncation_delta", cfg.truncation_delta);
    if (!(cfg.truncation_delta > 0.0 && cfg.truncation_delta < 1.0))
      throw ConfigError("config: truncation_delta must be in (0, 1)");
  }

  if (root.contains("design")) {
    const json& d = root.at("design");
    reject_unknown(d, "design", {"type", "zeta0", "q", "omega_grid_points"});
    cfg.design.kind = design_from_name(want<std::string>(d, "design", "type", "fxd"));
    cfg.design.zeta0 = want<double>(d, "design", "zeta0", cfg.design.zeta0);
    cfg.design.q = want<double>(d, "design", "q", cfg.design.q);
    cfg.design.omega_grid_points = want<int>(d, "design", "omega_grid_points", 50);
    if (cfg.design.omega_grid_points < 2)
      throw ConfigError("config: omega_grid_points must be >= 2");
  }

  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    reject_unknown(s, "sweep", {"omega_points"});
    cfg.sweep_omega_points = want<int>(s, "sweep", "omega_points", 0);
    if (cfg.sweep_omega_points != 0 && cfg.sweep_omega_points < 2)
      throw ConfigError("config: sweep omega_points must be 0 or >= 2");
  }

  if (root.contains("sim")) {
    const json& s = root.at("sim");
    reject_unknown(s, "sim",
                   {"drops", "max_drops", "slots", "pf_window", "warmup_slots", "ci_target",
                    "threads"});
    cfg.sim.drops = want<int>(s, "sim", "drops", cfg.sim.drops);
    cfg.sim.max_drops = want<int>(s, "sim", "max_drops", cfg.sim.max_drops);
    cfg.sim.slots = want<int>(s, "sim", "slots", cfg.sim.slots);
    cfg.sim.pf_window = want<int>(s, "sim", "pf_window", cfg.sim.pf_window);
    cfg.sim.warmup_slots = want<int>(s, "sim", "warmup_slots", cfg.sim.warmup_slots);
    cfg.sim.ci_target = want<double>(s, "sim", "ci_target", cfg.sim.ci_target);
    cfg.sim.threads = want<int>(s, "sim", "threads", cfg.sim.threads);
    cfg.sim.validate();
  }

  cfg.angle_nodes = want<int>(root, "top level", "angle_nodes", 1);
  cfg.distance_nodes = want<int>(root, "top level", "distance_nodes", 64);
  if (cfg.angle_nodes < 1) throw ConfigError("config: angle_nodes must be >= 1");
  if (cfg.distance_nodes < 2) throw ConfigError("config: distance_nodes must be >= 2");
  cfg.seed = want<uint64_t>(root, "top level", "seed", cfg.seed);
  cfg.output_dir = want<std::string>(root, "top level", "output_dir", cfg.output_dir);

  // Partition consistency check up front (nearest-value hint on failure).
  cfg.partition();
  const double lo = cfg.geometry.min_distance() / cfg.geometry.circle_radius();
  if (!(cfg.omega >= lo - 1e-12 && cfg.omega <= 1.0 + 1e-12)) {
    std::ostringstream os;
    os << "config: omega=" << cfg.omega << " outside [" << lo << ", 1]";
    throw ConfigError(os.str());
  }
  cfg.sim.seed = cfg.seed;
  return cfg;
}

}  // namespace ffr
