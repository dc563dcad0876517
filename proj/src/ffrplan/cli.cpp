#include "ffrplan/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffrplan/acceptance.hpp"
#include "ffrplan/analysis.hpp"
#include "ffrplan/config.hpp"
#include "ffrplan/errors.hpp"
#include "ffrplan/montecarlo.hpp"
#include "ffrplan/optimizer.hpp"
#include "ffrplan/report.hpp"

namespace ffr {

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;  // resolved: --out > FFR_OUT_DIR > config.output_dir
  std::optional<std::string> design;
  std::optional<double> q;
  std::optional<double> zeta0;
};

RunConfig resolve_config(const CommonOpts& opts) {
  RunConfig cfg = opts.config_path.empty() ? RunConfig{} : load_config_file(opts.config_path);
  if (opts.seed) {
    cfg.seed = *opts.seed;
    cfg.sim.seed = *opts.seed;
  }
  if (!opts.out_dir.empty()) {
    cfg.output_dir = opts.out_dir;
  } else if (const char* env = std::getenv("FFR_OUT_DIR"); env && *env) {
    cfg.output_dir = env;
  }
  if (opts.design) cfg.design.kind = design_from_name(*opts.design);
  if (opts.q) {
    if (!(*opts.q >= 0.0 && *opts.q <= 1.0)) throw ConfigError("--q must lie in [0, 1]");
    cfg.design.q = *opts.q;
  }
  if (opts.zeta0) cfg.design.zeta0 = *opts.zeta0;
  std::filesystem::create_directories(cfg.output_dir);
  return cfg;
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::vector<double> analyze_omegas(const RunConfig& cfg) {
  if (cfg.sweep_omega_points == 0) return {cfg.omega};
  const double lo = cfg.geometry.min_distance() / cfg.geometry.circle_radius();
  std::vector<double> out(cfg.sweep_omega_points);
  for (int i = 0; i < cfg.sweep_omega_points; ++i)
    out[i] = std::min(1.0, lo + (1.0 - lo) * i / (cfg.sweep_omega_points - 1));
  return out;
}

int cmd_analyze(const RunConfig& cfg) {
  std::ostringstream csv;
  csv << "M,omega,zeta,scheduler,rate_model,tau,tau_centre,tau_edge\n";
  for (double M : cfg.mean_users) {
    for (Scheduler s : cfg.schedulers) {
      for (const RateModel& rm : cfg.rate_models) {
        for (double omega : analyze_omegas(cfg)) {
          const FfrPartition part = FfrPartition::from_zeta(omega, cfg.zeta, cfg.radio.N_b);
          const ThroughputReport rep = cell_throughput(cfg.load(M), part, s, rm, cfg.radio,
                                                       cfg.geometry, cfg.angle_nodes,
                                                       cfg.distance_nodes);
          csv << num(M) << ',' << num(omega) << ',' << num(cfg.zeta) << ',' << scheduler_name(s)
              << ',' << rate_model_name(rm) << ',' << num(rep.tau_bpshz_rb) << ','
              << num(rep.tau_centre) << ',' << num(rep.tau_edge) << '\n';
        }
      }
    }
  }
  const std::string path = cfg.output_dir + "/analyze.csv";
  write_text_file(path, csv.str());
  std::cout << "wrote " << path << std::endl;
  return 0;
}

int cmd_optimize(const RunConfig& cfg) {
  const std::string ledger = cfg.output_dir + "/ledger.csv";
  json all = json::array();
  for (double M : cfg.mean_users) {
    for (Scheduler s : cfg.schedulers) {
      for (const RateModel& rm : cfg.rate_models) {
        const DesignContext ctx = cfg.design_context(M, s, rm);
        DesignSolution sol;
        switch (cfg.design.kind) {
          case DesignKind::FxD: sol = solve_fxd(ctx, cfg.design.zeta0); break;
          case DesignKind::ApD: sol = solve_apd(ctx); break;
          case DesignKind::QoScD: sol = solve_qoscd(ctx, cfg.design.q); break;
        }
        append_ledger(ledger, ctx, sol);
        json j{{"design", sol.design},
               {"scheduler", scheduler_name(s)},
               {"rate_model", rate_model_name(rm)},
               {"M", M},
               {"omega_star", sol.omega_star},
               {"zeta_star", sol.zeta_star},
               {"tau_star", sol.tau_star},
               {"feasible", sol.feasible},
               {"plateau", sol.plateau},
               {"report", report_to_json(sol.report)}};
        if (sol.q) {
          j["q"] = *sol.q;
          j["constraint_slack"] = sol.constraint_slack;
        }
        all.push_back(j);
        std::cout << sol.design << ' ' << scheduler_name(s) << ' ' << rate_model_name(rm)
                  << " M=" << num(M) << " omega*=" << num(sol.omega_star)
                  << " zeta*=" << num(sol.zeta_star) << " tau*=" << num(sol.tau_star)
                  << " feasible=" << (sol.feasible ? 1 : 0) << std::endl;
      }
    }
  }
  write_text_file(cfg.output_dir + "/optimize.json", all.dump(2) + "\n");
  std::cout << "appended " << ledger << std::endl;
  return 0;
}

int cmd_simulate(const RunConfig& cfg) {
  // One simulation pass per (M, scheduler) covers both rate models; the JSON
  // carries the side-by-side comparison for every requested model.
  McsTable mcs = McsTable::lte_default();
  CraParams cra;
  bool want_cra = false, want_dra = false;
  for (const RateModel& rm : cfg.rate_models) {
    if (is_cra(rm)) {
      cra = std::get<CraParams>(rm);
      want_cra = true;
    } else {
      mcs = std::get<McsTable>(rm);
      want_dra = true;
    }
  }
  const FfrPartition part = cfg.partition();
  json runs = json::array();
  bool all_ci_met = true;
  for (double M : cfg.mean_users) {
    for (Scheduler s : cfg.schedulers) {
      const LoadModel load = cfg.load(M);
      const SimSummary sim =
          simulate(cfg.sim, load, part, s, cfg.radio, cfg.geometry, mcs, cra);
      json models;
      auto add_model = [&](const char* name, const RateModel& rm, const SimModelReport& mr) {
        const ThroughputReport ana = cell_throughput(load, part, s, rm, cfg.radio, cfg.geometry,
                                                     cfg.angle_nodes, cfg.distance_nodes);
        models[name] = {
            {"analytical", report_to_json(ana)},
            {"simulated", sim_model_to_json(mr)},
            {"relative_error",
             {{"tau", relative_error(ana.tau_bpshz_rb, mr.report.tau_bpshz_rb)},
              {"tau_centre", relative_error(ana.tau_centre, mr.report.tau_centre)},
              {"tau_edge", relative_error(ana.tau_edge, mr.report.tau_edge)}}},
            {"ci_met", mr.ci_met}};
        all_ci_met = all_ci_met && mr.ci_met;
      };
      if (want_cra) add_model("cra", cra, sim.cra);
      if (want_dra) add_model("dra", mcs, sim.dra);
      runs.push_back({{"M", M},
                      {"scheduler", scheduler_name(s)},
                      {"omega", cfg.omega},
                      {"zeta", cfg.zeta},
                      {"seed", sim.seed},
                      {"config_hash", cfg.hash()},
                      {"drops", sim.drops_run},
                      {"conservation_ok", sim.conservation_ok},
                      {"models", models}});

      std::ostringstream drops_csv;
      drops_csv << "drop,tau_cra,tau_dra\n";
      for (size_t i = 0; i < sim.per_drop_tau_cra.size(); ++i)
        drops_csv << i << ',' << num(sim.per_drop_tau_cra[i]) << ','
                  << num(sim.per_drop_tau_dra[i]) << '\n';
      std::ostringstream name;
      name << cfg.output_dir << "/drops_M" << M << '_' << scheduler_name(s) << ".csv";
      write_text_file(name.str(), drops_csv.str());
    }
  }
  const std::string path = cfg.output_dir + "/simulate.json";
  write_text_file(path, runs.dump(2) + "\n");
  std::cout << "wrote " << path << (all_ci_met ? "" : " (CI target NOT met)") << std::endl;
  return 0;
}

int cmd_validate(const RunConfig& cfg) {
  AcceptanceOptions opt;
  opt.seed = cfg.seed;
  opt.threads = cfg.sim.threads;
  std::ostringstream log;
  struct Tee : std::streambuf {
    std::streambuf *a, *b;
    int overflow(int c) override {
      if (c != EOF) {
        a->sputc(static_cast<char>(c));
        b->sputc(static_cast<char>(c));
      }
      return c;
    }
  };
  Tee tee;
  tee.a = std::cout.rdbuf();
  tee.b = log.rdbuf();
  std::ostream out(&tee);
  const bool ok = run_acceptance(out, opt);
  write_text_file(cfg.output_dir + "/acceptance.txt", log.str());
  return ok ? 0 : 4;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"ffrplan: FFR-aided OFDMA downlink planning (analysis, design, simulation)"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string command;
  std::string seed_str, design_str, q_str, zeta0_str;
  for (const char* name : {"analyze", "optimize", "simulate", "validate"}) {
    CLI::App* sub = app.add_subcommand(
        name, std::string(name) + (std::string(name) == "validate" ? " (acceptance suite)" : ""));
    sub->add_option("--config", opts.config_path, "JSON config file");
    sub->add_option("--seed", seed_str, "Seed override (u64)");
    sub->add_option("--out", opts.out_dir, "Output directory (overrides FFR_OUT_DIR)");
    if (std::string(name) == "optimize") {
      sub->add_option("--design", design_str, "Design problem: fxd, apd or qoscd");
      sub->add_option("--q", q_str, "QoScD fairness fraction");
      sub->add_option("--zeta0", zeta0_str, "FxD spectrum allocation factor");
    }
    sub->callback([&command, name]() { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    try {
      if (!seed_str.empty()) opts.seed = std::stoull(seed_str);
      if (!design_str.empty()) opts.design = design_str;
      if (!q_str.empty()) opts.q = std::stod(q_str);
      if (!zeta0_str.empty()) opts.zeta0 = std::stod(zeta0_str);
    } catch (const std::logic_error&) {
      throw ConfigError("flag values must be numeric (--seed u64, --q/--zeta0 float)");
    }
    const RunConfig cfg = resolve_config(opts);
    if (command == "analyze") return cmd_analyze(cfg);
    if (command == "optimize") return cmd_optimize(cfg);
    if (command == "simulate") return cmd_simulate(cfg);
    return cmd_validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << std::endl;
    return 3;
  }
}

}  // namespace ffr
