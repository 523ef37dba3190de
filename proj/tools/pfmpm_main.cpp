#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pfmpm/config.hpp"
#include "pfmpm/diagnostics.hpp"
#include "pfmpm/io.hpp"
#include "pfmpm/surface_energy.hpp"

namespace fs = std::filesystem;
using namespace pfmpm;

namespace {

int env_threads() {
  if (const char* env = std::getenv("PFMPM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

struct SimulateOptions {
  std::string config_path;
  std::string out_dir;
  long steps = -1;
  std::string dt = "";
  int threads = 0;
  bool check_mode = false;
};

int run_simulate(const SimulateOptions& opt) {
  SimConfig cfg = load_config_file(opt.config_path);
  if (!opt.out_dir.empty()) cfg.outputs.directory = opt.out_dir;
  if (opt.steps >= 0) cfg.solver.n_steps = opt.steps;
  if (!opt.dt.empty()) {
    if (opt.dt == "auto") {
      cfg.solver.dt = 0.0;
    } else {
      cfg.solver.dt = std::stod(opt.dt);
      if (!(cfg.solver.dt > 0.0)) throw ConfigError("--dt must be positive or 'auto'");
    }
  }
  if (opt.check_mode) {
    cfg.solver.check_mode = true;
    if (opt.steps < 0) cfg.solver.n_steps = 1;
  }

  fs::create_directories(cfg.outputs.directory);
  const std::string dir = cfg.outputs.directory;

  Simulation sim = build_simulation(cfg);
  std::printf("particles: %zu  nodes: %d  cells: %d  dt: %s us  steps: %ld\n",
              sim.particles().size(), sim.grid().node_count(), sim.grid().cell_count(),
              format_sci(sim.dt()).c_str(), cfg.solver.n_steps);

  std::vector<EnergyRecord> energy_log;
  std::vector<SnapshotFrame> frames;  // retained only for diagnostics
  const bool keep_frames = cfg.outputs.track_tip || cfg.outputs.fragments;
  long total_violations = 0;

  RunHooks hooks;
  hooks.snapshot_every = cfg.outputs.snapshot_every;
  hooks.energy_every = cfg.outputs.energy_every;
  hooks.on_energy = [&](const EnergyRecord& e) { energy_log.push_back(e); };
  hooks.on_snapshot = [&](const Simulation& s, long step) {
    const SnapshotFrame frame = make_snapshot(s, step);
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%06ld.csv", step);
    write_snapshot_csv(dir + "/" + name, frame);
    if (cfg.outputs.vtk) {
      std::snprintf(name, sizeof(name), "snapshot_%06ld.vtk", step);
      write_snapshot_vtk(dir + "/" + name, frame, cfg.outputs.c_min_output);
    }
    if (keep_frames) frames.push_back(frame);
  };
  hooks.on_constraints = [&](long step, const ConstraintReport& report) {
    total_violations += static_cast<long>(report.violations.size());
    append_constraint_report(dir + "/constraint_report.txt", step, report);
  };

  const RunSummary summary = sim.run(hooks);
  write_energy_history(dir + "/energy.csv", energy_log);

  if (cfg.outputs.track_tip) {
    const Rect* region = cfg.outputs.tip_region_set ? &cfg.outputs.tip_region : nullptr;
    const auto tracks = track_tip(frames, cfg.outputs.tip_axis, cfg.outputs.tip_threshold, region,
                                  cfg.outputs.tip_field);
    write_tip_track_csv(dir + "/tip_track.csv", tracks);
  }
  if (cfg.outputs.fragments) {
    std::vector<FragmentCount> counts;
    const double link_radius = 1.5 * cfg.lattice_spacing();
    for (const SnapshotFrame& f : frames)
      for (int d = 0; d < cfg.n_fields(); ++d)
        counts.push_back({f.t, d, count_fragments(f, d, link_radius,
                                                  cfg.outputs.fragment_threshold)});
    write_fragments_csv(dir + "/fragments.csv", counts);
  }

  (void)total_violations;
  std::printf("done: %ld steps in %.2f s, max phase-field residual %s, %ld constraint violation(s)\n",
              summary.steps, summary.wall_seconds, format_sci(summary.max_residual).c_str(),
              summary.violations);

  if (opt.check_mode && summary.violations > 0) {
    std::fprintf(stderr, "check failed: %ld constraint violation(s), see %s/constraint_report.txt\n",
                 summary.violations, dir.c_str());
    return 1;
  }
  return 0;
}

struct PolarOptions {
  std::string config_path;
  std::string out_file = "polar.csv";
  int samples = 360;
  int threads = 0;
  double gc_bar = -1.0;
  double l0 = 1.0;
  double phi_deg = 0.0;
  double x_lb = 0.0;
  int n_1d = 2001;
  double g1111 = 0.0, g2222 = 0.0, g1122 = 0.0, g1112 = 0.0, g1222 = 0.0, g1212 = 0.0;
};

int run_polar(const PolarOptions& opt) {
  PolarQuery q;
  q.n_1d = opt.n_1d;
  q.x_lb = opt.x_lb;

  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw IoError("cannot open config file '" + opt.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json root;
    try {
      root = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    nlohmann::json src;
    if (root.contains("polar")) {
      src = root["polar"];
    } else if (root.contains("materials") && root["materials"].is_array() &&
               !root["materials"].empty()) {
      const auto& m = root["materials"][0];
      src["Gc_bar"] = m.value("Gc_bar", 1.0);
      src["l0"] = m.value("l0", 1.0);
      src["phi_deg"] = m.value("phi_deg", 0.0);
      if (m.contains("gamma")) src["gamma"] = m["gamma"];
    } else {
      throw ConfigError("config has neither a 'polar' section nor a materials table");
    }
    q.Gc_bar = src.value("Gc_bar", 1.0);
    q.l0 = src.value("l0", 1.0);
    q.phi = src.value("phi_deg", 0.0) * M_PI / 180.0;
    if (src.contains("x_lb")) q.x_lb = src["x_lb"].get<double>();
    if (src.contains("n_1d")) q.n_1d = src["n_1d"].get<int>();
    Eigen::Matrix3d voigt = Eigen::Matrix3d::Zero();
    if (src.contains("gamma")) {
      const auto& g = src["gamma"];
      voigt(0, 0) = g.value("g1111", 0.0);
      voigt(1, 1) = g.value("g2222", 0.0);
      voigt(0, 1) = voigt(1, 0) = g.value("g1122", 0.0);
      voigt(0, 2) = voigt(2, 0) = g.value("g1112", 0.0);
      voigt(1, 2) = voigt(2, 1) = g.value("g1222", 0.0);
      voigt(2, 2) = g.value("g1212", 0.0);
    }
    q.gamma = GammaTensor::from_voigt(voigt);
  } else {
    if (opt.gc_bar <= 0.0)
      throw ConfigError("polar needs a config file or inline parameters (--gc-bar ...)");
    q.Gc_bar = opt.gc_bar;
    q.l0 = opt.l0;
    q.phi = opt.phi_deg * M_PI / 180.0;
    Eigen::Matrix3d voigt = Eigen::Matrix3d::Zero();
    voigt(0, 0) = opt.g1111;
    voigt(1, 1) = opt.g2222;
    voigt(0, 1) = voigt(1, 0) = opt.g1122;
    voigt(0, 2) = voigt(2, 0) = opt.g1112;
    voigt(1, 2) = voigt(2, 1) = opt.g1222;
    voigt(2, 2) = opt.g1212;
    q.gamma = GammaTensor::from_voigt(voigt);
  }

  q.theta_samples = uniform_thetas(opt.samples);
  const int threads = opt.threads > 0 ? opt.threads : env_threads();
  const PolarSweep sweep = polar_sweep(q, threads);
  write_polar_csv(opt.out_file, sweep);
  std::printf("Gc min %.6f N/mm at theta %.4f rad\n", sweep.gc_min, sweep.theta_min);
  std::printf("Gc max %.6f N/mm at theta %.4f rad\n", sweep.gc_max, sweep.theta_max);
  std::printf("wrote %zu samples to %s\n", sweep.samples.size(), opt.out_file.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2D dynamic brittle-fracture simulator: explicit material point method with a "
               "fourth-order anisotropic phase field and multi-body frictional contact"};
  app.require_subcommand(1);

  SimulateOptions sim_opt;
  CLI::App* sim = app.add_subcommand("simulate", "run a simulation from a config file");
  sim->add_option("config", sim_opt.config_path, "JSON config file")->required();
  sim->add_option("--out", sim_opt.out_dir, "output directory (overrides config)");
  sim->add_option("--steps", sim_opt.steps, "number of steps (overrides config)");
  sim->add_option("--dt", sim_opt.dt, "timestep in us, or 'auto'");
  sim->add_option("--threads", sim_opt.threads, "worker threads (PFMPM_THREADS fallback)");

  PolarOptions pol_opt;
  CLI::App* pol = app.add_subcommand("polar", "evaluate the polar surface-energy diagram");
  pol->add_option("config", pol_opt.config_path, "JSON config ('polar' section or materials[0])");
  pol->add_option("--out", pol_opt.out_file, "output CSV file");
  pol->add_option("--samples", pol_opt.samples, "number of theta samples over 2*pi");
  pol->add_option("--threads", pol_opt.threads, "worker threads (PFMPM_THREADS fallback)");
  pol->add_option("--gc-bar", pol_opt.gc_bar, "reference fracture energy density, N/mm");
  pol->add_option("--l0", pol_opt.l0, "length scale, mm");
  pol->add_option("--phi-deg", pol_opt.phi_deg, "material orientation, degrees");
  pol->add_option("--x-lb", pol_opt.x_lb, "profile half-width, mm (default 50*l0)");
  pol->add_option("--n1d", pol_opt.n_1d, "1D node count (odd)");
  pol->add_option("--g1111", pol_opt.g1111, "gamma_1111");
  pol->add_option("--g2222", pol_opt.g2222, "gamma_2222");
  pol->add_option("--g1122", pol_opt.g1122, "gamma_1122");
  pol->add_option("--g1112", pol_opt.g1112, "gamma_1112");
  pol->add_option("--g1222", pol_opt.g1222, "gamma_1222");
  pol->add_option("--g1212", pol_opt.g1212, "gamma_1212");

  SimulateOptions chk_opt;
  chk_opt.check_mode = true;
  CLI::App* chk = app.add_subcommand(
      "check", "run with per-step contact-constraint verification; nonzero exit on violations");
  chk->add_option("config", chk_opt.config_path, "JSON config file")->required();
  chk->add_option("--out", chk_opt.out_dir, "output directory (overrides config)");
  chk->add_option("--steps", chk_opt.steps, "number of steps (default 1)");
  chk->add_option("--dt", chk_opt.dt, "timestep in us, or 'auto'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_opt);
    if (pol->parsed()) return run_polar(pol_opt);
    if (chk->parsed()) return run_simulate(chk_opt);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
