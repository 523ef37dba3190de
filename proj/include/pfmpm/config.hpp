#pragma once

#include <string>
#include <vector>

#include "pfmpm/solver.hpp"

namespace pfmpm {

struct OutputOptions {
  std::string directory = "out";
  long snapshot_every = 0;   // 0: initial/final only
  long energy_every = 1;
  double c_min_output = -1.0;  // < 0 disables the VTK particle filter
  bool vtk = false;
  // Optional post-processing
  bool track_tip = false;
  char tip_axis = 'y';
  double tip_threshold = 0.5;
  bool tip_region_set = false;
  Rect tip_region;
  int tip_field = -1;
  bool fragments = false;
  double fragment_threshold = 0.05;
};

struct SimConfig {
  Rect grid_bounds;
  double h = 1.0;
  int order = 2;
  double thickness = 1.0;
  PlaneMode plane = PlaneMode::Stress;
  int cell_density = 3;
  std::vector<Material> materials;
  std::vector<BodyShape> bodies;
  std::vector<PreCrack> precracks;
  Loads loads;
  std::vector<FixedBoundary> fixed;
  ContactParams contact;
  SolverControls solver;
  OutputOptions outputs;

  int n_fields() const;
  double lattice_spacing() const { return h / cell_density; }
};

/// Parses and validates; throws ConfigError carrying every problem found
/// (one line per error, each prefixed with its config path).
SimConfig parse_config(const std::string& text);
SimConfig load_config_file(const std::string& path);
std::string serialize_config(const SimConfig& cfg);

/// Discretizes bodies, seeds pre-cracks, applies initial velocities and
/// constructs the simulation.
Simulation build_simulation(const SimConfig& cfg);

}  // namespace pfmpm
