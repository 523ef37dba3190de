#pragma once

#include <string>
#include <vector>

#include "pfmpm/contact.hpp"
#include "pfmpm/solver.hpp"
#include "pfmpm/surface_energy.hpp"

namespace pfmpm {

/// Locale-independent scientific formatting with 9 significant digits,
/// byte-stable across runs.
std::string format_sci(double value);

struct SnapshotRow {
  long step = 0;
  double t = 0.0;
  int field_id = 0;
  double x = 0.0, y = 0.0;
  double c = 1.0;
  double sigma_h = 0.0;  // (sig11 + sig22) / 2
  double vx = 0.0, vy = 0.0;
  double H = 0.0;
};

struct SnapshotFrame {
  long step = 0;
  double t = 0.0;
  std::vector<SnapshotRow> rows;
};

SnapshotFrame make_snapshot(const Simulation& sim, long step);

/// Header `t_us,elastic_mJ,fracture_mJ,kinetic_mJ`, one row per record.
void write_energy_history(const std::string& path, const std::vector<EnergyRecord>& records);

/// Complete CSV (no filter).
void write_snapshot_csv(const std::string& path, const SnapshotFrame& frame);

/// Legacy ASCII VTK point cloud; rows with c < c_min are omitted when
/// c_min >= 0.
void write_snapshot_vtk(const std::string& path, const SnapshotFrame& frame, double c_min);

/// Header `theta_rad,gc,gc_reciprocal`.
void write_polar_csv(const std::string& path, const PolarSweep& sweep);

void append_constraint_report(const std::string& path, long step, const ConstraintReport& report);

}  // namespace pfmpm
