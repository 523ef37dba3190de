#include "pfmpm/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

namespace pfmpm {

std::string format_sci(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific, 8);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

SnapshotFrame make_snapshot(const Simulation& sim, long step) {
  SnapshotFrame frame;
  frame.step = step;
  frame.t = sim.t();
  frame.rows.reserve(sim.particles().size());
  for (const MaterialPoint& p : sim.particles()) {
    SnapshotRow r;
    r.step = step;
    r.t = sim.t();
    r.field_id = p.field_id;
    r.x = p.x.x();
    r.y = p.x.y();
    r.c = p.c;
    r.sigma_h = 0.5 * (p.sig(0, 0) + p.sig(1, 1));
    r.vx = p.v.x();
    r.vy = p.v.y();
    r.H = p.H;
    frame.rows.push_back(r);
  }
  return frame;
}

void write_energy_history(const std::string& path, const std::vector<EnergyRecord>& records) {
  std::ofstream out = open_out(path);
  out << "t_us,elastic_mJ,fracture_mJ,kinetic_mJ\n";
  for (const EnergyRecord& r : records)
    out << format_sci(r.t) << ',' << format_sci(r.elastic) << ',' << format_sci(r.fracture) << ','
        << format_sci(r.kinetic) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_snapshot_csv(const std::string& path, const SnapshotFrame& frame) {
  std::ofstream out = open_out(path);
  out << "step,t,field_id,x,y,c,sigma_h,vx,vy,H\n";
  for (const SnapshotRow& r : frame.rows)
    out << r.step << ',' << format_sci(r.t) << ',' << r.field_id << ',' << format_sci(r.x) << ','
        << format_sci(r.y) << ',' << format_sci(r.c) << ',' << format_sci(r.sigma_h) << ','
        << format_sci(r.vx) << ',' << format_sci(r.vy) << ',' << format_sci(r.H) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_snapshot_vtk(const std::string& path, const SnapshotFrame& frame, double c_min) {
  std::vector<const SnapshotRow*> rows;
  rows.reserve(frame.rows.size());
  for (const SnapshotRow& r : frame.rows)
    if (c_min < 0.0 || r.c >= c_min) rows.push_back(&r);

  std::ofstream out = open_out(path);
  const size_t n = rows.size();
  out << "# vtk DataFile Version 3.0\n";
  out << "particles step " << frame.step << " t " << format_sci(frame.t) << " us\n";
  out << "ASCII\nDATASET POLYDATA\n";
  out << "POINTS " << n << " double\n";
  for (const SnapshotRow* r : rows)
    out << format_sci(r->x) << ' ' << format_sci(r->y) << " 0\n";
  out << "VERTICES " << n << ' ' << 2 * n << '\n';
  for (size_t i = 0; i < n; ++i) out << "1 " << i << '\n';
  out << "POINT_DATA " << n << '\n';
  out << "SCALARS c double 1\nLOOKUP_TABLE default\n";
  for (const SnapshotRow* r : rows) out << format_sci(r->c) << '\n';
  out << "SCALARS sigma_h double 1\nLOOKUP_TABLE default\n";
  for (const SnapshotRow* r : rows) out << format_sci(r->sigma_h) << '\n';
  out << "SCALARS H double 1\nLOOKUP_TABLE default\n";
  for (const SnapshotRow* r : rows) out << format_sci(r->H) << '\n';
  out << "SCALARS field_id int 1\nLOOKUP_TABLE default\n";
  for (const SnapshotRow* r : rows) out << r->field_id << '\n';
  out << "VECTORS velocity double\n";
  for (const SnapshotRow* r : rows)
    out << format_sci(r->vx) << ' ' << format_sci(r->vy) << " 0\n";
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_polar_csv(const std::string& path, const PolarSweep& sweep) {
  std::ofstream out = open_out(path);
  out << "theta_rad,gc,gc_reciprocal\n";
  for (const PolarResult& r : sweep.samples)
    out << format_sci(r.theta) << ',' << format_sci(r.gc) << ',' << format_sci(r.gc_reciprocal)
        << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

void append_constraint_report(const std::string& path, long step, const ConstraintReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (const ConstraintViolation& v : report.violations)
    out << "step " << step << " node " << v.node << ' ' << v.condition << ' ' << v.quantity
        << " magnitude " << format_sci(v.magnitude) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace pfmpm
