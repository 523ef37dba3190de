#pragma once

#include <vector>

#include "pfmpm/io.hpp"

namespace pfmpm {

struct TipTrack {
  double t = 0.0;
  double tip_position = 0.0;
  double tip_speed = 0.0;   // central difference over a 5-sample window
  bool non_monotone = false;  // flagged, never erased
};

/// Extremal coordinate along `axis` ('x' or 'y') among particles with
/// c < c_threshold, optionally restricted to a region and a field. Frames with
/// no sub-threshold particle produce no sample.
std::vector<TipTrack> track_tip(const std::vector<SnapshotFrame>& frames, char axis,
                                double c_threshold = 0.5, const Rect* region = nullptr,
                                int field_id = -1);

/// Connected components over surviving particles (c >= threshold) of one
/// field, linking neighbors within link_radius.
int count_fragments(const SnapshotFrame& frame, int field_id, double link_radius,
                    double c_threshold = 0.05);

/// Rayleigh wave speed from the secular equation, mm/us.
double rayleigh_speed(const LameParams& lame, double rho);

void write_tip_track_csv(const std::string& path, const std::vector<TipTrack>& tracks);

struct FragmentCount {
  double t = 0.0;
  int field_id = 0;
  int fragments = 0;
};

void write_fragments_csv(const std::string& path, const std::vector<FragmentCount>& counts);

}  // namespace pfmpm
