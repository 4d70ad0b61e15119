#pragma once

#include <string>
#include <vector>

#include "periwave/cell_system.hpp"
#include "periwave/dispersion.hpp"
#include "periwave/types.hpp"

namespace periwave {

// One piece of the integration contour, parameterized z(t) = center +
// radius e^{it}, t running from t_from to t_to (t_to < t_from encodes the
// clockwise traversal that inward detours need to keep the whole contour
// counterclockwise).
struct ContourSegment {
  enum class Kind { kArc, kDetour };
  Kind kind = Kind::kArc;
  double t_from = 0.0;
  double t_to = 0.0;
  Complex center{0.0, 0.0};
  double radius = 1.0;
  // Detour bookkeeping (kind == kDetour only).
  double crossing_alpha = 0.0;
  bool outward = true;
  double theta_minus = 0.0;  // canonical branch angles, theta_minus < theta_plus
  double theta_plus = 0.0;

  Complex point(double t) const;
  Complex velocity(double t) const;  // dz/dt
};

struct Contour {
  std::vector<ContourSegment> segments;
  bool full_circle = false;

  Complex start_point() const;
  Complex end_point() const;
};

struct DeltaPolicy {
  double delta_default = 0.1;
  double margin_factor = 0.4;  // fraction of nearest-crossing distance
};

// Unit circle with half-disk detours: outward around right-propagating
// crossings, inward around left-propagating ones; full circle when no
// crossing exists. Throws ContourConstructionError when detour balls cannot
// be kept disjoint, clear of the branch cut, or free of second dips.
Contour build_contour(const std::vector<Crossing>& crossings,
                      const CellDiscretization& disc, double k2,
                      const DeltaPolicy& policy = {});

struct ContourCheck {
  std::string name;
  bool pass;
  double margin;  // worst observed value for this check
};

struct ContourValidation {
  std::vector<ContourCheck> checks;
  bool all_pass = false;
  double min_indicator = 0.0;
};

ContourValidation validate_contour(const Contour& contour, const CellDiscretization& disc,
                                   double k2, int n_probes = 200);

// Sampled points `re_z, im_z, segment_id` for plotting.
void dump_contour_csv(const Contour& contour, const std::string& path, int samples_per_segment = 64,
                      const std::vector<std::string>& header_lines = {});

}  // namespace periwave
