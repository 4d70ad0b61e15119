#include "periwave/contour.hpp"

#include <algorithm>
#include <cmath>

#include "periwave/cell_solver.hpp"
#include "periwave/csv_io.hpp"
#include "periwave/errors.hpp"

namespace periwave {

Complex ContourSegment::point(double t) const {
  return center + radius * std::exp(Complex(0.0, 1.0) * t);
}

Complex ContourSegment::velocity(double t) const {
  return radius * Complex(0.0, 1.0) * std::exp(Complex(0.0, 1.0) * t);
}

Complex Contour::start_point() const {
  const auto& s = segments.front();
  return s.point(s.t_from);
}

Complex Contour::end_point() const {
  const auto& s = segments.back();
  return s.point(s.t_to);
}

namespace {

double circle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

// Distance from e^{i alpha} to the branch cut (-inf, 0].
double cut_clearance(double alpha) {
  if (std::cos(alpha) >= 0.0) return 1.0;  // nearest cut point is the origin
  return std::abs(std::sin(alpha));
}

void probe_second_dips(const CellDiscretization& disc, double k2, double alpha, double delta) {
  // The crossing itself dips at the ball center; any other multiplier inside
  // the ball would pull the indicator down at off-center probes too.
  for (int ring = 0; ring < 2; ++ring) {
    const double r = (ring == 0 ? 0.5 : 0.85) * delta;
    for (int m = 0; m < 8; ++m) {
      const Complex p = std::exp(Complex(0.0, alpha)) + std::polar(r, 2.0 * kPi * m / 8.0);
      if (singularity_indicator(disc, p, k2) < 1e-8)
        throw ContourConstructionError(
            "detour ball at alpha=" + std::to_string(alpha) +
            " contains a second singularity dip (probe radius " + std::to_string(r) + ")");
    }
  }
}

}  // namespace

Contour build_contour(const std::vector<Crossing>& crossings, const CellDiscretization& disc,
                      double k2, const DeltaPolicy& policy) {
  Contour contour;
  if (crossings.empty()) {
    ContourSegment full;
    full.kind = ContourSegment::Kind::kArc;
    full.t_from = -kPi;
    full.t_to = kPi;
    full.center = Complex(0.0, 0.0);
    full.radius = 1.0;
    contour.segments.push_back(full);
    contour.full_circle = true;
    return contour;
  }

  std::vector<Crossing> cs = crossings;
  std::sort(cs.begin(), cs.end(), [](const Crossing& a, const Crossing& b) { return a.alpha < b.alpha; });
  for (const auto& c : cs)
    if (c.cls == CrossingClass::kStationary)
      throw InvalidParameter("cannot build a contour around a stationary crossing");
  for (std::size_t i = 0; i + 1 < cs.size(); ++i)
    if (circle_distance(cs[i].alpha, cs[i + 1].alpha) < 1e-9)
      throw InvalidParameter("crossing angles must be pairwise distinct");

  const std::size_t P = cs.size();
  std::vector<double> delta(P);
  for (std::size_t j = 0; j < P; ++j) {
    double nearest = 2.0 * kPi;
    for (std::size_t i = 0; i < P; ++i)
      if (i != j) nearest = std::min(nearest, circle_distance(cs[i].alpha, cs[j].alpha));
    double d = policy.delta_default;
    if (P > 1) d = std::min(d, policy.margin_factor * nearest);
    d = std::min(d, 0.9 * cut_clearance(cs[j].alpha));
    if (d < 1e-8)
      throw ContourConstructionError("detour radius collapsed at alpha=" +
                                     std::to_string(cs[j].alpha));
    delta[j] = d;
  }

  // Junction angles on the circle and branch angles on each detour ball.
  std::vector<double> a_minus(P), a_plus(P), th_minus(P), th_plus(P);
  for (std::size_t j = 0; j < P; ++j) {
    const double half_open = std::acos(1.0 - delta[j] * delta[j] / 2.0);
    a_minus[j] = cs[j].alpha - half_open;
    a_plus[j] = cs[j].alpha + half_open;
    const double branch = std::acos(-delta[j] / 2.0);
    th_minus[j] = cs[j].alpha - branch;
    th_plus[j] = cs[j].alpha + branch;
  }
  if (!(a_minus[0] > -kPi) || !(a_plus[P - 1] < kPi))
    throw ContourConstructionError("detour junctions leave the principal angle range");
  for (std::size_t j = 0; j + 1 < P; ++j)
    if (!(a_plus[j] < a_minus[j + 1]))
      throw ContourConstructionError("adjacent detour balls overlap on the circle");
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = i + 1; j < P; ++j) {
      const double chord = std::abs(std::exp(Complex(0.0, cs[i].alpha)) -
                                    std::exp(Complex(0.0, cs[j].alpha)));
      if (chord <= delta[i] + delta[j])
        throw ContourConstructionError("detour balls overlap");
    }

  for (std::size_t j = 0; j < P; ++j)
    probe_second_dips(disc, k2, cs[j].alpha, delta[j]);

  // Segments in traversal order: detour_1, arc_1, ..., detour_P, arc_P with
  // the last arc wrapping to alpha_1^- + 2 pi.
  for (std::size_t j = 0; j < P; ++j) {
    ContourSegment d;
    d.kind = ContourSegment::Kind::kDetour;
    d.center = std::exp(Complex(0.0, cs[j].alpha));
    d.radius = delta[j];
    d.crossing_alpha = cs[j].alpha;
    d.outward = cs[j].cls == CrossingClass::kRightPropagating;
    d.theta_minus = th_minus[j];
    d.theta_plus = th_plus[j];
    if (d.outward) {
      // Counterclockwise over the outer half of the ball.
      d.t_from = th_minus[j];
      d.t_to = th_plus[j];
    } else {
      // Clockwise over the inner half of the ball.
      d.t_from = th_minus[j];
      d.t_to = th_plus[j] - 2.0 * kPi;
    }
    // Side condition at the detour midpoint; authoritative branch check.
    const double t_mid = 0.5 * (d.t_from + d.t_to);
    const double mid_abs = std::abs(d.point(t_mid));
    if (d.outward ? (mid_abs <= 1.0) : (mid_abs >= 1.0))
      throw AssumptionViolated("detour side condition failed at alpha=" +
                               std::to_string(cs[j].alpha));
    contour.segments.push_back(d);

    ContourSegment arc;
    arc.kind = ContourSegment::Kind::kArc;
    arc.center = Complex(0.0, 0.0);
    arc.radius = 1.0;
    arc.t_from = a_plus[j];
    arc.t_to = j + 1 < P ? a_minus[j + 1] : a_minus[0] + 2.0 * kPi;
    contour.segments.push_back(arc);
  }

  // Endpoint continuity across all junctions.
  for (std::size_t s = 0; s < contour.segments.size(); ++s) {
    const auto& cur = contour.segments[s];
    const auto& nxt = contour.segments[(s + 1) % contour.segments.size()];
    if (std::abs(cur.point(cur.t_to) - nxt.point(nxt.t_from)) > 1e-10)
      throw ContourConstructionError("contour segments do not meet");
  }
  return contour;
}

namespace {

double polyline_winding(const std::vector<Complex>& pts) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Complex r = pts[i + 1] / pts[i];
    total += std::arg(r);
  }
  return total / (2.0 * kPi);
}

}  // namespace

ContourValidation validate_contour(const Contour& contour, const CellDiscretization& disc,
                                   double k2, int n_probes) {
  ContourValidation report;
  const auto& segs = contour.segments;

  double worst_closure = 0.0;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const auto& cur = segs[s];
    const auto& nxt = segs[(s + 1) % segs.size()];
    worst_closure = std::max(worst_closure,
                             std::abs(cur.point(cur.t_to) - nxt.point(nxt.t_from)));
  }
  report.checks.push_back({"closure", worst_closure <= 1e-10, worst_closure});

  double worst_on_circle = 0.0;
  double worst_side = 1e300;  // margin by which side conditions hold
  for (const auto& s : segs) {
    if (s.kind != ContourSegment::Kind::kDetour) continue;
    for (const double t : {s.t_from, s.t_to})
      worst_on_circle = std::max(worst_on_circle, std::abs(std::abs(s.point(t)) - 1.0));
    const double mid_abs = std::abs(s.point(0.5 * (s.t_from + s.t_to)));
    worst_side = std::min(worst_side, s.outward ? mid_abs - 1.0 : 1.0 - mid_abs);
  }
  const bool has_detours = worst_side != 1e300;
  report.checks.push_back({"detour_endpoints_on_circle", worst_on_circle <= 1e-10, worst_on_circle});
  report.checks.push_back({"side_conditions", !has_detours || worst_side > 0.0,
                           has_detours ? worst_side : 0.0});

  // Winding number from a fine polyline sampling.
  std::vector<Complex> pts;
  for (const auto& s : segs)
    for (int i = 0; i <= 256; ++i)
      pts.push_back(s.point(s.t_from + (s.t_to - s.t_from) * i / 256.0));
  const double winding = polyline_winding(pts);
  report.checks.push_back({"winding_number", std::abs(winding - 1.0) <= 1e-6,
                           std::abs(winding - 1.0)});

  // Indicator floor over parameter-uniform probes.
  double min_ind = 1e300;
  const int per_seg = std::max(1, n_probes / static_cast<int>(segs.size()));
  for (const auto& s : segs)
    for (int i = 0; i < per_seg; ++i) {
      const double t = s.t_from + (s.t_to - s.t_from) * (i + 0.5) / per_seg;
      min_ind = std::min(min_ind, singularity_indicator(disc, s.point(t), k2));
    }
  report.min_indicator = min_ind;
  report.checks.push_back({"indicator_floor", min_ind >= 1e-8, min_ind});

  report.all_pass = true;
  for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
  return report;
}

void dump_contour_csv(const Contour& contour, const std::string& path, int samples_per_segment,
                      const std::vector<std::string>& header_lines) {
  CsvWriter w(path);
  for (const auto& line : header_lines) w.comment(line);
  w.columns({"re_z", "im_z", "segment_id"});
  for (std::size_t s = 0; s < contour.segments.size(); ++s) {
    const auto& seg = contour.segments[s];
    for (int i = 0; i <= samples_per_segment; ++i) {
      const Complex z = seg.point(seg.t_from + (seg.t_to - seg.t_from) * i / samples_per_segment);
      w.text_row({format_full(z.real()), format_full(z.imag()), std::to_string(s)});
    }
  }
}

}  // namespace periwave
