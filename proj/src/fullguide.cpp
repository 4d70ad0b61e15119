#include "periwave/fullguide.hpp"

#include <cmath>
#include <optional>

#include "periwave/csv_io.hpp"
#include "periwave/errors.hpp"
#include "periwave/parallel.hpp"
#include "periwave/quadrature.hpp"

namespace periwave {

const VecC& LapSolution::cell(int n) const {
  if (!has_cell(n))
    throw InvalidParameter("cell index outside the solved range");
  return cells[static_cast<std::size_t>(n - n_min)];
}

namespace {

struct NodeTask {
  std::size_t segment;
  double t;        // traversal parameter on the segment
  double weight;   // signed parameter-space quadrature weight
};

// Keep quadrature nodes off the branch cut: if z(t) is within 1e-12 of the
// negative real axis, shift the parameter by a relatively negligible amount.
double nudged_parameter(const ContourSegment& seg, double t) {
  const Complex z = seg.point(t);
  if (z.real() < 0.0 && std::abs(z.imag()) < 1e-12 * (-z.real()))
    return t + 1e-9;
  return t;
}

}  // namespace

LapSolution solve_full(const CellDiscretization& disc, const SolveConfig& config) {
  if (config.N < 4 || config.N % 2 != 0)
    throw InvalidParameter("solve_full needs even N >= 4");
  if (config.N0 < 2)
    throw InvalidParameter("solve_full needs N0 >= 2");
  if (config.n_min > config.n_max)
    throw InvalidParameter("cell range must satisfy n_min <= n_max");

  LapSolution sol;
  sol.k2 = config.k2;
  sol.N = config.N;
  sol.N0 = config.N0;
  sol.h = disc.mesh.h;
  sol.n_min = config.n_min;
  sol.n_max = config.n_max;
  sol.mesh = disc.mesh;

  if (config.use_explicit_contour) {
    sol.contour = config.explicit_contour;
  } else {
    const auto diagram = compute_diagram(disc, config.n_alpha, config.n_bands, config.threads);
    const auto crossings = find_crossings(diagram, disc, config.k2);
    sol.contour = build_contour(crossings, disc, config.k2, config.delta_policy);
  }

  // Node schedule: graded rule per segment, plain midpoint rule on a full
  // circle (periodic analytic integrand, and nodes stay off z = -1).
  std::vector<NodeTask> tasks;
  std::vector<SegmentRule> rules;
  for (std::size_t s = 0; s < sol.contour.segments.size(); ++s) {
    const auto& seg = sol.contour.segments[s];
    const SegmentRule rule = sol.contour.full_circle
                                 ? make_periodic_rule(seg.t_from, seg.t_to, config.N)
                                 : make_segment_rule(seg.t_from, seg.t_to, config.N, config.N0);
    for (std::size_t l = 0; l < rule.mapped.size(); ++l)
      tasks.push_back({s, nudged_parameter(seg, rule.mapped[l]), rule.weights[l]});
    rules.push_back(rule);
  }
  sol.n_solves = static_cast<int>(tasks.size());

  const int n_cells = config.n_max - config.n_min + 1;
  sol.cells.assign(static_cast<std::size_t>(n_cells), VecC::Zero(disc.mesh.n_vertices()));

  // Solve in parallel chunks, reduce in strict task order for bitwise
  // reproducibility at any thread count.
  double min_ind = 1e300, max_res = 0.0;
  const int threads = resolve_thread_count(config.threads);
  const std::size_t chunk = static_cast<std::size_t>(std::max(1, 2 * threads));
  std::vector<std::optional<CellSolution>> buffer(chunk);
  for (std::size_t base = 0; base < tasks.size(); base += chunk) {
    const std::size_t count = std::min(chunk, tasks.size() - base);
    parallel_for_static(count, threads, [&](std::size_t i, int) {
      const NodeTask& task = tasks[base + i];
      const auto& seg = sol.contour.segments[task.segment];
      buffer[i] = solve_cell(disc, seg.point(task.t), config.k2, config.cell_opts);
    });
    for (std::size_t i = 0; i < count; ++i) {
      const NodeTask& task = tasks[base + i];
      const auto& seg = sol.contour.segments[task.segment];
      const CellSolution& cs = *buffer[i];
      if (cs.indicator >= 0.0) min_ind = std::min(min_ind, cs.indicator);
      max_res = std::max(max_res, cs.residual);
      const Complex z = cs.z;
      for (int n = config.n_min; n <= config.n_max; ++n) {
        Complex factor;
        if (seg.kind == ContourSegment::Kind::kArc) {
          factor = std::exp(Complex(0.0, n * task.t)) / (2.0 * kPi);
        } else {
          factor = int_pow(z, n - 1) * seg.radius * std::exp(Complex(0.0, task.t)) / (2.0 * kPi);
        }
        sol.cells[static_cast<std::size_t>(n - config.n_min)] += (task.weight * factor) * cs.vertex_w;
      }
      buffer[i].reset();
    }
  }
  sol.min_node_indicator = min_ind == 1e300 ? -1.0 : min_ind;
  sol.max_residual = max_res;
  return sol;
}

LapSolution solve_full(const CellProblem& problem, const ComplexField& source, double h,
                       const SolveConfig& config) {
  CellProblem p = problem;
  if (source) p.f = source;
  const auto mesh = build_structured_mesh(h);
  const auto disc = build_cell_discretization(mesh, p);
  return solve_full(disc, config);
}

void dump_solution_csv(const LapSolution& sol, const std::string& path,
                       const std::vector<std::string>& header_lines) {
  CsvWriter w(path);
  for (const auto& line : header_lines) w.comment(line);
  w.columns({"n", "x1", "x2", "re_u", "im_u"});
  for (int n = sol.n_min; n <= sol.n_max; ++n) {
    const VecC& u = sol.cell(n);
    for (int v = 0; v < sol.mesh.n_vertices(); ++v)
      w.row(std::vector<long>{n},
            std::vector<double>{sol.mesh.x1(v), sol.mesh.x2(v), u[v].real(), u[v].imag()});
  }
}

void write_solution_summary(const LapSolution& sol, const std::string& path,
                            const std::vector<std::pair<std::string, std::string>>& extra) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open output file: " + path);
  std::fprintf(f, "k2=%s\n", format_full(sol.k2).c_str());
  std::fprintf(f, "h=%s\n", format_full(sol.h).c_str());
  std::fprintf(f, "N=%d\n", sol.N);
  std::fprintf(f, "N0=%d\n", sol.N0);
  std::fprintf(f, "n_min=%d\n", sol.n_min);
  std::fprintf(f, "n_max=%d\n", sol.n_max);
  std::fprintf(f, "segments=%zu\n", sol.contour.segments.size());
  std::fprintf(f, "full_circle=%d\n", sol.contour.full_circle ? 1 : 0);
  std::fprintf(f, "cell_solves=%d\n", sol.n_solves);
  std::fprintf(f, "min_node_indicator=%s\n", format_full(sol.min_node_indicator).c_str());
  std::fprintf(f, "max_solve_residual=%s\n", format_full(sol.max_residual).c_str());
  for (const auto& kv : extra)
    std::fprintf(f, "%s=%s\n", kv.first.c_str(), kv.second.c_str());
  std::fclose(f);
}

}  // namespace periwave
