#include "periwave/runners.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "periwave/cell_system.hpp"
#include "periwave/contour.hpp"
#include "periwave/csv_io.hpp"
#include "periwave/dispersion.hpp"
#include "periwave/errors.hpp"
#include "periwave/fullguide.hpp"
#include "periwave/halfguide.hpp"
#include "periwave/oracle.hpp"

namespace periwave {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

SolveConfig make_solve_config(const RunConfig& cfg) {
  SolveConfig s;
  s.k2 = cfg.k2;
  s.N = cfg.N;
  s.N0 = cfg.N0;
  s.n_min = cfg.n_min;
  s.n_max = cfg.n_max;
  s.threads = cfg.threads;
  s.n_alpha = cfg.n_alpha;
  s.n_bands = cfg.n_bands;
  s.delta_policy.delta_default = cfg.delta;
  return s;
}

CellDiscretization discretize(const RunConfig& cfg, double h) {
  return build_cell_discretization(build_structured_mesh(h), problem_from_config(cfg));
}

int run_dispersion(const RunConfig& cfg, const std::vector<std::string>& header) {
  const CellDiscretization disc = discretize(cfg, cfg.h);
  const DispersionDiagram diagram = compute_diagram(disc, cfg.n_alpha, cfg.n_bands, cfg.threads);
  dump_diagram_csv(diagram, out_path(cfg, "dispersion.csv"), header);

  // Stop bands are certifiable only below the top computed band.
  const double upper = diagram.bands.row(diagram.bands.rows() - 1).minCoeff();
  const auto bands = stop_bands(diagram, disc, {0.0, upper});
  CsvWriter w(out_path(cfg, "stop_bands.csv"));
  for (const auto& line : header) w.comment(line);
  w.columns({"k2_lo", "k2_hi"});
  for (const auto& b : bands) w.row({b[0], b[1]});
  return 0;
}

int run_scan(const RunConfig& cfg, const std::vector<std::string>& header) {
  const CellDiscretization disc = discretize(cfg, cfg.h);
  const MultiplierScan scan = multiplier_scan(disc, cfg.k2, cfg.scan_r_min, cfg.scan_r_max,
                                              cfg.scan_n_r, cfg.scan_n_theta, cfg.threads);
  dump_scan_csv(scan, out_path(cfg, "scan.csv"), header);
  return 0;
}

int run_contour(const RunConfig& cfg, const std::vector<std::string>& header) {
  const CellDiscretization disc = discretize(cfg, cfg.h);
  const DispersionDiagram diagram = compute_diagram(disc, cfg.n_alpha, cfg.n_bands, cfg.threads);
  const auto crossings = find_crossings(diagram, disc, cfg.k2);
  DeltaPolicy policy;
  policy.delta_default = cfg.delta;
  const Contour contour = build_contour(crossings, disc, cfg.k2, policy);
  const ContourValidation validation = validate_contour(contour, disc, cfg.k2);

  dump_crossings_csv(crossings, out_path(cfg, "crossings.csv"), header);
  dump_contour_csv(contour, out_path(cfg, "contour.csv"), 64, header);

  std::ofstream report(out_path(cfg, "contour_report.txt"));
  for (const auto& line : header) report << "# " << line << "\n";
  report << "segments = " << contour.segments.size() << "\n";
  report << "full_circle = " << (contour.full_circle ? 1 : 0) << "\n";
  report << "crossings = " << crossings.size() << "\n";
  for (const auto& c : validation.checks) {
    report << c.name << " = " << (c.pass ? "pass" : "FAIL") << " (margin " << format_full(c.margin)
           << ")\n";
  }
  report << "min_indicator = " << format_full(validation.min_indicator) << "\n";
  report << "all_pass = " << (validation.all_pass ? 1 : 0) << "\n";
  return validation.all_pass ? 0 : 1;
}

int run_solve_full(const RunConfig& cfg, const std::vector<std::string>& header) {
  const CellDiscretization disc = discretize(cfg, cfg.h);
  const LapSolution sol = solve_full(disc, make_solve_config(cfg));
  dump_solution_csv(sol, out_path(cfg, "solution.csv"), header);
  write_solution_summary(sol, out_path(cfg, "summary.txt"));
  return 0;
}

// Piecewise-linear resample of (x2, phi) samples onto the interface nodes.
VecC interpolate_trace(const std::vector<std::vector<double>>& rows, const UnitCellMesh& mesh) {
  if (rows.size() < 2) throw InvalidParameter("trace file: need at least two samples");
  std::vector<std::array<double, 3>> pts;
  pts.reserve(rows.size());
  for (const auto& r : rows) {
    if (r.size() != 3) throw InvalidParameter("trace file: rows must be x2, re_phi, im_phi");
    pts.push_back({r[0], r[1], r[2]});
  }
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i][0] < pts[i + 1][0])) throw InvalidParameter("trace file: duplicate x2 sample");
  }
  VecC out(static_cast<Eigen::Index>(mesh.right_nodes.size()));
  for (std::size_t i = 0; i < mesh.right_nodes.size(); ++i) {
    const double t = mesh.x2(mesh.right_nodes[i]);
    std::size_t j = 0;
    while (j + 2 < pts.size() && pts[j + 1][0] <= t) ++j;
    const double t0 = pts[j][0];
    const double t1 = pts[j + 1][0];
    const double s = std::clamp((t - t0) / (t1 - t0), 0.0, 1.0);
    out[static_cast<Eigen::Index>(i)] =
        Complex(pts[j][1] + s * (pts[j + 1][1] - pts[j][1]),
                pts[j][2] + s * (pts[j + 1][2] - pts[j][2]));
  }
  return out;
}

int run_solve_half(const RunConfig& cfg, const std::vector<std::string>& header) {
  if (cfg.phi_file.empty()) {
    throw InvalidParameter("solve-half needs [halfguide] phi_file with interface data");
  }
  const CellDiscretization disc = discretize(cfg, cfg.h);
  TraceVector phi;
  phi.values = interpolate_trace(read_csv_rows(cfg.phi_file), disc.mesh);

  SourceBasisSpec basis;
  basis.P1 = cfg.modes_x1;
  basis.R1 = cfg.modes_x2;
  const HalfGuideResult res = solve_half(disc, phi, basis, cfg.alpha_sweep, make_solve_config(cfg));

  dump_solution_csv(res.solution, out_path(cfg, "solution.csv"), header);
  write_solution_summary(res.solution, out_path(cfg, "summary.txt"),
                         {{"alpha_chosen", format_full(res.alpha_chosen)},
                          {"gamma1_mismatch", format_full(res.gamma1_mismatch)},
                          {"basis_size", std::to_string(basis.size())}});

  CsvWriter cw(out_path(cfg, "coefficients.csv"));
  for (const auto& line : header) cw.comment(line);
  cw.columns({"index", "mode_x1", "mode_x2", "re_c", "im_c"});
  for (Eigen::Index ell = 0; ell < res.coefficients.size(); ++ell) {
    const int p = static_cast<int>(ell) / basis.R1 + 1;
    const int r = static_cast<int>(ell) % basis.R1;
    cw.row({ell, p, r}, {res.coefficients[ell].real(), res.coefficients[ell].imag()});
  }

  CsvWriter sw(out_path(cfg, "sweep.csv"));
  for (const auto& line : header) sw.comment(line);
  sw.columns({"alpha", "mismatch"});
  for (std::size_t i = 0; i < res.sweep_alphas.size(); ++i) {
    sw.row({res.sweep_alphas[i], res.sweep_mismatches[i]});
  }
  return 0;
}

int run_oracle(const RunConfig& cfg, const std::vector<std::string>& header) {
  const CellProblem problem = problem_from_config(cfg);
  const StripDiscretization sdisc = build_strip_discretization(problem, cfg.oracle_R, cfg.h);
  std::vector<StripSolution> sols;
  for (double eps : cfg.oracle_eps) sols.push_back(solve_absorbing(sdisc, cfg.k2, eps));
  const LapExtrapolation ex = extrapolate_lap(sols);

  StripSolution limit;
  limit.k2 = cfg.k2;
  limit.epsilon = 0.0;
  limit.R = cfg.oracle_R;
  limit.vertex_values = ex.vertex_values;

  const int lo = std::max(cfg.n_min, -cfg.oracle_R);
  const int hi = std::min(cfg.n_max, cfg.oracle_R);
  CsvWriter w(out_path(cfg, "oracle_cells.csv"));
  for (const auto& line : header) w.comment(line);
  w.columns({"n", "x1", "x2", "re_u", "im_u"});
  for (int n = lo; n <= hi; ++n) {
    const VecC field = strip_cell_field(sdisc, limit, n);
    for (int v = 0; v < sdisc.strip.cell_mesh.n_vertices(); ++v) {
      w.row({n}, {sdisc.strip.cell_mesh.x1(v), sdisc.strip.cell_mesh.x2(v), field[v].real(),
                  field[v].imag()});
    }
  }

  // Independent cross-check: the contour solver on the same problem.
  SolveConfig scfg = make_solve_config(cfg);
  scfg.n_min = 0;
  scfg.n_max = 0;
  const CellDiscretization disc =
      build_cell_discretization(build_structured_mesh(cfg.h), problem);
  const LapSolution full = solve_full(disc, scfg);
  const VecC oracle_cell0 = strip_cell_field(sdisc, limit, 0);
  const double rel = relative_l2_error(sdisc.cell_vertex_mass, oracle_cell0, full.cell(0));

  std::ofstream report(out_path(cfg, "oracle_report.txt"));
  for (const auto& line : header) report << "# " << line << "\n";
  for (std::size_t i = 0; i < sols.size(); ++i) {
    report << "eps_" << i << " = " << format_full(sols[i].epsilon)
           << "  residual = " << format_full(sols[i].residual) << "\n";
  }
  report << "diagnostic_ratio = " << format_full(ex.diagnostic_ratio) << "\n";
  report << "reliable = " << (ex.reliable ? 1 : 0) << "\n";
  report << "rel_l2_vs_contour_cell0 = " << format_full(rel) << "\n";
  return ex.reliable ? 0 : 1;
}

int run_convergence(const RunConfig& cfg, const std::vector<std::string>& header) {
  const CellProblem problem = problem_from_config(cfg);

  // One contour serves every (N, h) pair including the reference: crossing
  // locations move only O(h^2) between meshes, far less than the detour
  // radius, and a shared contour keeps the comparison purely about
  // quadrature and mesh resolution.
  const double h_contour = std::clamp(*std::min_element(cfg.conv_h.begin(), cfg.conv_h.end()),
                                      0.01, 0.02);
  const CellDiscretization disc_c =
      build_cell_discretization(build_structured_mesh(h_contour), problem);
  const DispersionDiagram diagram = compute_diagram(disc_c, cfg.n_alpha, cfg.n_bands, cfg.threads);
  const auto crossings = find_crossings(diagram, disc_c, cfg.k2);
  DeltaPolicy policy;
  policy.delta_default = cfg.delta;

  SolveConfig base = make_solve_config(cfg);
  base.n_min = 0;
  base.n_max = 0;
  base.use_explicit_contour = true;
  base.explicit_contour = build_contour(crossings, disc_c, cfg.k2, policy);

  const CellDiscretization ref_disc =
      build_cell_discretization(build_structured_mesh(cfg.ref_h), problem);
  SolveConfig ref_cfg = base;
  ref_cfg.N = cfg.ref_N;
  const LapSolution ref = solve_full(ref_disc, ref_cfg);

  CsvWriter w(out_path(cfg, "convergence.csv"));
  for (const auto& line : header) w.comment(line);
  w.columns({"h", "N", "err"});
  for (double h : cfg.conv_h) {
    const CellDiscretization disc =
        build_cell_discretization(build_structured_mesh(h), problem);
    for (int N : cfg.conv_N) {
      SolveConfig run = base;
      run.N = N;
      const LapSolution sol = solve_full(disc, run);
      const VecC lifted = interpolate_to(disc.mesh, sol.cell(0), ref_disc.mesh);
      const double err = relative_l2_error(ref_disc.vertex_mass, lifted, ref.cell(0));
      w.text_row({format_full(h), std::to_string(N), format_full(err)});
    }
  }
  return 0;
}

}  // namespace

int run_mode(const RunConfig& cfg) {
  try {
    validate_config(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    const std::vector<std::string> header = config_header_lines(cfg);
    if (cfg.mode == "dispersion") return run_dispersion(cfg, header);
    if (cfg.mode == "scan") return run_scan(cfg, header);
    if (cfg.mode == "contour") return run_contour(cfg, header);
    if (cfg.mode == "solve-full") return run_solve_full(cfg, header);
    if (cfg.mode == "solve-half") return run_solve_half(cfg, header);
    if (cfg.mode == "oracle") return run_oracle(cfg, header);
    if (cfg.mode == "convergence") return run_convergence(cfg, header);
    std::fprintf(stderr, "error: unknown mode '%s'\n", cfg.mode.c_str());
    return 2;
  } catch (const NearPoleError& e) {
    std::fprintf(stderr, "error: %s (z = %.12g + %.12gi, indicator %.3e)\n", e.what(), e.z.real(),
                 e.z.imag(), e.indicator);
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace periwave
