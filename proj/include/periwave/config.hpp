#pragma once

#include <string>
#include <utility>
#include <vector>

#include "periwave/medium.hpp"

namespace periwave {

// Run description parsed from a plain-text key=value file. Lines starting
// with '#' are comments; '[halfguide]', '[expression]', '[oracle]',
// '[scan]', '[convergence]' open sections whose keys apply to one mode.
// Unknown keys are rejected so typos fail loudly.
struct RunConfig {
  std::string mode;  // dispersion | scan | contour | solve-full | solve-half | oracle | convergence
  std::string problem = "builtin-ring";  // or "expression"
  std::string q_expr;
  std::string f_expr;

  double k2 = 5.0;
  double h = 0.02;
  int N = 32;
  int N0 = 6;
  double delta = 0.1;
  int n_min = 0;
  int n_max = 0;
  std::string out_dir = ".";
  int threads = 1;
  int n_alpha = 64;
  int n_bands = 12;

  // [halfguide]
  int modes_x1 = 6;  // sin modes in x1; basis size = modes_x1 * modes_x2
  int modes_x2 = 4;  // cos modes in x2 (including the constant)
  std::vector<double> alpha_sweep = {1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};
  std::string phi_file;

  // [oracle]
  int oracle_R = 15;
  std::vector<double> oracle_eps = {4e-2, 2e-2, 1e-2};

  // [scan]
  double scan_r_min = 0.80;
  double scan_r_max = 1.25;
  int scan_n_r = 10;
  int scan_n_theta = 64;

  // [convergence]
  std::vector<int> conv_N = {8, 16, 32, 64};
  std::vector<double> conv_h = {0.02, 0.01};
  int ref_N = 128;
  double ref_h = 0.005;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Validates ranges shared by all modes; throws InvalidParameter.
void validate_config(const RunConfig& cfg);

CellProblem problem_from_config(const RunConfig& cfg);

// Canonical "key = value" echo of every effective setting, for file headers.
std::vector<std::string> config_header_lines(const RunConfig& cfg);

}  // namespace periwave
