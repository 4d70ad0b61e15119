#include "periwave/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "periwave/csv_io.hpp"
#include "periwave/errors.hpp"

namespace periwave {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    throw InvalidParameter("config: key '" + key + "' expects a number, got '" + value + "'");
  }
  if (trim(value.substr(pos)).size() != 0) {
    throw InvalidParameter("config: key '" + key + "' has trailing text in '" + value + "'");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_real(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw InvalidParameter("config: key '" + key + "' expects an integer, got '" + value + "'");
  }
  return i;
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw InvalidParameter("config: empty entry in list '" + key + "'");
    out.push_back(parse_real(key, item));
  }
  if (out.empty()) throw InvalidParameter("config: empty list for key '" + key + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  for (double v : parse_real_list(key, value)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) {
      throw InvalidParameter("config: list '" + key + "' expects integers");
    }
    out.push_back(i);
  }
  return out;
}

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += format_full(v[i]);
  }
  return s;
}

std::string join_ints(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::stringstream stream(text);
  std::string raw;
  int line_no = 0;
  bool any_content = false;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    any_content = true;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw InvalidParameter("config line " + std::to_string(line_no) + ": unterminated section");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section != "halfguide" && section != "expression" && section != "oracle" &&
          section != "scan" && section != "convergence") {
        throw InvalidParameter("config line " + std::to_string(line_no) + ": unknown section [" +
                               section + "]");
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameter("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key_local = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key_local.empty()) {
      throw InvalidParameter("config line " + std::to_string(line_no) + ": empty key");
    }
    const std::string key = section.empty() ? key_local : section + "." + key_local;
    if (!seen.insert(key).second) {
      throw InvalidParameter("config: duplicate key '" + key + "'");
    }

    if (key == "mode") cfg.mode = value;
    else if (key == "problem") cfg.problem = value;
    else if (key == "k2") cfg.k2 = parse_real(key, value);
    else if (key == "h") cfg.h = parse_real(key, value);
    else if (key == "N") cfg.N = parse_int(key, value);
    else if (key == "N0") cfg.N0 = parse_int(key, value);
    else if (key == "delta") cfg.delta = parse_real(key, value);
    else if (key == "n_min") cfg.n_min = parse_int(key, value);
    else if (key == "n_max") cfg.n_max = parse_int(key, value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "threads") cfg.threads = parse_int(key, value);
    else if (key == "n_alpha") cfg.n_alpha = parse_int(key, value);
    else if (key == "n_bands") cfg.n_bands = parse_int(key, value);
    else if (key == "expression.q") cfg.q_expr = value;
    else if (key == "expression.f") cfg.f_expr = value;
    else if (key == "halfguide.modes_x1") cfg.modes_x1 = parse_int(key, value);
    else if (key == "halfguide.modes_x2") cfg.modes_x2 = parse_int(key, value);
    else if (key == "halfguide.alpha_sweep") cfg.alpha_sweep = parse_real_list(key, value);
    else if (key == "halfguide.phi_file") cfg.phi_file = value;
    else if (key == "oracle.R") cfg.oracle_R = parse_int(key, value);
    else if (key == "oracle.eps") cfg.oracle_eps = parse_real_list(key, value);
    else if (key == "scan.r_min") cfg.scan_r_min = parse_real(key, value);
    else if (key == "scan.r_max") cfg.scan_r_max = parse_real(key, value);
    else if (key == "scan.n_r") cfg.scan_n_r = parse_int(key, value);
    else if (key == "scan.n_theta") cfg.scan_n_theta = parse_int(key, value);
    else if (key == "convergence.N_list") cfg.conv_N = parse_int_list(key, value);
    else if (key == "convergence.h_list") cfg.conv_h = parse_real_list(key, value);
    else if (key == "convergence.ref_N") cfg.ref_N = parse_int(key, value);
    else if (key == "convergence.ref_h") cfg.ref_h = parse_real(key, value);
    else throw InvalidParameter("config: unknown key '" + key + "'");
  }
  if (!any_content) throw InvalidParameter("config: file has no settings");
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const RunConfig& cfg) {
  static const std::set<std::string> kModes = {"dispersion", "scan",   "contour", "solve-full",
                                               "solve-half", "oracle", "convergence"};
  if (!kModes.count(cfg.mode)) {
    throw InvalidParameter("config: mode '" + cfg.mode + "' is not a known mode");
  }
  if (cfg.problem != "builtin-ring" && cfg.problem != "expression") {
    throw InvalidParameter("config: problem must be builtin-ring or expression");
  }
  if (cfg.problem == "expression" && (cfg.q_expr.empty() || cfg.f_expr.empty())) {
    throw InvalidParameter("config: expression problem needs [expression] q and f");
  }
  if (!(cfg.k2 > 0.0)) throw InvalidParameter("config: k2 must be > 0");
  if (!(cfg.h > 0.0 && cfg.h <= 0.5)) throw InvalidParameter("config: h must be in (0, 0.5]");
  if (cfg.N < 4 || cfg.N % 2 != 0) throw InvalidParameter("config: N must be even and >= 4");
  if (cfg.N0 < 1) throw InvalidParameter("config: N0 must be >= 1");
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) throw InvalidParameter("config: delta in (0, 1)");
  if (cfg.n_min > cfg.n_max) throw InvalidParameter("config: n_min must be <= n_max");
  if (cfg.threads < 0) throw InvalidParameter("config: threads must be >= 0 (0 = auto)");
  if (cfg.n_alpha < 8) throw InvalidParameter("config: n_alpha must be >= 8");
  if (cfg.n_bands < 1) throw InvalidParameter("config: n_bands must be >= 1");
  if (cfg.mode == "solve-half") {
    if (cfg.modes_x1 < 1 || cfg.modes_x2 < 1) {
      throw InvalidParameter("config: halfguide mode counts must be >= 1");
    }
    for (double a : cfg.alpha_sweep) {
      if (!(a > 0.0)) throw InvalidParameter("config: halfguide alpha_sweep must be > 0");
    }
    if (cfg.n_max < 1) throw InvalidParameter("config: solve-half needs n_max >= 1");
  }
  if (cfg.mode == "oracle") {
    if (cfg.oracle_R < 5) throw InvalidParameter("config: oracle R must be >= 5");
    if (cfg.oracle_eps.size() != 3) {
      throw InvalidParameter("config: oracle eps list must have 3 entries (e, e/2, e/4)");
    }
    for (std::size_t i = 0; i + 1 < cfg.oracle_eps.size(); ++i) {
      if (!(cfg.oracle_eps[i] > cfg.oracle_eps[i + 1] && cfg.oracle_eps[i + 1] > 0.0)) {
        throw InvalidParameter("config: oracle eps list must be positive and decreasing");
      }
    }
  }
  if (cfg.mode == "scan") {
    if (!(cfg.scan_r_min > 0.0 && cfg.scan_r_min < cfg.scan_r_max)) {
      throw InvalidParameter("config: scan radii must satisfy 0 < r_min < r_max");
    }
    if (cfg.scan_n_r < 2 || cfg.scan_n_theta < 4) {
      throw InvalidParameter("config: scan grid too small");
    }
  }
  if (cfg.mode == "convergence") {
    for (int n : cfg.conv_N) {
      if (n < 4 || n % 2 != 0) throw InvalidParameter("config: convergence N entries even, >= 4");
    }
    for (double hh : cfg.conv_h) {
      if (!(hh > 0.0 && hh <= 0.5)) throw InvalidParameter("config: convergence h in (0, 0.5]");
    }
    if (cfg.ref_N < 4 || cfg.ref_N % 2 != 0) {
      throw InvalidParameter("config: convergence ref_N even, >= 4");
    }
    if (!(cfg.ref_h > 0.0 && cfg.ref_h <= 0.5)) {
      throw InvalidParameter("config: convergence ref_h in (0, 0.5]");
    }
  }
}

CellProblem problem_from_config(const RunConfig& cfg) {
  if (cfg.problem == "builtin-ring") return make_ring_problem();
  return make_expression_problem(cfg.q_expr, cfg.f_expr);
}

std::vector<std::string> config_header_lines(const RunConfig& cfg) {
  std::vector<std::string> out;
  out.push_back("mode = " + cfg.mode);
  out.push_back("problem = " + cfg.problem);
  if (cfg.problem == "expression") {
    out.push_back("expression.q = " + cfg.q_expr);
    out.push_back("expression.f = " + cfg.f_expr);
  }
  out.push_back("k2 = " + format_full(cfg.k2));
  out.push_back("h = " + format_full(cfg.h));
  out.push_back("N = " + std::to_string(cfg.N));
  out.push_back("N0 = " + std::to_string(cfg.N0));
  out.push_back("delta = " + format_full(cfg.delta));
  out.push_back("n_min = " + std::to_string(cfg.n_min));
  out.push_back("n_max = " + std::to_string(cfg.n_max));
  out.push_back("out = " + cfg.out_dir);
  out.push_back("threads = " + std::to_string(cfg.threads));
  out.push_back("n_alpha = " + std::to_string(cfg.n_alpha));
  out.push_back("n_bands = " + std::to_string(cfg.n_bands));
  if (cfg.mode == "solve-half") {
    out.push_back("halfguide.modes_x1 = " + std::to_string(cfg.modes_x1));
    out.push_back("halfguide.modes_x2 = " + std::to_string(cfg.modes_x2));
    out.push_back("halfguide.alpha_sweep = " + join_reals(cfg.alpha_sweep));
    out.push_back("halfguide.phi_file = " + cfg.phi_file);
  }
  if (cfg.mode == "oracle") {
    out.push_back("oracle.R = " + std::to_string(cfg.oracle_R));
    out.push_back("oracle.eps = " + join_reals(cfg.oracle_eps));
  }
  if (cfg.mode == "scan") {
    out.push_back("scan.r_min = " + format_full(cfg.scan_r_min));
    out.push_back("scan.r_max = " + format_full(cfg.scan_r_max));
    out.push_back("scan.n_r = " + std::to_string(cfg.scan_n_r));
    out.push_back("scan.n_theta = " + std::to_string(cfg.scan_n_theta));
  }
  if (cfg.mode == "convergence") {
    out.push_back("convergence.N_list = " + join_ints(cfg.conv_N));
    out.push_back("convergence.h_list = " + join_reals(cfg.conv_h));
    out.push_back("convergence.ref_N = " + std::to_string(cfg.ref_N));
    out.push_back("convergence.ref_h = " + format_full(cfg.ref_h));
  }
  return out;
}

}  // namespace periwave
