#pragma once

#include <array>
#include <string>
#include <vector>

#include "periwave/cell_system.hpp"
#include "periwave/eigensolve.hpp"
#include "periwave/types.hpp"

namespace periwave {

// Band functions mu_n(alpha) sampled on a uniform grid over (-pi, pi].
struct DispersionDiagram {
  std::vector<double> alphas;
  MatR bands;  // n_bands rows, one column per alpha, ascending down each column
};

enum class CrossingClass { kRightPropagating, kLeftPropagating, kStationary };

const char* crossing_class_label(CrossingClass c);  // "RUS" / "LUS" / "SUS"

struct Crossing {
  double alpha;  // in (-pi, pi]
  int band;      // 0-based ascending band index
  double slope;  // d mu_band / d alpha at the crossing
  CrossingClass cls;
  Complex z;     // e^{i alpha}
};

// Lowest n_bands eigenvalues of the Bloch pencil A(alpha) v = mu Mq v.
std::vector<double> band_eigenvalues(const CellDiscretization& disc, double alpha, int n_bands);
std::vector<EigenPair> band_eigenpairs(const CellDiscretization& disc, double alpha, int n_bands);

DispersionDiagram compute_diagram(const CellDiscretization& disc, int n_alpha, int n_bands,
                                  int threads = 1);

// Sign-change scan of mu_n - k2 over the grid, bisection refinement to
// |mu - k2| <= 1e-8 k2, slope from the Rayleigh-quotient derivative
// <v, (iS + 2 alpha M) v> / <v, Mq v> cross-checked by central differences.
std::vector<Crossing> find_crossings(const DispersionDiagram& diagram,
                                     const CellDiscretization& disc, double k2);

// Maximal subintervals of k2_range missed by every band's range; endpoints
// refined by local search on the owning band to 1e-3.
std::vector<std::array<double, 2>> stop_bands(const DispersionDiagram& diagram,
                                              const CellDiscretization& disc,
                                              std::array<double, 2> k2_range);

struct MultiplierScan {
  std::vector<double> radii;
  std::vector<double> thetas;
  MatR indicator;  // n_r rows, n_theta columns
};

MultiplierScan multiplier_scan(const CellDiscretization& disc, double k2, double r_min,
                               double r_max, int n_r, int n_theta, int threads = 1);

void dump_diagram_csv(const DispersionDiagram& diagram, const std::string& path,
                      const std::vector<std::string>& header_lines = {});
void dump_crossings_csv(const std::vector<Crossing>& crossings, const std::string& path,
                        const std::vector<std::string>& header_lines = {});
void dump_scan_csv(const MultiplierScan& scan, const std::string& path,
                   const std::vector<std::string>& header_lines = {});

}  // namespace periwave
