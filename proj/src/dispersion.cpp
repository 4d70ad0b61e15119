#include "periwave/dispersion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "periwave/cell_solver.hpp"
#include "periwave/csv_io.hpp"
#include "periwave/errors.hpp"
#include "periwave/parallel.hpp"

namespace periwave {

namespace {

constexpr int kDenseDofLimit = 2000;
constexpr double kSlopeTol = 1e-6;
constexpr double kCrossingMergeTol = 1e-3;

std::uint64_t alpha_seed(double alpha, int n_bands) {
  std::uint64_t bits;
  std::memcpy(&bits, &alpha, sizeof(bits));
  return bits ^ (static_cast<std::uint64_t>(n_bands) << 48);
}

// Pencil eigenvalues can carry -1e-14 noise on the flat bottom band;
// the pencil itself is positive semidefinite.
double clamp_tiny_negative(double mu) {
  return (mu < 0.0 && mu > -1e-9) ? 0.0 : mu;
}

std::vector<EigenPair> dense_band_eigenpairs(const CellDiscretization& disc, double alpha,
                                             int n_bands) {
  const MatC A = dense_bloch_matrix(disc, alpha);
  const MatC B = disc.mass_q.cast<Complex>().toDense();
  Eigen::GeneralizedSelfAdjointEigenSolver<MatC> es(A, B, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("dense Bloch eigensolve failed at alpha=" + std::to_string(alpha));
  std::vector<EigenPair> out;
  out.reserve(static_cast<std::size_t>(n_bands));
  for (int i = 0; i < n_bands; ++i)
    out.push_back({clamp_tiny_negative(es.eigenvalues()[i]), es.eigenvectors().col(i)});
  return out;
}

}  // namespace

std::vector<EigenPair> band_eigenpairs(const CellDiscretization& disc, double alpha, int n_bands) {
  if (n_bands < 1 || n_bands > disc.n_dofs() / 4)
    throw InvalidParameter("n_bands must lie in [1, dofs/4]");
  if (disc.n_dofs() <= kDenseDofLimit)
    return dense_band_eigenpairs(disc, alpha, n_bands);
  const SpMatC A = sparse_bloch_matrix(disc, alpha);
  auto pairs = lowest_eigenpairs(A, disc.mass_q, n_bands, /*sigma=*/-1.0,
                                 alpha_seed(alpha, n_bands));
  for (auto& p : pairs) p.value = clamp_tiny_negative(p.value);
  return pairs;
}

std::vector<double> band_eigenvalues(const CellDiscretization& disc, double alpha, int n_bands) {
  if (n_bands < 1 || n_bands > disc.n_dofs() / 4)
    throw InvalidParameter("n_bands must lie in [1, dofs/4]");
  if (disc.n_dofs() <= kDenseDofLimit) {
    const MatC A = dense_bloch_matrix(disc, alpha);
    const MatR B = disc.mass_q.toDense();
    auto all = dense_eigenvalues(A, B);
    std::vector<double> out(all.begin(), all.begin() + n_bands);
    for (auto& mu : out) mu = clamp_tiny_negative(mu);
    return out;
  }
  auto pairs = band_eigenpairs(disc, alpha, n_bands);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.value);
  return out;
}

DispersionDiagram compute_diagram(const CellDiscretization& disc, int n_alpha, int n_bands,
                                  int threads) {
  if (n_alpha < 16)
    throw InvalidParameter("diagram needs n_alpha >= 16");
  DispersionDiagram d;
  d.alphas.resize(static_cast<std::size_t>(n_alpha));
  for (int i = 0; i < n_alpha; ++i)
    d.alphas[static_cast<std::size_t>(i)] = -kPi + 2.0 * kPi * (i + 1) / n_alpha;
  d.bands.resize(n_bands, n_alpha);
  parallel_for_static(static_cast<std::size_t>(n_alpha), threads, [&](std::size_t i, int) {
    const auto mus = band_eigenvalues(disc, d.alphas[i], n_bands);
    for (int n = 0; n < n_bands; ++n)
      d.bands(n, static_cast<Eigen::Index>(i)) = mus[static_cast<std::size_t>(n)];
  });
  return d;
}

const char* crossing_class_label(CrossingClass c) {
  switch (c) {
    case CrossingClass::kRightPropagating: return "RUS";
    case CrossingClass::kLeftPropagating: return "LUS";
    case CrossingClass::kStationary: return "SUS";
  }
  return "?";
}

namespace {

double rayleigh_slope(const CellDiscretization& disc, double alpha, const VecC& v) {
  // d/d alpha of <v, A(alpha) v> / <v, Mq v> at the eigenvector:
  // A'(alpha) = i S + 2 alpha M.
  const VecC sv = disc.transport.cast<Complex>() * v;
  const VecC mv = disc.mass.cast<Complex>() * v;
  const VecC bv = disc.mass_q.cast<Complex>() * v;
  const Complex num = Complex(0.0, 1.0) * v.dot(sv) + 2.0 * alpha * v.dot(mv);
  const Complex den = v.dot(bv);
  return (num / den).real();
}

}  // namespace

std::vector<Crossing> find_crossings(const DispersionDiagram& diagram,
                                     const CellDiscretization& disc, double k2) {
  if (!(k2 > 0.0))
    throw InvalidParameter("find_crossings needs k2 > 0");
  const int n_bands = static_cast<int>(diagram.bands.rows());
  const int n_alpha = static_cast<int>(diagram.bands.cols());
  const double val_tol = 1e-8 * k2;
  std::vector<Crossing> found;

  for (int n = 0; n < n_bands; ++n) {
    for (int i = 0; i < n_alpha; ++i) {
      // Grid interval [alpha_i, alpha_{i+1}], wrapping pi -> -pi + 2 pi.
      const int j = (i + 1) % n_alpha;
      double a_lo = diagram.alphas[static_cast<std::size_t>(i)];
      double a_hi = diagram.alphas[static_cast<std::size_t>(j)] + (j == 0 ? 2.0 * kPi : 0.0);
      double g_lo = diagram.bands(n, i) - k2;
      double g_hi = diagram.bands(n, j) - k2;
      if (g_lo == 0.0) g_lo = -std::numeric_limits<double>::min();
      if (!(g_lo * g_hi < 0.0)) continue;

      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (a_lo + a_hi);
        const double g_mid = band_eigenvalues(disc, mid, n + 1)[static_cast<std::size_t>(n)] - k2;
        if (std::abs(g_mid) <= val_tol || a_hi - a_lo < 1e-13) {
          a_lo = a_hi = mid;
          break;
        }
        if ((g_mid < 0.0) == (g_lo < 0.0)) {
          a_lo = mid;
          g_lo = g_mid;
        } else {
          a_hi = mid;
        }
      }
      double alpha_star = 0.5 * (a_lo + a_hi);
      // Map back into (-pi, pi].
      if (alpha_star > kPi) alpha_star -= 2.0 * kPi;

      const auto pairs = band_eigenpairs(disc, alpha_star, n + 1);
      const double mu = pairs[static_cast<std::size_t>(n)].value;
      if (std::abs(mu - k2) > val_tol)
        throw NumericalFailure("crossing refinement stalled: |mu - k2| = " +
                               std::to_string(std::abs(mu - k2)));
      const double slope = rayleigh_slope(disc, alpha_star, pairs[static_cast<std::size_t>(n)].vector);

      // Independent slope estimate by central differences.
      const double fd_step = 1e-4;
      const double mu_p = band_eigenvalues(disc, alpha_star + fd_step, n + 1)[static_cast<std::size_t>(n)];
      const double mu_m = band_eigenvalues(disc, alpha_star - fd_step, n + 1)[static_cast<std::size_t>(n)];
      const double fd_slope = (mu_p - mu_m) / (2.0 * fd_step);
      if (std::abs(fd_slope - slope) > 1e-3 * std::max(std::abs(slope), 1.0))
        throw NumericalFailure("slope cross-check failed: rayleigh=" + std::to_string(slope) +
                               " fd=" + std::to_string(fd_slope));

      if (std::abs(slope) <= kSlopeTol)
        throw AssumptionViolated("stationary crossing (|slope| <= 1e-6) at alpha=" +
                                 std::to_string(alpha_star));

      Crossing c;
      c.alpha = alpha_star;
      c.band = n;
      c.slope = slope;
      c.cls = slope > 0.0 ? CrossingClass::kRightPropagating : CrossingClass::kLeftPropagating;
      c.z = std::exp(Complex(0.0, alpha_star));
      found.push_back(c);
    }
  }

  // Deduplicate crossings discovered from both sides of a grid node.
  std::sort(found.begin(), found.end(), [](const Crossing& a, const Crossing& b) {
    return a.alpha < b.alpha;
  });
  std::vector<Crossing> unique;
  for (const auto& c : found) {
    if (!unique.empty() && c.band == unique.back().band &&
        std::abs(c.alpha - unique.back().alpha) < 1e-6)
      continue;
    unique.push_back(c);
  }

  for (std::size_t i = 0; i + 1 < unique.size(); ++i) {
    if (unique[i + 1].cls != unique[i].cls &&
        std::abs(unique[i + 1].alpha - unique[i].alpha) < kCrossingMergeTol)
      throw AssumptionViolated("opposite-class crossings closer than merge tolerance near alpha=" +
                               std::to_string(unique[i].alpha));
  }
  return unique;
}

namespace {

// Golden-section refinement of a band extremum around grid index i_best.
double refine_extremum(const CellDiscretization& disc, const DispersionDiagram& diagram, int band,
                       int i_best, bool maximize) {
  const int n_alpha = static_cast<int>(diagram.bands.cols());
  const auto alpha_at = [&](int i) {
    // Unwrapped neighborhood around i_best (indices may step outside range).
    const int w = ((i % n_alpha) + n_alpha) % n_alpha;
    double a = diagram.alphas[static_cast<std::size_t>(w)];
    a += 2.0 * kPi * std::floor((static_cast<double>(i - w) / n_alpha) + 0.5);
    return a;
  };
  double lo = alpha_at(i_best - 1), hi = alpha_at(i_best + 1);
  const double sgn = maximize ? -1.0 : 1.0;
  const auto f = [&](double a) {
    double aa = a;
    while (aa > kPi) aa -= 2.0 * kPi;
    while (aa <= -kPi) aa += 2.0 * kPi;
    return sgn * band_eigenvalues(disc, aa, band + 1)[static_cast<std::size_t>(band)];
  };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 40 && std::abs(fc - fd) > 1e-4; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  return sgn * std::min(fc, fd);
}

}  // namespace

std::vector<std::array<double, 2>> stop_bands(const DispersionDiagram& diagram,
                                              const CellDiscretization& disc,
                                              std::array<double, 2> k2_range) {
  const int n_bands = static_cast<int>(diagram.bands.rows());
  const int n_alpha = static_cast<int>(diagram.bands.cols());

  // Refined [min, max] range of each band.
  std::vector<std::array<double, 2>> ranges;
  for (int n = 0; n < n_bands; ++n) {
    int i_min = 0, i_max = 0;
    for (int i = 1; i < n_alpha; ++i) {
      if (diagram.bands(n, i) < diagram.bands(n, i_min)) i_min = i;
      if (diagram.bands(n, i) > diagram.bands(n, i_max)) i_max = i;
    }
    const double lo = refine_extremum(disc, diagram, n, i_min, /*maximize=*/false);
    const double hi = refine_extremum(disc, diagram, n, i_max, /*maximize=*/true);
    ranges.push_back({lo, hi});
  }

  // Merge the covered intervals, then report gaps clipped to k2_range.
  std::sort(ranges.begin(), ranges.end(),
            [](const std::array<double, 2>& a, const std::array<double, 2>& b) { return a[0] < b[0]; });
  std::vector<std::array<double, 2>> merged;
  for (const auto& r : ranges) {
    if (!merged.empty() && r[0] <= merged.back()[1]) {
      merged.back()[1] = std::max(merged.back()[1], r[1]);
    } else {
      merged.push_back(r);
    }
  }
  std::vector<std::array<double, 2>> gaps;
  double cursor = k2_range[0];
  for (const auto& r : merged) {
    if (r[0] > cursor)
      gaps.push_back({cursor, std::min(r[0], k2_range[1])});
    cursor = std::max(cursor, r[1]);
    if (cursor >= k2_range[1]) break;
  }
  if (cursor < k2_range[1]) gaps.push_back({cursor, k2_range[1]});
  std::vector<std::array<double, 2>> out;
  for (const auto& g : gaps)
    if (g[1] > g[0] + 1e-12 && g[1] > k2_range[0] && g[0] < k2_range[1]) out.push_back(g);
  return out;
}

MultiplierScan multiplier_scan(const CellDiscretization& disc, double k2, double r_min,
                               double r_max, int n_r, int n_theta, int threads) {
  if (!(r_min > 0.0) || !(r_min < 1.0) || !(r_max > 1.0))
    throw InvalidParameter("multiplier scan needs 0 < r_min < 1 < r_max");
  MultiplierScan scan;
  scan.radii.resize(static_cast<std::size_t>(n_r));
  for (int i = 0; i < n_r; ++i)
    scan.radii[static_cast<std::size_t>(i)] =
        n_r == 1 ? 1.0 : r_min + (r_max - r_min) * i / (n_r - 1.0);
  scan.thetas.resize(static_cast<std::size_t>(n_theta));
  for (int j = 0; j < n_theta; ++j)
    scan.thetas[static_cast<std::size_t>(j)] = -kPi + 2.0 * kPi * (j + 0.5) / n_theta;
  scan.indicator.resize(n_r, n_theta);
  parallel_for_static(static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta), threads,
                      [&](std::size_t task, int) {
                        const int i = static_cast<int>(task) / n_theta;
                        const int j = static_cast<int>(task) % n_theta;
                        const Complex z = std::polar(scan.radii[static_cast<std::size_t>(i)],
                                                     scan.thetas[static_cast<std::size_t>(j)]);
                        scan.indicator(i, j) = singularity_indicator(disc, z, k2);
                      });
  return scan;
}

void dump_diagram_csv(const DispersionDiagram& diagram, const std::string& path,
                      const std::vector<std::string>& header_lines) {
  CsvWriter w(path);
  for (const auto& line : header_lines) w.comment(line);
  std::vector<std::string> cols{"alpha"};
  for (int n = 0; n < diagram.bands.rows(); ++n) cols.push_back("mu_" + std::to_string(n + 1));
  w.columns(cols);
  for (std::size_t i = 0; i < diagram.alphas.size(); ++i) {
    std::vector<double> row{diagram.alphas[i]};
    for (int n = 0; n < diagram.bands.rows(); ++n)
      row.push_back(diagram.bands(n, static_cast<Eigen::Index>(i)));
    w.row(row);
  }
}

void dump_crossings_csv(const std::vector<Crossing>& crossings, const std::string& path,
                        const std::vector<std::string>& header_lines) {
  CsvWriter w(path);
  for (const auto& line : header_lines) w.comment(line);
  w.columns({"alpha", "band", "slope", "class"});
  for (const auto& c : crossings)
    w.text_row({format_full(c.alpha), std::to_string(c.band + 1), format_full(c.slope),
                crossing_class_label(c.cls)});
}

void dump_scan_csv(const MultiplierScan& scan, const std::string& path,
                   const std::vector<std::string>& header_lines) {
  CsvWriter w(path);
  for (const auto& line : header_lines) w.comment(line);
  w.columns({"re_z", "im_z", "indicator"});
  for (std::size_t i = 0; i < scan.radii.size(); ++i)
    for (std::size_t j = 0; j < scan.thetas.size(); ++j) {
      const Complex z = std::polar(scan.radii[i], scan.thetas[j]);
      w.row(std::vector<double>{z.real(), z.imag(),
                                scan.indicator(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
}

}  // namespace periwave
