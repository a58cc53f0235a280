#pragma once
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace mlsc::core {

using cplx = std::complex<double>;

// Uniform grid on [-L, L)^dim with N samples per axis, N even.
// Points along an axis: x_j = -L + j*h with h = 2L/N.  Functions sampled on
// the grid are treated as compactly supported inside the box; transforms use
// the periodic extension.
struct Grid {
  int dim = 1;
  double half_width = 1.0;  // L
  int n = 0;                // samples per axis

  Grid() = default;
  Grid(int dim_, double half_width_, int n_);

  double spacing() const { return 2.0 * half_width / n; }
  std::size_t size() const;        // n^dim
  double cell_volume() const;      // h^dim
  double coord(int j) const { return -half_width + j * spacing(); }

  void unflatten(std::size_t idx, int* ix) const;  // last axis fastest
  std::size_t flatten(const int* ix) const;

  bool operator==(const Grid&) const = default;
};

// Dual grid carrying the frequencies {k/(2L) : k = -N/2 .. N/2-1}; same N,
// half-width N/(4L), spacing 1/(2L).
Grid dual_grid(const Grid& g);

struct GridFunction {
  Grid grid;
  std::vector<cplx> values;

  GridFunction() = default;
  explicit GridFunction(const Grid& g) : grid(g), values(g.size()) {}

  cplx& operator[](std::size_t i) { return values[i]; }
  const cplx& operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
};

GridFunction sample(const Grid& g, const std::function<cplx(const double*)>& f);

// h^dim * sum_j f_j * conj(g_j); serial reduction in index order
cplx inner_product(const GridFunction& f, const GridFunction& g);
double norm_l2(const GridFunction& f);
double total_mass(const GridFunction& f);  // h^dim * sum |f|^2

// fraction of the L2 mass lying within `margin` of the domain boundary
double boundary_mass_fraction(const GridFunction& f, double margin);

// Band-limited (trigonometric) evaluation of a sampled function at arbitrary
// points.  Points outside the box evaluate to 0 instead of wrapping, matching
// the compact-support reading of grid data.  Cost O(N^dim) per point.
class TrigInterp {
 public:
  explicit TrigInterp(const GridFunction& f);
  cplx operator()(const double* pt) const;
  const Grid& grid() const { return grid_; }

 private:
  Grid grid_;
  std::vector<cplx> spectrum_;  // dual-grid samples of the transform
};

// Random band-limited smooth function: Gaussian spectrum coefficients under a
// decaying envelope with cutoff fraction `band_frac` of the Nyquist band,
// normalized to ||f|| = 1.
struct Rng;
GridFunction random_smooth(const Grid& g, Rng& rng, double band_frac = 0.25);

}  // namespace mlsc::core
