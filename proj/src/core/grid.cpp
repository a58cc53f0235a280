#include "mlsc/core/grid.hpp"

#include <cmath>
#include <numbers>

#include "mlsc/core/errors.hpp"
#include "mlsc/core/fft.hpp"
#include "mlsc/core/rng.hpp"

namespace mlsc::core {

Grid::Grid(int dim_, double half_width_, int n_) : dim(dim_), half_width(half_width_), n(n_) {
  if (dim < 1 || dim > 3) throw config_error("grid dimension must be 1..3");
  if (!(half_width > 0.0)) throw config_error("grid half-width must be positive");
  if (n < 4 || n % 2 != 0) throw config_error("grid needs an even sample count >= 4");
}

std::size_t Grid::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n);
  return s;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= spacing();
  return v;
}

void Grid::unflatten(std::size_t idx, int* ix) const {
  for (int a = dim - 1; a >= 0; --a) {
    ix[a] = static_cast<int>(idx % n);
    idx /= n;
  }
}

std::size_t Grid::flatten(const int* ix) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim; ++a) idx = idx * n + ix[a];
  return idx;
}

Grid dual_grid(const Grid& g) {
  return Grid(g.dim, g.n / (4.0 * g.half_width), g.n);
}

GridFunction sample(const Grid& g, const std::function<cplx(const double*)>& f) {
  GridFunction out(g);
  int ix[3];
  double pt[3];
  for (std::size_t i = 0; i < out.size(); ++i) {
    g.unflatten(i, ix);
    for (int a = 0; a < g.dim; ++a) pt[a] = g.coord(ix[a]);
    out[i] = f(pt);
  }
  return out;
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
  if (!(f.grid == g.grid)) throw config_error("inner_product: grid mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
  return s * f.grid.cell_volume();
}

double norm_l2(const GridFunction& f) { return std::sqrt(total_mass(f)); }

double total_mass(const GridFunction& f) {
  double s = 0.0;
  for (const cplx& v : f.values) s += std::norm(v);
  return s * f.grid.cell_volume();
}

double boundary_mass_fraction(const GridFunction& f, double margin) {
  const Grid& g = f.grid;
  double total = 0.0, edge = 0.0;
  int ix[3];
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m = std::norm(f[i]);
    total += m;
    g.unflatten(i, ix);
    for (int a = 0; a < g.dim; ++a) {
      if (g.half_width - std::abs(g.coord(ix[a])) <= margin) {
        edge += m;
        break;
      }
    }
  }
  return total > 0.0 ? edge / total : 0.0;
}

TrigInterp::TrigInterp(const GridFunction& f) : grid_(f.grid) {
  GridFunction spec = dft(f);
  spectrum_ = std::move(spec.values);
}

cplx TrigInterp::operator()(const double* pt) const {
  using std::numbers::pi;
  for (int a = 0; a < grid_.dim; ++a)
    if (std::abs(pt[a]) >= grid_.half_width) return 0.0;  // compact support, no wrap
  const Grid dual = dual_grid(grid_);
  const double dxi = dual.spacing();
  // f(x) = sum_k fhat(xi_k) exp(2 pi i x.xi_k) * dxi^dim
  cplx acc = 0.0;
  int ix[3];
  for (std::size_t i = 0; i < spectrum_.size(); ++i) {
    dual.unflatten(i, ix);
    double phase = 0.0;
    for (int a = 0; a < grid_.dim; ++a) phase += pt[a] * dual.coord(ix[a]);
    acc += spectrum_[i] * std::polar(1.0, 2.0 * pi * phase);
  }
  double w = 1.0;
  for (int a = 0; a < grid_.dim; ++a) w *= dxi;
  return acc * w;
}

GridFunction random_smooth(const Grid& g, Rng& rng, double band_frac) {
  const Grid dual = dual_grid(g);
  GridFunction spec(dual);
  const double band = band_frac * dual.half_width;
  int ix[3];
  for (std::size_t i = 0; i < spec.size(); ++i) {
    dual.unflatten(i, ix);
    double r2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double x = dual.coord(ix[a]);
      r2 += x * x;
    }
    const double env = std::exp(-r2 / (band * band));
    spec[i] = env > 1e-12 ? cplx(rng.normal(), rng.normal()) * env : cplx(0.0);
  }
  GridFunction f = idft(spec);
  const double nrm = norm_l2(f);
  for (cplx& v : f.values) v /= nrm;
  return f;
}

}  // namespace mlsc::core
