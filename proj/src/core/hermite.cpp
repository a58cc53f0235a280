#include "mlsc/core/hermite.hpp"

#include <cmath>
#include <numbers>

#include "mlsc/core/errors.hpp"

namespace mlsc::core {

HermiteBasis hermite_basis(int m, double scale, const Grid& grid, bool check_gram,
                           double gram_tol) {
  using std::numbers::pi;
  if (m < 1) throw config_error("hermite_basis: m >= 1");
  if (!(scale > 0.0)) throw config_error("hermite_basis: scale > 0");
  if (grid.dim != 1) throw config_error("hermite_basis: 1-d grid");

  // stated resolution rule (necessary; the Gram gate below catches the rest);
  // the box must hold twice the classical turning radius sqrt((2m+1)/scale)
  const double ratio = std::max(scale, 1.0 / scale);
  const int n_min = 8 * static_cast<int>(std::ceil(std::sqrt(m * ratio)));
  const double l_min = 2.0 * std::sqrt((2.0 * m + 1.0) / scale);
  if (grid.n < n_min || grid.half_width < l_min)
    throw precondition_error("hermite_basis: grid below the resolution rule for (m, scale)");

  HermiteBasis b;
  b.grid = grid;
  b.m = m;
  b.scale = scale;
  b.values.assign(static_cast<std::size_t>(m) * grid.n, 0.0);

  const double c0 = std::pow(scale, 0.25) * std::pow(pi, -0.25);
  for (int j = 0; j < grid.n; ++j) {
    const double u = grid.coord(j);
    b.values[j] = c0 * std::exp(-0.5 * scale * u * u);
  }
  if (m > 1)
    for (int j = 0; j < grid.n; ++j)
      b.values[static_cast<std::size_t>(grid.n) + j] =
          std::sqrt(2.0 * scale) * grid.coord(j) * b.values[j];
  for (int k = 2; k < m; ++k) {
    const double a1 = std::sqrt(2.0 * scale / k);
    const double a2 = std::sqrt((k - 1.0) / k);
    double* row = b.values.data() + static_cast<std::size_t>(k) * grid.n;
    const double* r1 = b.values.data() + static_cast<std::size_t>(k - 1) * grid.n;
    const double* r2 = b.values.data() + static_cast<std::size_t>(k - 2) * grid.n;
    for (int j = 0; j < grid.n; ++j) row[j] = a1 * grid.coord(j) * r1[j] - a2 * r2[j];
  }

  if (check_gram) {
    b.gram_deviation = gram_deviation(b);
    if (b.gram_deviation > gram_tol)
      throw precondition_error("hermite_basis: Gram deviation " +
                               std::to_string(b.gram_deviation) +
                               " exceeds tolerance (under-resolved grid)");
  }
  return b;
}

Grid hermite_grid(int m, double scale, double extra_half_width, double extra_freq) {
  const double l_rule = 2.0 * std::sqrt((2.0 * m + 1.0) / scale);
  const double l = l_rule + extra_half_width;
  // top basis function oscillates at sqrt(2 m scale) rad; products double it
  const double omega = 2.0 * std::sqrt(2.0 * m * scale) + extra_freq;
  const double h_max = std::numbers::pi / (1.5 * omega);
  const double ratio = std::max(scale, 1.0 / scale);
  int n = std::max(8 * static_cast<int>(std::ceil(std::sqrt(m * ratio))),
                   static_cast<int>(std::ceil(2.0 * l / h_max)));
  if (n % 2) ++n;
  return Grid(1, l, n);
}

void hermite_point(int m, double scale, double u, double* out) {
  if (m < 1) throw config_error("hermite_point: m >= 1");
  if (!(scale > 0.0)) throw config_error("hermite_point: scale > 0");
  const double c0 = std::pow(scale, 0.25) * std::pow(std::numbers::pi, -0.25);
  out[0] = c0 * std::exp(-0.5 * scale * u * u);
  if (m > 1) out[1] = std::sqrt(2.0 * scale) * u * out[0];
  for (int k = 2; k < m; ++k)
    out[k] = std::sqrt(2.0 * scale / k) * u * out[k - 1] -
             std::sqrt((k - 1.0) / k) * out[k - 2];
}

double recurrence_residual(const HermiteBasis& b) {
  double worst = 0.0;
  for (int k = 1; k + 1 < b.m; ++k) {
    const double a1 = std::sqrt(2.0 * b.scale / (k + 1.0));
    const double a2 = std::sqrt(k / (k + 1.0));
    const double* rk = b.row(k);
    const double* rkm = b.row(k - 1);
    const double* rkp = b.row(k + 1);
    for (int j = 0; j < b.grid.n; ++j) {
      const double u = b.grid.coord(j);
      worst = std::max(worst, std::abs(rkp[j] - (a1 * u * rk[j] - a2 * rkm[j])));
    }
  }
  return worst;
}

double gram_deviation(const HermiteBasis& b) {
  const double h = b.grid.spacing();
  double worst = 0.0;
  for (int p = 0; p < b.m; ++p)
    for (int q = p; q < b.m; ++q) {
      double s = 0.0;
      const double* rp = b.row(p);
      const double* rq = b.row(q);
      for (int j = 0; j < b.grid.n; ++j) s += rp[j] * rq[j];
      s *= h;
      worst = std::max(worst, std::abs(s - (p == q ? 1.0 : 0.0)));
    }
  return worst;
}

}  // namespace mlsc::core
