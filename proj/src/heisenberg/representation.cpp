#include "mlsc/heisenberg/representation.hpp"

#include <cmath>
#include <complex>
#include <exception>
#include <numbers>

#include "mlsc/core/errors.hpp"
#include "mlsc/core/fft.hpp"
#include "mlsc/core/parallel.hpp"

namespace mlsc::heisenberg {

using core::cplx;
using core::Grid;
using core::GridFunction;
using core::HermiteBasis;
using std::numbers::pi;

RepOperator schrodinger_rep(const HermiteBasis& b, double lambda,
                            const HeisenbergElement& g) {
  if (lambda == 0.0) throw config_error("schrodinger_rep: lambda != 0");
  if (std::abs(b.scale - std::abs(lambda)) > 1e-9 * std::max(1.0, std::abs(lambda)))
    throw config_error("schrodinger_rep: basis scale must equal |lambda|");

  const int m = b.m, u = b.grid.n;
  const double du = b.grid.spacing();
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      H(b.values.data(), m, u);

  Eigen::MatrixXcd E(m, u);
  for (int j = 0; j < u; ++j) {
    const cplx p = std::polar(1.0, -lambda * g.x * b.grid.coord(j));
    for (int k = 0; k < m; ++k) E(k, j) = H(k, j) * p;
  }
  Eigen::MatrixXd S(m, u);  // column j holds h_0..h_{m-1} at u_j + y
  for (int j = 0; j < u; ++j)
    core::hermite_point(m, b.scale, b.grid.coord(j) + g.y, S.col(j).data());

  const cplx phase = std::polar(du, lambda * (g.t - 0.5 * g.x * g.y));
  RepOperator out;
  out.lambda = lambda;
  out.mat = phase * (E * S.cast<cplx>().transpose());
  return out;
}

core::HermiteBasis fourier_basis(int m, double lambda, double x_reach,
                                 double y_reach, double dy) {
  if (lambda == 0.0) throw config_error("fourier_basis: lambda != 0");
  if (x_reach < 0.0 || y_reach < 0.0) throw config_error("fourier_basis: reaches >= 0");
  const double beta = std::abs(lambda);
  Grid g0 = core::hermite_grid(m, beta, y_reach, beta * x_reach);
  if (dy > 0.0) {
    const int q = static_cast<int>(std::ceil(dy / g0.spacing() - 1e-12));
    const double step = dy / q;
    const int half = static_cast<int>(std::ceil(g0.half_width / step - 1e-12));
    g0 = Grid(1, half * step, 2 * half);
  }
  return core::hermite_basis(m, beta, g0);
}

int dual_truncation(double lambda) {
  const double a = std::abs(lambda);
  if (!(a > 0.0)) throw config_error("dual_truncation: lambda != 0");
  const double m = std::max({16.0, std::ceil(32.0 * std::sqrt(a)), std::ceil(8.0 / a)});
  return static_cast<int>(m);
}

RepOperator group_fourier(const GridFunction& f, double lambda,
                          const HermiteBasis& b, TruncationInfo* info) {
  if (f.grid.dim != 3) throw config_error("group_fourier: three-dimensional data");
  if (lambda == 0.0) throw config_error("group_fourier: lambda != 0");
  if (std::abs(b.scale - std::abs(lambda)) > 1e-9 * std::max(1.0, std::abs(lambda)))
    throw config_error("group_fourier: basis scale must equal |lambda|");

  const Grid& g = f.grid;
  const int n = g.n;
  const double h = g.spacing();
  if (std::abs(lambda) > pi / (1.5 * h))
    throw precondition_error("group_fourier: t spacing too coarse for this lambda");

  const double rx = axis_support_radius(f, 0, 1e-9);
  const double omega = 2.0 * std::sqrt(2.0 * b.m * b.scale) + std::abs(lambda) * rx;
  if (b.grid.spacing() > 1.02 * pi / (1.5 * omega))
    throw precondition_error("group_fourier: basis spacing too coarse for the data's x extent");

  // t side: F1(x, y) = h sum_t f e^{-i lambda t}
  std::vector<cplx> f1(static_cast<std::size_t>(n) * n);
  std::vector<cplx> pht(n);
  for (int j = 0; j < n; ++j) pht[j] = std::polar(h, -lambda * g.coord(j));
  for (int i = 0; i < n * n; ++i) {
    const cplx* src = f.values.data() + static_cast<std::size_t>(i) * n;
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) acc += src[j] * pht[j];
    f1[i] = acc;
  }

  const int m = b.m, u = b.grid.n;
  const double du = b.grid.spacing();
  const double lu = b.grid.half_width;
  // y band: mode products live inside the turning radius, so offsets beyond
  // twice it cannot touch the matrix.  Basis-intrinsic (not data-adaptive), so
  // the transform stays exactly linear across calls sharing a basis.
  const double span = 2.0 * std::sqrt((2.0 * b.m + 1.0) / b.scale);
  const int cmax = std::min(static_cast<int>(std::floor(span / du)), u - 1);
  const int nc = 2 * cmax + 1;
  const int nd = 2 * u - 1;  // v_d = -lu + d du/2, d = a + b

  // y side: band-limited resample of each x-row onto the basis lattice
  Grid axis(1, g.half_width, n);
  std::vector<cplx> r(static_cast<std::size_t>(n) * nc);
  {
    GridFunction row(axis);
    for (int ix = 0; ix < n; ++ix) {
      for (int iy = 0; iy < n; ++iy) row.values[iy] = f1[static_cast<std::size_t>(ix) * n + iy];
      auto vals = core::chirp_resample(row, -cmax * du, du, nc);
      std::copy(vals.begin(), vals.end(), r.begin() + static_cast<std::size_t>(ix) * nc);
    }
  }

  // x side through the spectrum: G(c, d) = h sum_x R(x, c) e^{i lambda x v_d}
  // is the x-transform read at xi_d = -lambda v_d / (2 pi); evaluating the
  // band-limited interpolant of the spectral samples keeps |xi| beyond the
  // Nyquist band at zero instead of folding it under the modes.
  Grid dualg(1, n / (4.0 * g.half_width), n);
  std::vector<cplx> gcd(static_cast<std::size_t>(nc) * nd);
  {
    GridFunction col(axis), spec(dualg);
    const double step = std::abs(lambda) * du / (4.0 * pi);
    const double xi_at_0 = -lambda * (-lu) / (2.0 * pi);
    const double xi_at_last = -lambda * (-lu + (nd - 1) * du * 0.5) / (2.0 * pi);
    const double xi0 = std::min(xi_at_0, xi_at_last);
    for (int c = 0; c < nc; ++c) {
      for (int ix = 0; ix < n; ++ix) col.values[ix] = r[static_cast<std::size_t>(ix) * nc + c];
      spec.values = core::dft(col).values;
      auto vals = core::chirp_resample(spec, xi0, step, nd);
      cplx* dst = gcd.data() + static_cast<std::size_t>(c) * nd;
      if (lambda > 0.0)  // xi descends with d
        for (int d = 0; d < nd; ++d) dst[d] = vals[nd - 1 - d];
      else
        std::copy(vals.begin(), vals.end(), dst);
    }
  }

  // kernel K(a, b) = G(a-b, a+b) against the mode products
  std::vector<cplx> acc(static_cast<std::size_t>(m) * u, 0.0);
  double kernel_hs2 = 0.0;
  for (int c = -cmax; c <= cmax; ++c) {
    const cplx* gc = gcd.data() + static_cast<std::size_t>(c + cmax) * nd;
    const int b0 = std::max(0, -c), b1 = u - 1 - std::max(0, c);
    for (int j = b0; j <= b1; ++j) kernel_hs2 += std::norm(gc[2 * j + c]);
    for (int k = 0; k < m; ++k) {
      const double* hr = b.values.data() + static_cast<std::size_t>(k) * u;
      cplx* ar = acc.data() + static_cast<std::size_t>(k) * u;
      for (int j = b0; j <= b1; ++j) ar[j] += hr[j + c] * gc[2 * j + c];
    }
  }
  kernel_hs2 *= du * du;

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      H(b.values.data(), m, u);
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      A(acc.data(), m, u);
  RepOperator out;
  out.lambda = lambda;
  out.mat = (du * du) * (A * H.cast<cplx>().transpose());

  if (info) {
    info->kernel_hs2 = kernel_hs2;
    info->matrix_hs2 = out.mat.squaredNorm();
  }
  return out;
}

DualWindow dual_window(double lambda_min, double lambda_max, int per_sign) {
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
    throw config_error("dual_window: 0 < lambda_min < lambda_max");
  if (per_sign < 2) throw config_error("dual_window: at least two nodes per sign");

  std::vector<double> node(per_sign), wt(per_sign);
  const double rho = std::pow(lambda_max / lambda_min, 1.0 / (per_sign - 1));
  for (int j = 0; j < per_sign; ++j) node[j] = lambda_min * std::pow(rho, j);
  node.back() = lambda_max;
  for (int j = 0; j < per_sign; ++j) {
    const double lo = j == 0 ? node[0] : 0.5 * (node[j - 1] + node[j]);
    const double hi = j == per_sign - 1 ? node.back() : 0.5 * (node[j] + node[j + 1]);
    wt[j] = node[j] * (hi - lo);
  }

  DualWindow win;
  win.lambda_min = lambda_min;
  win.lambda_max = lambda_max;
  for (int j = per_sign - 1; j >= 0; --j) {
    win.nodes.push_back(-node[j]);
    win.weights.push_back(wt[j]);
  }
  for (int j = 0; j < per_sign; ++j) {
    win.nodes.push_back(node[j]);
    win.weights.push_back(wt[j]);
  }
  return win;
}

std::vector<double> dual_masses(const GridFunction& f, const DualWindow& win,
                                std::vector<double>* captured) {
  if (f.grid.dim != 3) throw config_error("dual_masses: three-dimensional data");
  const Grid& g = f.grid;
  const int n = g.n;
  const double h = g.spacing();
  if (win.lambda_max > pi / (1.5 * h))
    throw precondition_error("dual_masses: t spacing too coarse for the window top");

  const double rx = axis_support_radius(f, 0, 1e-9) + h;
  const double ry = axis_support_radius(f, 1, 1e-9) + 2.0 * h;
  const int nk = static_cast<int>(win.nodes.size());

  // scalar estimate (2 pi / |lambda|) ||F1||^2 screens nodes with no mass
  std::vector<double> est(nk);
  core::par_for(nk, [&](std::int64_t k) {
    const double lam = win.nodes[k];
    std::vector<cplx> pht(n);
    for (int j = 0; j < n; ++j) pht[j] = std::polar(h, -lam * g.coord(j));
    double sum = 0.0;
    for (int i = 0; i < n * n; ++i) {
      const cplx* src = f.values.data() + static_cast<std::size_t>(i) * n;
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) acc += src[j] * pht[j];
      sum += std::norm(acc);
    }
    est[k] = (2.0 * pi / std::abs(lam)) * sum * h * h;
  });
  double total = 0.0;
  for (int k = 0; k < nk; ++k) total += win.weights[k] * est[k];

  std::vector<double> mass(nk), cap(nk, 1.0);
  std::vector<std::exception_ptr> errs(nk);
  core::par_for(nk, [&](std::int64_t k) {
    if (win.weights[k] * est[k] <= 1e-10 * total) {
      mass[k] = est[k];
      return;
    }
    try {
      const double lam = win.nodes[k];
      HermiteBasis basis = fourier_basis(dual_truncation(lam), lam, rx, ry);
      TruncationInfo ti;
      group_fourier(f, lam, basis, &ti);
      mass[k] = ti.matrix_hs2;
      cap[k] = ti.kernel_hs2 > 0.0 ? ti.matrix_hs2 / ti.kernel_hs2 : 1.0;
    } catch (...) {
      errs[k] = std::current_exception();
    }
  });
  for (int k = 0; k < nk; ++k)
    if (errs[k]) std::rethrow_exception(errs[k]);

  if (captured) *captured = cap;
  return mass;
}

PlancherelFit plancherel_fit(const std::vector<double>& l2sq,
                             const std::vector<std::vector<double>>& masses,
                             const DualWindow& win) {
  const std::size_t nf = l2sq.size();
  if (nf == 0 || masses.size() != nf)
    throw config_error("plancherel_fit: one mass vector per function");
  const std::size_t nk = win.nodes.size();
  for (const auto& m : masses)
    if (m.size() != nk) throw config_error("plancherel_fit: mass vector does not match window");

  std::vector<double> s(nf, 0.0);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < nf; ++i) {
    if (!(l2sq[i] > 0.0)) throw config_error("plancherel_fit: functions must have positive norm");
    for (std::size_t k = 0; k < nk; ++k) s[i] += win.weights[k] * masses[i][k];
    num += s[i] * l2sq[i];
    den += s[i] * s[i];
  }
  if (!(den > 0.0)) throw precondition_error("plancherel_fit: no dual mass inside the window");

  PlancherelFit fit;
  fit.constant = num / den;
  const std::size_t half = nk / 2;
  for (std::size_t i = 0; i < nf; ++i) {
    fit.residuals.push_back(std::abs(fit.constant * s[i] - l2sq[i]) / l2sq[i]);
    // mass below lambda_min, treating ||fhat||^2 as flat down to zero there
    fit.tails.push_back(fit.constant * (masses[i][half - 1] + masses[i][half]) *
                        win.lambda_min * win.lambda_min / 2.0);
  }
  for (std::size_t i = 0; i < nf; ++i)
    if (fit.residuals[i] > 0.05)
      throw precondition_error("plancherel_fit: residual " + std::to_string(fit.residuals[i]) +
                               " at the fitted constant; window or truncation misses mass");
  return fit;
}

}  // namespace mlsc::heisenberg
