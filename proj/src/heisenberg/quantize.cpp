#include "mlsc/heisenberg/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <numbers>

#include "mlsc/core/bump.hpp"
#include "mlsc/core/errors.hpp"
#include "mlsc/core/fft.hpp"
#include "mlsc/core/parallel.hpp"
#include "mlsc/core/quadrature.hpp"

namespace mlsc::heisenberg {

using core::cplx;
using core::Grid;
using core::GridFunction;
using core::HermiteBasis;
using std::numbers::pi;

namespace {

void check_field(const KernelField& kf) {
  const std::size_t r = kf.kernels.size();
  if (r == 0) throw config_error("kernel field: at least one term");
  if (kf.envelopes.size() != r) throw config_error("kernel field: one envelope per kernel term");
  const Grid& kg = kf.kernels[0].grid;
  if (kg.dim != 3) throw config_error("kernel field: kernels live on the group grid");
  for (const auto& k : kf.kernels)
    if (!(k.grid == kg)) throw config_error("kernel field: kernels share one grid");
  if (kf.xgrid.dim != 3) throw config_error("kernel field: envelope grid over the group");
  if (std::abs(kf.xgrid.half_width - kg.half_width) > 1e-12 * kg.half_width)
    throw config_error("kernel field: envelope grid must share the group box");
  if (kf.xgrid.n > kg.n) throw config_error("kernel field: envelope grid no finer than the kernels");
  for (const auto& e : kf.envelopes)
    if (!(e.grid == kf.xgrid)) throw config_error("kernel field: envelopes live on xgrid");
}

void check_symbol(const GroupSymbolA0& s) {
  check_field(s.field);
  if (!(s.scale_eps > 0.0) || !std::isfinite(s.scale_eps))
    throw config_error("symbol: positive finite scale");
  const std::size_t r = s.field.kernels.size();
  const std::size_t k = s.window.nodes.size();
  if (k == 0 || s.window.weights.size() != k) throw config_error("symbol: empty dual window");
  if (s.hats.size() != r) throw config_error("symbol: one matrix row per field term");
  for (std::size_t i = 0; i < r; ++i) {
    if (s.hats[i].size() != k) throw config_error("symbol: one matrix per window node");
    for (std::size_t j = 0; j < k; ++j) {
      const RepOperator& op = s.hats[i][j];
      if (std::abs(op.lambda - s.window.nodes[j]) > 1e-12 * std::max(1.0, std::abs(s.window.nodes[j])))
        throw config_error("symbol: matrix nodes must match the window");
      if (op.mat.rows() == 0 || op.mat.rows() != op.mat.cols())
        throw config_error("symbol: square matrices");
      if (op.mat.rows() != s.hats[0][j].mat.rows())
        throw config_error("symbol: terms agree on the mode count per node");
    }
  }
}

void check_constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw config_error("positive Plancherel constant required");
}

// kernel support radii plus the sampling margins the transforms want
struct FieldShape {
  double rx = 0.0;
  double ry = 0.0;
};

FieldShape field_shape(const KernelField& kf) {
  const double h = kf.kernels[0].grid.spacing();
  FieldShape fs;
  for (const auto& k : kf.kernels) {
    fs.rx = std::max(fs.rx, axis_support_radius(k, 0, 1e-9));
    fs.ry = std::max(fs.ry, axis_support_radius(k, 1, 1e-9));
  }
  fs.rx += h;
  fs.ry += 2.0 * h;
  return fs;
}

// exact trigonometric upsample onto a finer grid over the same box; Nyquist
// planes split symmetrically so real data stays real
GridFunction upsample3(const GridFunction& f, const Grid& fine) {
  const Grid& cg = f.grid;
  if (cg.dim != 3 || fine.dim != 3) throw config_error("upsample: three-dimensional grids");
  if (std::abs(cg.half_width - fine.half_width) > 1e-12 * fine.half_width)
    throw config_error("upsample: grids must share the box");
  if (fine.n < cg.n) throw config_error("upsample: target at least as fine");
  if (fine == cg) return f;

  GridFunction spec = core::dft(f);
  GridFunction out_spec(core::dual_grid(fine));
  const int nc = cg.n, nf = fine.n;
  for (int a = 0; a < nc; ++a) {
    const int fa = a - nc / 2;
    for (int b = 0; b < nc; ++b) {
      const int fb = b - nc / 2;
      for (int c = 0; c < nc; ++c) {
        const int fc = c - nc / 2;
        const cplx v = spec.values[(static_cast<std::size_t>(a) * nc + b) * nc + c];
        const int fr[3] = {fa, fb, fc};
        int cnt[3];
        int idx[3][2];
        for (int ax = 0; ax < 3; ++ax) {
          if (fr[ax] == -nc / 2 && nc < nf) {
            cnt[ax] = 2;
            idx[ax][0] = -nc / 2 + nf / 2;
            idx[ax][1] = nc / 2 + nf / 2;
          } else {
            cnt[ax] = 1;
            idx[ax][0] = fr[ax] + nf / 2;
          }
        }
        const double w = 1.0 / (cnt[0] * cnt[1] * cnt[2]);
        for (int i0 = 0; i0 < cnt[0]; ++i0)
          for (int i1 = 0; i1 < cnt[1]; ++i1)
            for (int i2 = 0; i2 < cnt[2]; ++i2)
              out_spec.values[(static_cast<std::size_t>(idx[0][i0]) * nf + idx[1][i1]) * nf +
                              idx[2][i2]] += w * v;
      }
    }
  }
  GridFunction out = core::idft(out_spec);
  out.grid = fine;
  return out;
}

// scalar dual-mass estimate (2 pi / |lambda|) ||F1(lambda)||^2, the continuum
// Hilbert-Schmidt mass before mode truncation
double scalar_node_mass(const GridFunction& f, double lam) {
  const Grid& g = f.grid;
  const int n = g.n;
  const double h = g.spacing();
  std::vector<cplx> pht(n);
  for (int j = 0; j < n; ++j) pht[j] = std::polar(h, -lam * g.coord(j));
  double sum = 0.0;
  for (int i = 0; i < n * n; ++i) {
    const cplx* src = f.values.data() + static_cast<std::size_t>(i) * n;
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) acc += src[j] * pht[j];
    sum += std::norm(acc);
  }
  return (2.0 * pi / std::abs(lam)) * sum * h * h;
}

// basis for analysis and synthesis at one window node; dy snaps the basis
// lattice to the target spacing so trace synthesis shifts by whole samples
HermiteBasis node_basis(int m, double lambda, const FieldShape& fs, double dy) {
  return fourier_basis(m, lambda, fs.rx, fs.ry, dy);
}

// coef * Tr(pi_lambda(x_i, y_j, .) B) without the t phase, as an n x n table:
//   Tr = du e^{i lambda (t - x y / 2)} sum_u e^{-i lambda x u} D_y(u),
//   D_y(u) = sum_{k,l} h_k(u) B_{lk} h_l(u + y).
// The u sum is read through the basis-grid spectrum (band-limited at the
// requested frequency lambda x / (2 pi)), the same anti-aliased path the
// analysis side uses; y shifts act on sample indices exactly via the snap.
std::vector<cplx> trace_table(const Grid& g, double lambda, const HermiteBasis& b,
                              const Eigen::MatrixXcd& B, double coef) {
  const int n = g.n, m = b.m, nu = b.grid.n;
  if (B.rows() != m || B.cols() != m)
    throw config_error("trace synthesis: matrix size must match the basis modes");
  const double du = b.grid.spacing();
  const double h = g.spacing();
  const long q = std::lround(h / du);
  if (q < 1 || std::abs(q * du - h) > 1e-9 * h)
    throw config_error("trace synthesis: basis lattice must divide the target spacing");

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      H(b.values.data(), m, nu);
  // G(k, v) = sum_l B_{lk} h_l(v)
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> G =
      B.transpose() * H.cast<cplx>();

  const double step = std::abs(lambda) * h / (2.0 * pi);
  const double x_lo = lambda > 0.0 ? g.coord(0) : g.coord(n - 1);
  const double xi0 = lambda * x_lo / (2.0 * pi);

  std::vector<cplx> tab(static_cast<std::size_t>(n) * n);
  GridFunction d(b.grid);
  for (int j = 0; j < n; ++j) {
    const long s = q * (j - n / 2);
    std::fill(d.values.begin(), d.values.end(), cplx(0.0));
    const long a0 = std::max<long>(0, -s), a1 = std::min<long>(nu - 1, nu - 1 - s);
    for (int k = 0; k < m; ++k) {
      const double* hr = b.row(k);
      const cplx* gr = G.data() + static_cast<std::size_t>(k) * nu;
      for (long v = a0; v <= a1; ++v) d.values[v] += hr[v] * gr[v + s];
    }
    GridFunction spec = core::dft(d);
    auto vals = core::chirp_resample(spec, xi0, step, n);
    const double yj = g.coord(j);
    for (int i = 0; i < n; ++i) {
      const cplx v = lambda > 0.0 ? vals[i] : vals[n - 1 - i];
      tab[static_cast<std::size_t>(i) * n + j] =
          coef * v * std::polar(1.0, -0.5 * lambda * g.coord(i) * yj);
    }
  }
  return tab;
}

// buf(i, j, l) += tab(i, j) e^{i lambda t_l}; serial, called in node order
void apply_table(GridFunction& buf, const std::vector<cplx>& tab, double lambda) {
  const Grid& g = buf.grid;
  const int n = g.n;
  std::vector<cplx> pht(n);
  for (int l = 0; l < n; ++l) pht[l] = std::polar(1.0, lambda * g.coord(l));
  for (int ij = 0; ij < n * n; ++ij) {
    const cplx a = tab[ij];
    if (a == cplx(0.0)) continue;
    cplx* dst = buf.values.data() + static_cast<std::size_t>(ij) * n;
    for (int l = 0; l < n; ++l) dst[l] += a * pht[l];
  }
}

// sup over envelope nodes of |sum_r psi_r(x) kappa_r(y)| for every y
std::vector<double> field_sup_env(const KernelField& kf) {
  const std::size_t ny = kf.kernels[0].grid.size();
  const std::size_t nx = kf.xgrid.size();
  const std::size_t r = kf.kernels.size();
  std::vector<double> env(ny);
  if (r == 1) {
    double mp = 0.0;
    for (const cplx& v : kf.envelopes[0].values) mp = std::max(mp, std::abs(v));
    core::par_for(static_cast<std::int64_t>(ny), [&](std::int64_t y) {
      env[y] = mp * std::abs(kf.kernels[0].values[y]);
    });
    return env;
  }
  core::par_for(static_cast<std::int64_t>(ny), [&](std::int64_t y) {
    double best = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      cplx acc = 0.0;
      for (std::size_t t = 0; t < r; ++t)
        acc += kf.envelopes[t].values[x] * kf.kernels[t].values[y];
      best = std::max(best, std::abs(acc));
    }
    env[y] = best;
  });
  return env;
}

struct NodeStage {
  bool skipped = true;
  double mass = 0.0;  // ||fhat||_F^2, or the scalar estimate when skipped
  std::vector<std::vector<cplx>> tabs;  // per term
};

}  // namespace

DualWindow dual_window_gauss(double lambda_min, double lambda_max, int per_sign) {
  if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
    throw config_error("dual_window_gauss: 0 < lambda_min < lambda_max");
  if (per_sign < 2) throw config_error("dual_window_gauss: at least two nodes per sign");

  // integrate in s = log lambda: fixed smooth interval, even node density
  // per octave; the weight carries lambda^2 = |lambda| dlambda/ds
  const auto& rule = core::gauss_legendre(per_sign);
  const double s0 = std::log(lambda_min), s1 = std::log(lambda_max);
  const double half = 0.5 * (s1 - s0), mid = 0.5 * (s0 + s1);
  std::vector<std::pair<double, double>> nw(per_sign);
  for (int j = 0; j < per_sign; ++j) {
    const double lam = std::exp(mid + half * rule.nodes[j]);
    nw[j] = {lam, lam * lam * rule.weights[j] * half};
  }
  std::sort(nw.begin(), nw.end());
  std::vector<double> node(per_sign), wt(per_sign);
  for (int j = 0; j < per_sign; ++j) {
    node[j] = nw[j].first;
    wt[j] = nw[j].second;
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

GroupSymbolA0 symbol_from_kernel(const KernelField& field, const DualWindow& window) {
  check_field(field);
  const std::size_t nk = window.nodes.size();
  if (nk == 0 || window.weights.size() != nk)
    throw config_error("symbol_from_kernel: empty dual window");
  const Grid& kg = field.kernels[0].grid;
  const double h = kg.spacing();
  if (window.lambda_max > pi / (1.5 * h))
    throw precondition_error("symbol_from_kernel: t spacing too coarse for the window top");

  GroupSymbolA0 sym;
  sym.field = field;
  sym.window = window;
  const FieldShape fs = field_shape(field);
  const std::size_t r = field.kernels.size();
  sym.hats.assign(r, std::vector<RepOperator>(nk));

  std::vector<std::exception_ptr> errs(r * nk);
  core::par_for(static_cast<std::int64_t>(r * nk), [&](std::int64_t idx) {
    const std::size_t t = idx / nk, k = idx % nk;
    try {
      const double lam = window.nodes[k];
      HermiteBasis b = node_basis(dual_truncation(lam), lam, fs, h);
      sym.hats[t][k] = group_fourier(field.kernels[t], lam, b);
    } catch (...) {
      errs[idx] = std::current_exception();
    }
  });
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return sym;
}

Eigen::MatrixXcd symbol_matrix(const GroupSymbolA0& sym, int term, int node) {
  check_symbol(sym);
  if (term < 0 || term >= static_cast<int>(sym.hats.size()))
    throw config_error("symbol_matrix: term out of range");
  if (node < 0 || node >= static_cast<int>(sym.window.nodes.size()))
    throw config_error("symbol_matrix: node out of range");
  const RepOperator& hat = sym.hats[term][node];
  if (sym.scale_eps == 1.0) return hat.mat;

  // dilated read: sigma(eps.pi_lambda) = kappahat(eps^2 lambda), compressed to
  // the stored mode count; the basis is sized for the dilated scale on its own
  const double nu = sym.scale_eps * sym.scale_eps * hat.lambda;
  const FieldShape fs = field_shape(sym.field);
  const int m = static_cast<int>(hat.mat.rows());
  HermiteBasis b = node_basis(m, nu, fs, 0.0);
  return group_fourier(sym.field.kernels[term], nu, b).mat;
}

KernelField kernel_from_symbol(const GroupSymbolA0& sym, double plancherel_constant) {
  check_symbol(sym);
  check_constant(plancherel_constant);
  if (sym.scale_eps != 1.0)
    throw config_error(
        "kernel_from_symbol: dilation acts on the kernel side in closed form; "
        "synthesize the undilated symbol");

  const Grid& kg = sym.field.kernels[0].grid;
  const double h = kg.spacing();
  const FieldShape fs = field_shape(sym.field);
  const std::size_t r = sym.field.kernels.size();
  const std::size_t nk = sym.window.nodes.size();

  std::vector<NodeStage> stage(nk);
  std::vector<std::exception_ptr> errs(nk);
  core::par_for(static_cast<std::int64_t>(nk), [&](std::int64_t k) {
    try {
      const double lam = sym.window.nodes[k];
      const double coef = plancherel_constant * sym.window.weights[k];
      HermiteBasis b = node_basis(dual_truncation(lam), lam, fs, h);
      stage[k].skipped = false;
      stage[k].tabs.resize(r);
      for (std::size_t t = 0; t < r; ++t)
        stage[k].tabs[t] = trace_table(kg, lam, b, sym.hats[t][k].mat, coef);
    } catch (...) {
      errs[k] = std::current_exception();
    }
  });
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  KernelField out;
  out.xgrid = sym.field.xgrid;
  out.envelopes = sym.field.envelopes;
  out.kernels.assign(r, GridFunction(kg));
  for (std::size_t t = 0; t < r; ++t)
    for (std::size_t k = 0; k < nk; ++k)
      apply_table(out.kernels[t], stage[k].tabs[t], sym.window.nodes[k]);
  return out;
}

core::GridFunction op_apply(const GroupSymbolA0& sym, const core::GridFunction& f,
                            double plancherel_constant, OpApplyInfo* info) {
  check_symbol(sym);
  check_constant(plancherel_constant);
  if (f.grid.dim != 3) throw config_error("op_apply: three-dimensional data");

  const Grid& g = f.grid;
  const double h = g.spacing();
  const FieldShape fs = field_shape(sym.field);
  // the basis budgets modulation out to the convolution's x spread
  FieldShape reach;
  reach.rx = axis_support_radius(f, 0, 1e-9) + fs.rx;
  reach.ry = axis_support_radius(f, 1, 1e-9) + 2.0 * h;
  const std::size_t r = sym.field.kernels.size();
  const std::size_t nk = sym.window.nodes.size();

  // scalar screening: nodes carrying no mass of f skip assembly entirely
  std::vector<double> est(nk);
  core::par_for(static_cast<std::int64_t>(nk), [&](std::int64_t k) {
    est[k] = scalar_node_mass(f, sym.window.nodes[k]);
  });
  double total = 0.0;
  for (std::size_t k = 0; k < nk; ++k) total += sym.window.weights[k] * est[k];

  std::vector<NodeStage> stage(nk);
  std::vector<std::exception_ptr> errs(nk);
  core::par_for(static_cast<std::int64_t>(nk), [&](std::int64_t k) {
    if (sym.window.weights[k] * est[k] <= 1e-14 * total) {
      stage[k].mass = est[k];
      return;
    }
    try {
      const double lam = sym.window.nodes[k];
      const double coef = plancherel_constant * sym.window.weights[k];
      HermiteBasis b = node_basis(dual_truncation(lam), lam, reach, h);
      RepOperator fhat = group_fourier(f, lam, b);
      stage[k].skipped = false;
      stage[k].mass = fhat.mat.squaredNorm();
      stage[k].tabs.resize(r);
      for (std::size_t t = 0; t < r; ++t) {
        const Eigen::MatrixXcd bmat = symbol_matrix(sym, static_cast<int>(t),
                                                    static_cast<int>(k)) *
                                      fhat.mat;
        stage[k].tabs[t] = trace_table(g, lam, b, bmat, coef);
      }
    } catch (...) {
      errs[k] = std::current_exception();
    }
  });
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  GridFunction out(g);
  for (std::size_t t = 0; t < r; ++t) {
    GridFunction buf(g);
    for (std::size_t k = 0; k < nk; ++k)
      if (!stage[k].skipped) apply_table(buf, stage[k].tabs[t], sym.window.nodes[k]);
    const GridFunction psi = upsample3(sym.field.envelopes[t], g);
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += psi.values[i] * buf.values[i];
  }

  if (info) {
    double captured = 0.0;
    for (std::size_t k = 0; k < nk; ++k) captured += sym.window.weights[k] * stage[k].mass;
    const double fsq = core::inner_product(f, f).real();
    info->tail_fraction =
        fsq > 0.0 ? std::sqrt(std::max(0.0, 1.0 - plancherel_constant * captured / fsq)) : 0.0;
    // flank integrals only: what an octave more window on each side would add
    info->window_shift = 0.0;
    if (fsq > 0.0) {
      double extra = 0.0;
      const double hi = std::min(2.0 * sym.window.lambda_max, 0.99 * pi / (1.5 * h));
      for (auto [a, b] : {std::pair{0.5 * sym.window.lambda_min, sym.window.lambda_min},
                          std::pair{sym.window.lambda_max, hi}}) {
        if (!(b > a)) continue;
        DualWindow aux = dual_window(a, b, 16);
        for (std::size_t k = 0; k < aux.nodes.size(); ++k)
          extra += aux.weights[k] * scalar_node_mass(f, aux.nodes[k]);
      }
      info->window_shift = std::max(0.0, plancherel_constant * extra) / fsq;
    }
  }
  return out;
}

core::GridFunction op_apply_adjoint(const GroupSymbolA0& sym, const core::GridFunction& f,
                                    double plancherel_constant) {
  check_symbol(sym);
  check_constant(plancherel_constant);
  if (f.grid.dim != 3) throw config_error("op_apply_adjoint: three-dimensional data");

  const Grid& g = f.grid;
  const double h = g.spacing();
  const FieldShape fs = field_shape(sym.field);
  FieldShape reach;
  reach.rx = axis_support_radius(f, 0, 1e-9) + fs.rx;
  reach.ry = axis_support_radius(f, 1, 1e-9) + 2.0 * h;
  const std::size_t r = sym.field.kernels.size();
  const std::size_t nk = sym.window.nodes.size();

  // (Op(psi x kappa))* f = Op_conv(kappa)* (conj(psi) f) termwise, and the
  // convolution adjoint acts as kappahat* on the transform side
  std::vector<GridFunction> gr;
  gr.reserve(r);
  for (std::size_t t = 0; t < r; ++t) {
    GridFunction psi = upsample3(sym.field.envelopes[t], g);
    GridFunction prod(g);
    for (std::size_t i = 0; i < prod.values.size(); ++i)
      prod.values[i] = std::conj(psi.values[i]) * f.values[i];
    gr.push_back(std::move(prod));
  }

  std::vector<std::vector<double>> est(r, std::vector<double>(nk));
  std::vector<double> total(r, 0.0);
  core::par_for(static_cast<std::int64_t>(r * nk), [&](std::int64_t idx) {
    const std::size_t t = idx / nk, k = idx % nk;
    est[t][k] = scalar_node_mass(gr[t], sym.window.nodes[k]);
  });
  for (std::size_t t = 0; t < r; ++t)
    for (std::size_t k = 0; k < nk; ++k) total[t] += sym.window.weights[k] * est[t][k];

  std::vector<NodeStage> stage(nk);
  std::vector<std::exception_ptr> errs(nk);
  core::par_for(static_cast<std::int64_t>(nk), [&](std::int64_t k) {
    try {
      const double lam = sym.window.nodes[k];
      const double coef = plancherel_constant * sym.window.weights[k];
      stage[k].tabs.resize(r);
      HermiteBasis b;
      for (std::size_t t = 0; t < r; ++t) {
        if (sym.window.weights[k] * est[t][k] <= 1e-14 * total[t]) continue;
        if (b.m == 0) b = node_basis(dual_truncation(lam), lam, reach, h);
        RepOperator ghat = group_fourier(gr[t], lam, b);
        const Eigen::MatrixXcd bmat =
            symbol_matrix(sym, static_cast<int>(t), static_cast<int>(k)).adjoint() * ghat.mat;
        stage[k].tabs[t] = trace_table(g, lam, b, bmat, coef);
        stage[k].skipped = false;
      }
    } catch (...) {
      errs[k] = std::current_exception();
    }
  });
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);

  GridFunction out(g);
  for (std::size_t t = 0; t < r; ++t)
    for (std::size_t k = 0; k < nk; ++k)
      if (!stage[k].tabs.empty() && !stage[k].tabs[t].empty())
        apply_table(out, stage[k].tabs[t], sym.window.nodes[k]);
  return out;
}

GroupSymbolA0 dilate_symbol(const GroupSymbolA0& sym, double eps) {
  check_symbol(sym);
  if (!(eps > 0.0) || !std::isfinite(eps)) throw config_error("dilate_symbol: eps > 0");
  GroupSymbolA0 out = sym;
  out.scale_eps = sym.scale_eps * eps;
  if (out.scale_eps * out.scale_eps * sym.window.lambda_min < 1e-4)
    throw precondition_error(
        "dilate_symbol: dilated dual nodes fall below the resolvable floor; "
        "raise the window's lambda_min or use a milder eps");
  return out;
}

double a0_seminorm(const GroupSymbolA0& sym) {
  check_symbol(sym);
  const Grid& kg = sym.field.kernels[0].grid;
  const std::vector<double> env = field_sup_env(sym.field);
  double sum = 0.0;
  for (double v : env) sum += v;
  return sum * kg.cell_volume();
}

NormBoundReport op_norm_bound_check(const GroupSymbolA0& sym, double eps,
                                    const std::vector<core::GridFunction>& probes,
                                    double plancherel_constant, int power_iterations) {
  check_symbol(sym);
  check_constant(plancherel_constant);
  if (probes.empty()) throw config_error("op_norm_bound_check: at least one probe");

  NormBoundReport rep;
  rep.seminorm = a0_seminorm(sym);
  const GroupSymbolA0 se = dilate_symbol(sym, eps);

  for (const auto& f : probes) {
    const double fn = core::norm_l2(f);
    if (fn == 0.0) throw config_error("op_norm_bound_check: zero probe");
    rep.ratios.push_back(core::norm_l2(op_apply(se, f, plancherel_constant)) / fn);
  }
  if (power_iterations > 0) {
    GridFunction v = probes.back();
    for (int it = 0; it < power_iterations; ++it) {
      const double vn = core::norm_l2(v);
      if (vn == 0.0) break;
      GridFunction w = op_apply(se, v, plancherel_constant);
      rep.ratios.push_back(core::norm_l2(w) / vn);
      GridFunction u = op_apply_adjoint(se, w, plancherel_constant);
      const double un = core::norm_l2(u);
      if (un == 0.0) break;
      for (auto& x : u.values) x /= un;
      v = std::move(u);
    }
  }
  rep.worst_ratio = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  rep.within_bound = rep.worst_ratio <= rep.seminorm * 1.05;
  return rep;
}

ConcentrationReport kernel_concentration_check(const GroupSymbolA0& sym,
                                               const std::vector<double>& eps_ladder,
                                               double chi_radius) {
  check_symbol(sym);
  if (eps_ladder.empty()) throw config_error("kernel_concentration_check: empty ladder");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    if (!(eps_ladder[i] > 0.0)) throw config_error("kernel_concentration_check: eps > 0");
    if (i > 0 && !(eps_ladder[i] < eps_ladder[i - 1]))
      throw config_error("kernel_concentration_check: ladder strictly decreasing");
  }
  if (!(chi_radius > 0.0)) throw config_error("kernel_concentration_check: chi_radius > 0");

  const Grid& kg = sym.field.kernels[0].grid;
  const int n = kg.n;
  const double vol = kg.cell_volume();
  const double r1 = chi_radius, r2 = chi_radius * chi_radius;
  const std::vector<double> env = field_sup_env(sym.field);

  ConcentrationReport rep;
  rep.eps = eps_ladder;
  for (double eps : eps_ladder) {
    double res = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      const double cy1 = core::plateau_bump(eps * kg.coord(i), r1, 2.0 * r1);
      for (int j = 0; j < n; ++j) {
        const double cy2 = cy1 * core::plateau_bump(eps * kg.coord(j), r1, 2.0 * r1);
        for (int l = 0; l < n; ++l, ++idx) {
          const double chi =
              cy2 * core::plateau_bump(eps * eps * kg.coord(l), r2, 2.0 * r2);
          res += env[idx] * (1.0 - chi);
        }
      }
    }
    rep.residuals.push_back(res * vol);
  }

  rep.monotone = true;
  for (std::size_t i = 1; i < rep.residuals.size(); ++i)
    if (rep.residuals[i] > rep.residuals[i - 1] * (1.0 + 1e-12)) rep.monotone = false;
  for (std::size_t i = 1; i < rep.residuals.size(); ++i) {
    const double a = rep.residuals[i - 1], b = rep.residuals[i];
    if (a > 0.0 && b > 0.0)
      rep.exponents.push_back(std::log(a / b) / std::log(eps_ladder[i - 1] / eps_ladder[i]));
  }
  if (rep.residuals.back() == 0.0)
    rep.final_exponent = std::numeric_limits<double>::infinity();
  else if (!rep.exponents.empty())
    rep.final_exponent = rep.exponents.back();
  return rep;
}

GroupLimitEstimate estimate_group_sc_limit(const std::vector<core::GridFunction>& family,
                                           const std::vector<double>& eps_ladder,
                                           const GroupSymbolA0& sym,
                                           double plancherel_constant,
                                           const ModelProfile* profile) {
  check_symbol(sym);
  check_constant(plancherel_constant);
  if (family.size() != eps_ladder.size())
    throw config_error("estimate_group_sc_limit: one member per ladder rung");
  if (family.size() < 3) throw config_error("estimate_group_sc_limit: at least three rungs");
  for (std::size_t i = 1; i < eps_ladder.size(); ++i)
    if (!(eps_ladder[i] > 0.0) || !(eps_ladder[i] < eps_ladder[i - 1]))
      throw config_error("estimate_group_sc_limit: ladder positive and decreasing");
  const double ratio = eps_ladder[1] / eps_ladder[0];
  for (std::size_t i = 1; i + 1 < eps_ladder.size(); ++i)
    if (std::abs(eps_ladder[i + 1] / eps_ladder[i] - ratio) > 1e-9 * ratio)
      throw config_error("estimate_group_sc_limit: geometric ladder required");

  std::vector<cplx> values;
  values.reserve(family.size());
  for (std::size_t k = 0; k < family.size(); ++k) {
    const GroupSymbolA0 se = dilate_symbol(sym, eps_ladder[k]);
    const GridFunction out = op_apply(se, family[k], plancherel_constant);
    values.push_back(core::inner_product(out, family[k]));
  }

  GroupLimitEstimate result;
  result.estimate = euclid::richardson(values, ratio);
  result.summary.space = "G x Ghat";

  if (profile) {
    if (!profile->profile) throw config_error("estimate_group_sc_limit: profile data required");
    const GridFunction& F = *profile->profile;
    if (F.grid.dim != 3) throw config_error("estimate_group_sc_limit: profile on the group grid");
    const double h = F.grid.spacing();
    FieldShape reach;
    reach.rx = axis_support_radius(F, 0, 1e-9) + h;
    reach.ry = axis_support_radius(F, 1, 1e-9) + 2.0 * h;
    const std::size_t nk = sym.window.nodes.size();
    std::vector<Eigen::MatrixXcd> hats(nk);
    std::vector<std::exception_ptr> errs(nk);
    core::par_for(static_cast<std::int64_t>(nk), [&](std::int64_t k) {
      try {
        const double lam = sym.window.nodes[k];
        HermiteBasis b = node_basis(dual_truncation(lam), lam, reach, 0.0);
        hats[k] = group_fourier(F, lam, b).mat;
      } catch (...) {
        errs[k] = std::current_exception();
      }
    });
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);

    std::vector<double> wt(nk);
    double total = 0.0;
    for (std::size_t k = 0; k < nk; ++k) {
      wt[k] = sym.window.weights[k] * plancherel_constant * hats[k].squaredNorm();
      total += wt[k];
    }
    for (std::size_t k = 0; k < nk; ++k) {
      if (wt[k] <= 1e-12 * total) continue;
      ovm::OvmAtom atom;
      atom.point = {profile->g0.x, profile->g0.y, profile->g0.t, sym.window.nodes[k]};
      atom.weight = wt[k];
      atom.block = (hats[k] * hats[k].adjoint()) / hats[k].squaredNorm();
      result.summary.atoms.push_back(std::move(atom));
    }
  }
  return result;
}

}  // namespace mlsc::heisenberg
