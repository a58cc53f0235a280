#include "mlsc/core/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "mlsc/core/errors.hpp"

namespace mlsc::core {
namespace {

// Plan cache.  FFTW planning is not thread-safe; execution on new arrays is.
// FFTW_ESTIMATE keeps plan selection deterministic, FFTW_UNALIGNED lets plans
// run on std::vector storage regardless of alignment.
struct PlanKey {
  int n, howmany, stride, dist, sign;
  bool operator<(const PlanKey& o) const {
    return std::tie(n, howmany, stride, dist, sign) <
           std::tie(o.n, o.howmany, o.stride, o.dist, o.sign);
  }
};

std::mutex plan_mutex;
std::map<PlanKey, fftw_plan> plan_cache;

fftw_plan get_plan(const PlanKey& key) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;
  std::vector<cplx> scratch(static_cast<std::size_t>(key.n) * key.howmany);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  int n = key.n;
  fftw_plan p = fftw_plan_many_dft(1, &n, key.howmany, buf, nullptr, key.stride, key.dist,
                                   buf, nullptr, key.stride, key.dist, key.sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_cache.emplace(key, p);
  return p;
}

// In-place standard DFT of length n along one axis of the flattened array.
// axis_stride = product of sizes of faster axes; block = n * axis_stride.
void run_fft(std::vector<cplx>& data, int n, std::size_t axis_stride, int sign) {
  const std::size_t total = data.size();
  const std::size_t block = static_cast<std::size_t>(n) * axis_stride;
  // transform each contiguous run of `axis_stride` columns inside each block
  PlanKey key{n, static_cast<int>(axis_stride), static_cast<int>(axis_stride), 1, sign};
  fftw_plan plan = get_plan(key);
  for (std::size_t base = 0; base < total; base += block) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data() + base);
    fftw_execute_dft(plan, buf, buf);
  }
}

// Continuum-normalized transform along `axis`:
//   forward: F(xi_k) = h * (-1)^k * FFT_j[f]  (ascending k order)
//   inverse: f(x_j) = dxi * IFFT_k[(-1)^k F]
// with the (-1)^k factors absorbing the -L grid offset phase.
GridFunction axis_transform(const GridFunction& f, int axis, bool forward) {
  const Grid& g = f.grid;
  if (axis < 0 || axis >= g.dim) throw config_error("axis out of range");
  const int n = g.n;
  std::size_t axis_stride = 1;
  for (int a = axis + 1; a < g.dim; ++a) axis_stride *= static_cast<std::size_t>(n);

  GridFunction out = f;
  const double scale = forward ? g.spacing() : 1.0 / (2.0 * g.half_width);

  if (!forward) {
    // pre-phase: G[b(k)] = (-1)^k F_k, reorder ascending k -> FFTW bins
    std::vector<cplx> tmp(out.values.size());
    const std::size_t block = static_cast<std::size_t>(n) * axis_stride;
    for (std::size_t base = 0; base < out.values.size(); base += block)
      for (int a = 0; a < n; ++a) {
        const int k = a - n / 2;
        const int b = (k + n) % n;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t c = 0; c < axis_stride; ++c)
          tmp[base + static_cast<std::size_t>(b) * axis_stride + c] =
              sgn * out.values[base + static_cast<std::size_t>(a) * axis_stride + c];
      }
    out.values.swap(tmp);
  }

  run_fft(out.values, n, axis_stride, forward ? FFTW_FORWARD : FFTW_BACKWARD);

  if (forward) {
    // post-phase and reorder FFTW bins -> ascending k
    std::vector<cplx> tmp(out.values.size());
    const std::size_t block = static_cast<std::size_t>(n) * axis_stride;
    for (std::size_t base = 0; base < out.values.size(); base += block)
      for (int a = 0; a < n; ++a) {
        const int k = a - n / 2;
        const int b = (k + n) % n;
        const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t c = 0; c < axis_stride; ++c)
          tmp[base + static_cast<std::size_t>(a) * axis_stride + c] =
              sgn * scale *
              out.values[base + static_cast<std::size_t>(b) * axis_stride + c];
      }
    out.values.swap(tmp);
  } else {
    for (cplx& v : out.values) v *= scale;
  }
  return out;
}

}  // namespace

void raw_fft(cplx* data, int n, int sign) {
  PlanKey key{n, 1, 1, 1, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD};
  fftw_plan plan = get_plan(key);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, buf, buf);
}

GridFunction dft_axis(const GridFunction& f, int axis) { return axis_transform(f, axis, true); }
GridFunction idft_axis(const GridFunction& f, int axis) { return axis_transform(f, axis, false); }

GridFunction dft(const GridFunction& f) {
  GridFunction out = f;
  for (int a = 0; a < f.grid.dim; ++a) out = dft_axis(out, a);
  out.grid = dual_grid(f.grid);
  return out;
}

GridFunction idft(const GridFunction& fhat) {
  // fhat lives on the dual grid; recover the matching position grid
  const Grid& d = fhat.grid;
  Grid pos(d.dim, d.n / (4.0 * d.half_width), d.n);
  GridFunction out = fhat;
  out.grid = pos;
  for (int a = 0; a < d.dim; ++a) out = idft_axis(out, a);
  return out;
}

double transform_support_radius(const GridFunction& f, double rel_thresh) {
  if (f.grid.dim != 1) throw config_error("transform_support_radius: one-dimensional only");
  GridFunction fh = dft(f);
  double peak = 0.0;
  for (const auto& v : fh.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double radius = 0.0;
  for (int k = 0; k < fh.grid.n; ++k) {
    if (std::abs(fh[k]) > rel_thresh * peak)
      radius = std::max(radius, std::abs(fh.grid.coord(k)));
  }
  return radius;
}

namespace {

// unit complex exponential exp(i pi t) with the angle reduced mod 2 in long
// double first; chirp angles grow like alpha*j^2 and overflow double-precision
// phase accuracy long before j reaches the grid size
cplx cis_pi(long double t) {
  t = std::fmod(t, 2.0L);
  return std::polar(1.0, M_PI * static_cast<double>(t));
}

}  // namespace

std::vector<cplx> chirp_resample(const GridFunction& f, double u0, double step,
                                 int count) {
  if (f.grid.dim != 1) throw config_error("chirp_resample: one-dimensional only");
  if (count <= 0) return {};
  const int n = f.grid.n;
  const Grid dual = dual_grid(f.grid);
  const double dxi = dual.spacing();
  const double xi0 = -dual.half_width;
  const long double alpha = static_cast<long double>(step) * dxi;

  GridFunction spec = dft(f);

  // S_j = dxi * e^{2 pi i u_j xi0} * e^{i pi alpha j^2}
  //         * sum_k [F_k e^{2 pi i u0 k dxi} e^{i pi alpha k^2}] e^{-i pi alpha (j-k)^2}
  // (from jk = (j^2 + k^2 - (j-k)^2)/2); the k-sum is a linear convolution.
  const int conv_len = n + count - 1;
  int p = 1;
  while (p < conv_len) p *= 2;

  std::vector<cplx> A(p, 0.0), C(p, 0.0);
  for (int k = 0; k < n; ++k) {
    const long double kk = static_cast<long double>(k);
    A[k] = spec[k] * cis_pi(2.0L * u0 * dxi * kk + alpha * kk * kk);
  }
  // C holds the chirp at lags m = -(n-1) .. count-1, stored at m + n - 1
  for (int m = -(n - 1); m < count; ++m) {
    const long double mm = static_cast<long double>(m);
    C[m + n - 1] = cis_pi(-alpha * mm * mm);
  }

  raw_fft(A.data(), p, -1);
  raw_fft(C.data(), p, -1);
  for (int i = 0; i < p; ++i) A[i] *= C[i] / static_cast<double>(p);
  raw_fft(A.data(), p, +1);

  std::vector<cplx> out(count);
  for (int j = 0; j < count; ++j) {
    const double uj = u0 + j * step;
    if (std::abs(uj) >= f.grid.half_width) {
      out[j] = 0.0;  // compact support, no wrap
      continue;
    }
    const long double jj = static_cast<long double>(j);
    const cplx pre = cis_pi(2.0L * uj * xi0 + alpha * jj * jj);
    out[j] = dxi * pre * A[j + n - 1];
  }
  return out;
}

}  // namespace mlsc::core
