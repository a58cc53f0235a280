#include <algorithm>
#include <cmath>

#include "mlsc/core/errors.hpp"
#include "mlsc/core/fft.hpp"
#include "mlsc/euclid/limits.hpp"

namespace mlsc::euclid {

namespace {

void check_schedule(const std::vector<double>& schedule) {
  if (schedule.empty()) throw config_error("wave family: empty schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (!(schedule[k] > 0.0)) throw config_error("wave family: schedule must be positive");
    if (k > 0 && !(schedule[k] < schedule[k - 1]))
      throw config_error("wave family: schedule must decrease");
  }
}

void check_norm_ratio(const WaveFamily& fam) {
  double lo = 1e300, hi = 0.0;
  for (const auto& f : fam.members) {
    double n = core::norm_l2(f);
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  if (lo == 0.0 || hi / lo > 10.0)
    throw precondition_error("wave family: member norms not uniformly bounded");
}

// support width of a 1-d profile at the 1e-8 relative threshold
double support_width(const GridFunction& f) {
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw precondition_error("wave family: zero profile");
  const double thresh = 1e-8 * peak;
  int lo = -1, hi = -1;
  for (int j = 0; j < f.grid.n; ++j) {
    if (std::abs(f.values[j]) > thresh) {
      if (lo < 0) lo = j;
      hi = j;
    }
  }
  return (hi - lo) * f.grid.spacing();
}

}  // namespace

WaveFamily concentration_family(const GridFunction& chi, double x0,
                                const std::vector<double>& schedule) {
  if (chi.grid.dim != 1) throw config_error("concentration_family: one-dimensional only");
  check_schedule(schedule);
  const Grid& g = chi.grid;
  const double w = support_width(chi);

  for (double eps : schedule) {
    if (w * eps / g.spacing() < 16.0)
      throw precondition_error("concentration_family: rescaled support under 16 grid points");
    if (g.half_width - std::abs(x0) < 4.0 * w * eps)
      throw precondition_error("concentration_family: x0 within 4 support widths of the boundary");
  }

  WaveFamily fam;
  fam.kind = ProfileKind::concentration;
  fam.schedule = schedule;
  fam.envelope = chi;
  fam.center = x0;
  for (double eps : schedule) {
    GridFunction f(g);
    const double amp = 1.0 / std::sqrt(eps);
    // band-limited resample of chi at ((x_j - x0)/eps)_j in one chirp-z pass
    auto vals = core::chirp_resample(chi, (-g.half_width - x0) / eps, g.spacing() / eps, g.n);
    for (int j = 0; j < g.n; ++j) f[j] = amp * vals[j];
    fam.members.push_back(std::move(f));
  }
  check_norm_ratio(fam);
  return fam;
}

WaveFamily oscillation_family(const GridFunction& psi, double xi0,
                              const std::vector<double>& schedule) {
  if (psi.grid.dim != 1) throw config_error("oscillation_family: one-dimensional only");
  check_schedule(schedule);
  const Grid& g = psi.grid;
  const double freq_half = core::dual_grid(g).half_width;
  for (double eps : schedule) {
    if (std::abs(xi0) / eps > freq_half)
      throw precondition_error("oscillation_family: xi0/eps leaves the frequency grid");
  }

  WaveFamily fam;
  fam.kind = ProfileKind::oscillation;
  fam.schedule = schedule;
  fam.envelope = psi;
  fam.center = xi0;
  for (double eps : schedule) {
    GridFunction f(g);
    const double omega = 2.0 * M_PI * xi0 / eps;
    for (int j = 0; j < g.n; ++j) f[j] = psi[j] * std::polar(1.0, omega * g.coord(j));
    fam.members.push_back(std::move(f));
  }
  check_norm_ratio(fam);
  return fam;
}

WaveFamily mdm_concentration_family(const GridFunction& chi, double x0,
                                    const std::vector<int>& j_schedule) {
  std::vector<double> eps;
  eps.reserve(j_schedule.size());
  for (int j : j_schedule) {
    if (j < 1) throw config_error("mdm_concentration_family: j must be positive");
    eps.push_back(1.0 / j);
  }
  return concentration_family(chi, x0, eps);
}

}  // namespace mlsc::euclid
