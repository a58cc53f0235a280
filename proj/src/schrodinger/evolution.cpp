#include <cmath>
#include <numbers>

#include "mlsc/core/errors.hpp"
#include "mlsc/core/fft.hpp"
#include "mlsc/core/parallel.hpp"
#include "mlsc/schrodinger/evolution.hpp"

namespace mlsc::schrodinger {

namespace {

constexpr double kEdgeMassTol = 1e-6;  // tolerated mass near a grid edge
constexpr double kZeroModeTol = 0.5;   // zero-bin fraction that counts as degenerate

// exp(i theta), angle reduced mod 2 pi in long double first; the quadratic
// phases reach ~1e5 rad on far-field grids, where plain double sincos has
// already lost the 1e-12 contracts
cplx cis(long double theta) {
  theta = std::fmod(theta, 2.0L * std::numbers::pi_v<long double>);
  return std::polar(1.0, static_cast<double>(theta));
}

}  // namespace

GridFunction propagate(const GridFunction& psi0, double eps, double tau, double t) {
  if (!(eps > 0.0)) throw config_error("propagate: eps must be positive");
  GridFunction spec = core::dft(psi0);
  const Grid& d = spec.grid;
  if (core::boundary_mass_fraction(spec, d.half_width / 8.0) > kEdgeMassTol)
    throw precondition_error("propagate: frequency support overflows the grid");

  const double c = 2.0 * M_PI * M_PI * std::pow(eps, 2.0 - tau) * t;
  core::par_for(static_cast<std::int64_t>(spec.size()), [&](std::int64_t i) {
    int ix[3];
    d.unflatten(static_cast<std::size_t>(i), ix);
    double r2 = 0.0;
    for (int a = 0; a < d.dim; ++a) {
      const double x = d.coord(ix[a]);
      r2 += x * x;
    }
    spec[static_cast<std::size_t>(i)] *= cis(-static_cast<long double>(c) * r2);
  });
  return core::idft(spec);
}

bool oscillation_normalization_check(const euclid::WaveFamily& fam, double s) {
  if (!(s > 0.0)) throw config_error("normalization check: s must be positive");
  if (fam.members.empty() || fam.members.size() != fam.schedule.size())
    throw config_error("normalization check: malformed family");

  double lo = 1e300, hi = 0.0;
  for (std::size_t m = 0; m < fam.members.size(); ++m) {
    const double eps = fam.schedule[m];
    GridFunction spec = core::dft(fam.members[m]);
    const Grid& d = spec.grid;
    const double w = d.cell_volume();

    double total = 0.0, zero_mass = 0.0, plus = 0.0, minus = 0.0;
    int ix[3];
    for (std::size_t i = 0; i < spec.size(); ++i) {
      d.unflatten(i, ix);
      double r2 = 0.0;
      for (int a = 0; a < d.dim; ++a) {
        const double x = d.coord(ix[a]);
        r2 += x * x;
      }
      const double mass = std::norm(spec[i]) * w;
      total += mass;
      if (r2 == 0.0) {
        zero_mass += mass;
        continue;
      }
      const double mult = std::pow(2.0 * M_PI * std::sqrt(r2), 2.0 * s);
      plus += mult * mass;
      minus += mass / mult;
    }
    if (total == 0.0) throw precondition_error("normalization check: zero member");
    if (zero_mass > kZeroModeTol * total)
      throw precondition_error(
          "normalization check: member mass sits in the zero-frequency bin");

    const double q = std::pow(eps, s) * std::sqrt(plus) +
                     std::pow(eps, -s) * std::sqrt(minus);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  return hi / lo <= 10.0;
}

double density_pairing(const GridFunction& psi, const GridFunction& a) {
  if (!(psi.grid == a.grid)) throw config_error("density_pairing: grid mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) acc += a[i].real() * std::norm(psi[i]);
  return acc * psi.grid.cell_volume();
}

double density_pairing(const GridFunction& psi,
                       const std::function<double(const double*)>& a) {
  const Grid& g = psi.grid;
  double acc = 0.0;
  int ix[3];
  double x[3];
  for (std::size_t i = 0; i < psi.size(); ++i) {
    g.unflatten(i, ix);
    for (int d = 0; d < g.dim; ++d) x[d] = g.coord(ix[d]);
    acc += a(x) * std::norm(psi[i]);
  }
  return acc * g.cell_volume();
}

}  // namespace mlsc::schrodinger
