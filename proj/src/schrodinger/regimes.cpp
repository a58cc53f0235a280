#include <algorithm>
#include <cmath>

#include "mlsc/core/errors.hpp"
#include "mlsc/core/fft.hpp"
#include "mlsc/core/quadrature.hpp"
#include "mlsc/schrodinger/regimes.hpp"

namespace mlsc::schrodinger {

namespace {

constexpr double kEdgeMassTol = 1e-6;
constexpr double kInvarianceTol = 0.02;  // tau < 1: final residual vs t=0 pairing
constexpr double kTransportTol = 0.05;   // tau = 1: final relative residual
constexpr double kDecayFactor = 5.0;     // tau > 1: first/last mass ratio

double two_pi(double x) { return 2.0 * M_PI * x; }

}  // namespace

double transport_oracle(const euclid::ScalarMeasureAtoms& gamma0, double t,
                        const std::function<double(const double*)>& a) {
  double acc = 0.0;
  for (const auto& atom : gamma0.atoms) {
    double y[3];
    for (int d = 0; d < gamma0.dim; ++d) y[d] = atom.x[d] + two_pi(atom.xi[d]) * t;
    acc += atom.weight * a(y);
  }

  switch (gamma0.density) {
    case euclid::ScalarMeasureAtoms::Density::none:
      break;
    case euclid::ScalarMeasureAtoms::Density::concentration: {
      // int a(x0 + 2 pi xi t) |chihat(xi)|^2 dxi over the transform's support
      const GridFunction& chi = gamma0.profile;
      const double cap = core::dual_grid(chi.grid).half_width;
      const double b = std::min(core::transform_support_radius(chi, 1e-12) + 1.0, cap);
      const int panels = std::max(16, static_cast<int>(std::ceil(4.0 * b)));
      const double x0 = gamma0.center;
      acc += core::integrate(
          [&](double xi) {
            double y = x0 + two_pi(xi) * t;
            return a(&y) * std::norm(core::slow_transform(chi, xi));
          },
          -b, b, panels, 16);
      break;
    }
    case euclid::ScalarMeasureAtoms::Density::oscillation: {
      // int a(x + 2 pi xi0 t) |psi(x)|^2 dx on the profile's grid
      const GridFunction& psi = gamma0.profile;
      const double shift = two_pi(gamma0.center) * t;
      double sum = 0.0;
      for (int j = 0; j < psi.grid.n; ++j) {
        double y = psi.grid.coord(j) + shift;
        sum += a(&y) * std::norm(psi[j]);
      }
      acc += sum * psi.grid.spacing();
      break;
    }
  }
  return acc;
}

RegimeReport regime_report(const RegimeScenario& sc) {
  if (!(sc.tau > 0.0)) throw config_error("regime report: tau must be positive");
  const auto& fam = sc.family;
  if (fam.members.empty() || fam.members.size() != fam.schedule.size())
    throw config_error("regime report: malformed family");
  if (sc.times.empty()) throw config_error("regime report: no times");
  for (double t : sc.times)
    if (!(t > 0.0)) throw config_error("regime report: times must be positive");
  if (sc.probes.empty()) throw config_error("regime report: no probes");
  if (!oscillation_normalization_check(fam, 1.0))
    throw precondition_error("regime report: family fails the oscillation normalization check");

  const std::size_t rungs = fam.members.size();
  const double margin = fam.envelope.grid.half_width / 8.0;

  // evolved states, one pass per (time, rung); pairings read off per probe
  RegimeReport report;
  report.tau = sc.tau;
  report.pass = true;
  for (double t : sc.times) {
    std::vector<GridFunction> evolved;
    evolved.reserve(rungs);
    for (std::size_t k = 0; k < rungs; ++k) {
      GridFunction out = propagate(fam.members[k], fam.schedule[k], sc.tau, t);
      if (core::boundary_mass_fraction(out, margin) > kEdgeMassTol)
        throw precondition_error("regime report: evolved state reaches the domain boundary");
      evolved.push_back(std::move(out));
    }

    for (std::size_t p = 0; p < sc.probes.size(); ++p) {
      const auto& probe = sc.probes[p];
      RegimeCheck chk;
      chk.time = t;
      chk.probe = static_cast<int>(p);
      for (std::size_t k = 0; k < rungs; ++k)
        chk.values.push_back(density_pairing(evolved[k], probe));

      if (sc.tau < 1.0) {
        // invariance: each rung against its own t = 0 pairing
        std::vector<double> at0(rungs);
        for (std::size_t k = 0; k < rungs; ++k)
          at0[k] = density_pairing(fam.members[k], probe);
        for (std::size_t k = 0; k < rungs; ++k)
          chk.residuals.push_back(std::abs(chk.values[k] - at0[k]));
        chk.prediction = at0.back();
        bool decreasing = true;
        for (std::size_t k = 1; k < rungs; ++k)
          decreasing = decreasing && chk.residuals[k] < chk.residuals[k - 1];
        chk.pass = decreasing &&
                   chk.residuals.back() <= kInvarianceTol * std::abs(chk.prediction);
      } else if (sc.tau == 1.0) {
        euclid::ScalarMeasureAtoms gamma0 =
            fam.kind == euclid::ProfileKind::concentration
                ? euclid::concentration_measure(fam.envelope, fam.center)
                : euclid::oscillation_measure(fam.envelope, fam.center);
        chk.prediction = transport_oracle(gamma0, t, probe);
        const double scale = std::max(std::abs(chk.prediction), 1e-12);
        for (std::size_t k = 0; k < rungs; ++k)
          chk.residuals.push_back(std::abs(chk.values[k] - chk.prediction) / scale);
        bool decreasing = true;
        for (std::size_t k = 1; k < rungs; ++k)
          decreasing = decreasing && chk.residuals[k] < chk.residuals[k - 1];
        chk.pass = decreasing && chk.residuals.back() <= kTransportTol;
      } else {
        // dispersal: the pairing itself is the residual
        chk.prediction = 0.0;
        chk.residuals = chk.values;
        chk.pass = chk.values.back() > 0.0 &&
                   chk.values.front() >= kDecayFactor * chk.values.back();
      }
      report.pass = report.pass && chk.pass;
      report.checks.push_back(std::move(chk));
    }
  }
  return report;
}

}  // namespace mlsc::schrodinger
