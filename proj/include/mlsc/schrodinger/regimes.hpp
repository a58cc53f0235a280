#pragma once
#include "mlsc/schrodinger/evolution.hpp"

namespace mlsc::schrodinger {

// int int a(x + 2 pi xi t) d gamma0(x, xi): the initial measure carried
// rigidly at group velocity 2 pi xi (the velocity the e^{2 pi i x.xi}
// convention produces from the |xi|^2 multiplier).
double transport_oracle(const euclid::ScalarMeasureAtoms& gamma0, double t,
                        const std::function<double(const double*)>& a);

struct RegimeScenario {
  double tau = 1.0;
  euclid::WaveFamily family;  // schedule = the eps ladder
  std::vector<double> times;  // strictly positive
  std::vector<std::function<double(const double*)>> probes;
};

// one probe/time combination
struct RegimeCheck {
  double time = 0.0;
  int probe = 0;
  double prediction = 0.0;        // regime-specific reference value
  std::vector<double> values;     // pairing per rung
  std::vector<double> residuals;  // regime-specific residual per rung
  bool pass = false;
};

struct RegimeReport {
  double tau = 1.0;
  std::vector<RegimeCheck> checks;
  bool pass = false;
};

// Scaling-regime verdicts:
//   tau < 1: pairings stay at their t = 0 values (residuals decreasing along
//            the ladder, final one within 2% of the t = 0 pairing),
//   tau = 1: pairings approach the transported initial measure (decreasing
//            relative residual, final within 5%); the family must be one of
//            the two model profiles so gamma0 is known,
//   tau > 1: probes lose mass (first/last rung ratio >= 5).
// The family must pass the oscillation normalization check at s = 1, and a
// run aborts when an evolved state pushes mass within L/8 of the boundary.
RegimeReport regime_report(const RegimeScenario& sc);

}  // namespace mlsc::schrodinger
