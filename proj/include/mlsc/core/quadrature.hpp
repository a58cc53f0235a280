#pragma once
#include <functional>
#include <vector>

#include "mlsc/core/grid.hpp"

namespace mlsc::core {

// Gauss-Legendre nodes/weights on [-1, 1]
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

// composite Gauss-Legendre over [a, b] split into `panels` panels
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 16, int order = 24);
cplx integrate_c(const std::function<cplx(double)>& f, double a, double b,
                 int panels = 16, int order = 24);

// Direct (slow) evaluation of the continuum transform of 1-d sampled data at
// an arbitrary frequency: h * sum_j f(x_j) exp(-2 pi i x_j xi).  Independent
// of the FFT path; used by oracles.
cplx slow_transform(const GridFunction& f, double xi);

}  // namespace mlsc::core
