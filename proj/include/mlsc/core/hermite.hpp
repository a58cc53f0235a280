#pragma once
#include "mlsc/core/grid.hpp"

namespace mlsc::core {

// First m Hermite functions at scale beta, sampled on a 1-d grid:
//   h_k^beta(u) = beta^{1/4} h_k(sqrt(beta) u),
// orthonormal in L^2(du).  Built by the stable three-term recurrence.
struct HermiteBasis {
  Grid grid;
  int m = 0;
  double scale = 1.0;  // beta
  std::vector<double> values;  // m x n, row k = samples of h_k^beta
  double gram_deviation = 0.0;

  const double* row(int k) const { return values.data() + static_cast<std::size_t>(k) * grid.n; }
};

// Fails with precondition_error if the grid violates the resolution rule
//   N >= 8 ceil(sqrt(m * max(beta, 1/beta))),  L >= 2 sqrt((2m+1) / beta)
// or if the Gram matrix deviates from the identity by more than gram_tol
// (under-resolved sampling shows up there).
HermiteBasis hermite_basis(int m, double scale, const Grid& grid,
                           bool check_gram = true, double gram_tol = 1e-8);

// same recurrence at a single arbitrary point; out receives h_0..h_{m-1}
void hermite_point(int m, double scale, double u, double* out);

// A grid sufficient for (m, scale): the rule above plus a Nyquist margin for
// the oscillation of the top basis function.  extra_half_width widens the box
// (translated arguments), extra_freq budgets additional modulation phases in
// rad per unit length.
Grid hermite_grid(int m, double scale, double extra_half_width = 0.0,
                  double extra_freq = 0.0);

// max over k [in 1..m-2] of the sampled residual of the recurrence
//   h_{k+1} = sqrt(2 beta/(k+1)) u h_k - sqrt(k/(k+1)) h_{k-1}
double recurrence_residual(const HermiteBasis& b);

double gram_deviation(const HermiteBasis& b);

}  // namespace mlsc::core
