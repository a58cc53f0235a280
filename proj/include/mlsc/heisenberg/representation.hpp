#pragma once
#include <Eigen/Dense>
#include <vector>

#include "mlsc/core/grid.hpp"
#include "mlsc/core/hermite.hpp"
#include "mlsc/heisenberg/group.hpp"

namespace mlsc::heisenberg {

// Irreducible unitary representation at dual parameter lambda != 0, truncated
// to the first m scaled Hermite modes h_k^{|lambda|}.  In that family the
// dilation relation  pi_lambda(dilate(r, g)) = pi_{r^2 lambda}(g)  holds as an
// exact matrix identity (same quadrature, rescaled), which is what makes the
// scaling-regime experiments discrete-exact.
struct RepOperator {
  double lambda = 0.0;
  Eigen::MatrixXcd mat;
};

// Matrix of pi_lambda(g) acting on L^2(R) by
//   (pi_lambda(x,y,t) phi)(u) = exp(i lambda (t - x u - x y / 2)) phi(u + y),
// assembled on the basis grid; basis.scale must equal |lambda|.
RepOperator schrodinger_rep(const core::HermiteBasis& basis, double lambda,
                            const HeisenbergElement& g);

// Basis sized for matrix assembly at this lambda: scale |lambda|, box extended
// by y_reach (translated arguments), sampling budgeted for the exp(-i lambda
// x u) modulation up to |x| <= x_reach.  dy > 0 snaps the spacing to an
// integer divisor of dy so translations by multiples of dy act on sample
// indices exactly.
core::HermiteBasis fourier_basis(int m, double lambda, double x_reach,
                                 double y_reach, double dy = 0.0);

// Mode count for the dual sweep.  The turning radius sqrt((2m+1)/|lambda|)
// must cover both the lambda-stretched transverse spectrum of box-supported
// data (~1/lambda, dominant at small |lambda|) and its spatial extent
// (~sqrt(lambda) * reach, dominant at large |lambda|).
int dual_truncation(double lambda);

// Hilbert-Schmidt masses of the integral kernel before and after projection
// onto the basis modes; kernel_hs2 - matrix_hs2 >= 0 is the truncation
// deficit.
struct TruncationInfo {
  double kernel_hs2 = 0.0;
  double matrix_hs2 = 0.0;
};

// fhat(lambda) = integral f(g) pi_lambda(g)^* dg on the basis modes.  The
// transverse sum is evaluated through the spectral side (band-limited
// interpolation of the x-spectrum), so frequencies beyond the grid's Nyquist
// band read as zero instead of folding back into the mode box.  Note the
// order reversal under convolution: (f1 * f2)^ = fhat2 fhat1.
// Fails when |lambda| exceeds what the t-spacing resolves, or when the basis
// spacing cannot resolve the modulation for this data's x-extent.
RepOperator group_fourier(const core::GridFunction& f, double lambda,
                          const core::HermiteBasis& basis,
                          TruncationInfo* info = nullptr);

// Log-spaced quadrature over lambda in [-lambda_max, -lambda_min] union
// [lambda_min, lambda_max] with trapezoid weights for the Plancherel measure
// |lambda| d lambda.  Nodes ascend, negative half first.
struct DualWindow {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

DualWindow dual_window(double lambda_min = 0.125, double lambda_max = 8.0,
                       int per_sign = 64);

// ||fhat(lambda_k)||_HS^2 at every window node, parallel over nodes.  Nodes
// whose weighted share of the scalar estimate (2 pi / |lambda|) ||F1||^2 is
// below 1e-10 of the total skip matrix assembly and report that estimate
// directly.  captured (optional) receives matrix_hs2 / kernel_hs2 per node,
// 1 for screened nodes.
std::vector<double> dual_masses(const core::GridFunction& f,
                                const DualWindow& win,
                                std::vector<double>* captured = nullptr);

// Least-squares fit of the constant in  ||f||^2 = c integral ||fhat||_HS^2
// |lambda| d lambda  over a family of functions; the derived value is
// 1 / (4 pi^2).  residuals are per-function relative errors at the fitted
// constant; fails when any exceeds 5% (window or truncation misses real
// mass).  tails estimates the untested |lambda| < lambda_min contribution.
struct PlancherelFit {
  double constant = 0.0;
  std::vector<double> residuals;
  std::vector<double> tails;
};

PlancherelFit plancherel_fit(const std::vector<double>& l2sq,
                             const std::vector<std::vector<double>>& masses,
                             const DualWindow& win);

}  // namespace mlsc::heisenberg
