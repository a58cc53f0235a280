#pragma once

#include <vector>

#include "mlsc/core/grid.hpp"
#include "mlsc/core/hermite.hpp"
#include "mlsc/euclid/limits.hpp"
#include "mlsc/heisenberg/group.hpp"
#include "mlsc/heisenberg/representation.hpp"
#include "mlsc/ovm/measure.hpp"

// Group quantization on H1.  Symbols are carried by their kernel fields
// x -> kappa_x, stored as a finite sum of separable terms psi_r(x) kappa_r(y):
// envelopes psi_r live on a coarse grid over the group (the x side is smooth
// and cheap), kernels kappa_r on the fine group grid.  The Fourier side holds
// one matrix per (term, dual node).

namespace mlsc::heisenberg {

struct KernelField {
  core::Grid xgrid{3, 1.0, 8};
  std::vector<core::GridFunction> envelopes;  // psi_r on xgrid
  std::vector<core::GridFunction> kernels;    // kappa_r on the shared group grid
};

// Gauss-Legendre dual window on +-[lambda_min, lambda_max]: same weight
// semantics as dual_window (weights carry the |lambda| d lambda density) but
// spectral accuracy for smooth integrands, which the inversion quadrature and
// the kernel/symbol round trip need.
DualWindow dual_window_gauss(double lambda_min = 0.125, double lambda_max = 8.0,
                             int per_sign = 24);

struct GroupSymbolA0 {
  KernelField field;
  DualWindow window;
  // accumulated dilation: the symbol reads its kernel's transform at
  // scale_eps^2 lambda (eps.pi_lambda is pi_{eps^2 lambda})
  double scale_eps = 1.0;
  // per (term, window node), matrices of the undilated symbol
  std::vector<std::vector<RepOperator>> hats;
};

GroupSymbolA0 symbol_from_kernel(const KernelField& field, const DualWindow& window);

// matrix of term r at window node k, honoring scale_eps.  For dilated symbols
// the kernel transform runs at scale_eps^2 lambda in a basis sized for that
// scale; the dilation intertwiner makes this the matrix of sigma(eps.pi) on
// the undilated Hermite window.
Eigen::MatrixXcd symbol_matrix(const GroupSymbolA0& sym, int term, int node);

// synthesizes each term's kernel from its matrices through the inversion
// formula; requires an undilated symbol (dilation acts on the kernel side in
// closed form instead)
KernelField kernel_from_symbol(const GroupSymbolA0& sym, double plancherel_constant);

struct OpApplyInfo {
  double tail_fraction = 0.0;  // L2 fraction of f outside the dual window
  double window_shift = 0.0;   // extra mass fraction a widened window would capture
};

core::GridFunction op_apply(const GroupSymbolA0& sym, const core::GridFunction& f,
                            double plancherel_constant, OpApplyInfo* info = nullptr);
// adjoint of op_apply in L2(G)
core::GridFunction op_apply_adjoint(const GroupSymbolA0& sym, const core::GridFunction& f,
                                    double plancherel_constant);

// refuses when the dilated evaluation nodes would fall below the numerical
// floor of the dual axis
GroupSymbolA0 dilate_symbol(const GroupSymbolA0& sym, double eps);

// int_G sup_x |kappa_x(y)| dy.  Computed on the undilated kernel field: the
// eps^{-Q} prefactor of the dilated kernel cancels the volume change exactly,
// so the seminorm is scale_eps-invariant by substitution.
double a0_seminorm(const GroupSymbolA0& sym);

struct NormBoundReport {
  double seminorm = 0.0;
  double worst_ratio = 0.0;
  std::vector<double> ratios;  // one per probe, power iterates appended
  bool within_bound = false;   // worst_ratio <= seminorm * 1.05
};
NormBoundReport op_norm_bound_check(const GroupSymbolA0& sym, double eps,
                                    const std::vector<core::GridFunction>& probes,
                                    double plancherel_constant, int power_iterations = 0);

struct ConcentrationReport {
  std::vector<double> eps;
  std::vector<double> residuals;  // A0 seminorm of the tail cut by chi(dilate(eps,.))
  std::vector<double> exponents;  // log2 slopes between successive positive rungs
  double final_exponent = 0.0;    // +inf reported when the last rung is an exact cutoff
  bool monotone = false;
};
// chi = plateau bump, 1 on the box of half-width chi_radius (t: chi_radius^2),
// supported on twice that box
ConcentrationReport kernel_concentration_check(const GroupSymbolA0& sym,
                                               const std::vector<double>& eps_ladder,
                                               double chi_radius);

// x-concentration model family f_eps = eps^{-Q/2} F(dilate(1/eps, g0^{-1} g));
// declaring it makes the limit estimate emit an atomic operator-valued
// summary (atoms (g0, lambda_k), weights from the Plancherel density of F,
// trace-1 blocks Fhat Fhat*) whose pairing reproduces the limit.
struct ModelProfile {
  HeisenbergElement g0;
  const core::GridFunction* profile = nullptr;
};

struct GroupLimitEstimate {
  euclid::LimitEstimate estimate;
  ovm::OperatorValuedMeasure summary;
};

GroupLimitEstimate estimate_group_sc_limit(const std::vector<core::GridFunction>& family,
                                           const std::vector<double>& eps_ladder,
                                           const GroupSymbolA0& sym,
                                           double plancherel_constant,
                                           const ModelProfile* profile = nullptr);

}  // namespace mlsc::heisenberg
