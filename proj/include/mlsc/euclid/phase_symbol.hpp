#pragma once
#include <functional>
#include <vector>

#include "mlsc/core/grid.hpp"

namespace mlsc::euclid {

using core::cplx;
using core::Grid;
using core::GridFunction;

// Separable building block u(x)*v(xi).  Symbols assembled from a short list
// of such terms get an FFT fast path in the quantizers; the generic evaluator
// path stays available for everything else.
struct SepTerm {
  std::function<cplx(const double*)> fx;
  std::function<cplx(const double*)> fxi;
};

// Symbol a(x, xi) on a position box x frequency box.  Values come from an
// evaluator (formula wrapped in a smooth edge cutoff); nothing dense is
// stored, so large grids stay cheap.  `analytic` marks evaluators meaningful
// off-grid (oracle quadrature).
struct PhaseSymbol {
  Grid pos;
  Grid freq;
  std::function<cplx(const double*, const double*)> eval;
  std::vector<SepTerm> separable;  // nonempty => eval is the sum of the terms
  bool analytic = true;

  cplx operator()(const double* x, const double* xi) const { return eval(x, xi); }
};

// Smooth edge cutoff: flat out to `flat` fraction of each half-width, then a
// C^inf descent reaching 0 at `supp` fraction.  Hard truncation at the box
// edge pollutes quadrature; this keeps every symbol compactly supported.  The
// per-box switches let genuinely x-free (or xi-free) symbols stay that way.
struct EdgeCutoff {
  double flat = 0.75;
  double supp = 0.9375;
  bool cut_pos = true;
  bool cut_freq = true;
};

PhaseSymbol make_symbol(const Grid& pos, const Grid& freq,
                        std::function<cplx(const double*, const double*)> f,
                        EdgeCutoff cut = {});
PhaseSymbol make_separable_symbol(const Grid& pos, const Grid& freq,
                                  std::vector<SepTerm> terms, EdgeCutoff cut = {});

// a(x, eps*xi).  Refuses when more than tail_tol of the symbol's L2 mass in
// xi would fall outside the frequency box after rescaling (rather than alias).
PhaseSymbol scale_symbol(const PhaseSymbol& a, double eps, double tail_tol = 1e-4);

// largest |xi| over probe rows where |a| exceeds 1e-8 of its max
double symbol_support_radius(const PhaseSymbol& a);

// L2 mass fraction of the symbol in the outer 5% band of the frequency box
// (the integrated variable); quantization refuses when this is large because
// the xi-quadrature would be unreliable
double symbol_tail_fraction(const PhaseSymbol& a);

}  // namespace mlsc::euclid
