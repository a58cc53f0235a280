#pragma once
#include "mlsc/core/rng.hpp"
#include "mlsc/euclid/phase_symbol.hpp"

namespace mlsc::euclid {

enum class Quantization { kn, weyl };

// Kohn-Nirenberg: x -> sum_k dxi^n e^{2 pi i x.xi_k} a(x, xi_k) fhat(xi_k).
// Separable symbols go through per-term FFTs; otherwise rows are streamed
// with recurrence phases (parallel over output points).
GridFunction quantize_kn(const PhaseSymbol& a, const GridFunction& f, double tail_tol = 1e-3);

// Weyl: double quadrature with the symbol at midpoints (x+y)/2.  One-dimensional;
// builds a (2N-1) x N midpoint table, so N is capped at 2048.
GridFunction quantize_weyl(const PhaseSymbol& a, const GridFunction& f, double tail_tol = 1e-3);

GridFunction quantize(const PhaseSymbol& a, const GridFunction& f, Quantization q,
                      double tail_tol = 1e-3);

// adjoint of the Kohn-Nirenberg operator (norm estimation; cross-checks)
GridFunction quantize_kn_adjoint(const PhaseSymbol& a, const GridFunction& g,
                                 double tail_tol = 1e-3);

// (Op_eps(a) f, g); literally quantizes scale_symbol(a, eps) so the scaling
// identity with eps = 1 holds on the same code path.
cplx matrix_element(const PhaseSymbol& a, double eps, const GridFunction& f,
                    const GridFunction& g, Quantization q = Quantization::kn);

// power iteration on Op(a)* Op(a) from the given start vector; returns the
// operator-norm estimate ||Op(a)||
double op_norm_estimate(const PhaseSymbol& a, const GridFunction& start, int iters = 8);

namespace ref {
// literal sums with per-term phases, serial; the independent slow path the
// fast kernels are tested against
GridFunction quantize_kn(const PhaseSymbol& a, const GridFunction& f);
GridFunction quantize_weyl(const PhaseSymbol& a, const GridFunction& f);
}  // namespace ref

}  // namespace mlsc::euclid
