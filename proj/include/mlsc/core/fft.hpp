#pragma once
#include "mlsc/core/grid.hpp"

namespace mlsc::core {

// Continuum-normalized transform pair on the grid, convention
//   fhat(xi) = integral f(x) exp(-2 pi i x.xi) dx,
// realized as h^dim * sum_j f(x_j) exp(-2 pi i x_j.xi_k) over the dual grid
// (exp(-pi x^2) is a fixed point).  dft/idft are exact inverses of each other
// in exact arithmetic.
GridFunction dft(const GridFunction& f);
GridFunction idft(const GridFunction& fhat);

// Same convention applied along a single axis, other axes untouched.  The
// returned function lives on the same Grid object; the transformed axis is
// indexed in ascending frequency order k = -N/2 .. N/2-1.
GridFunction dft_axis(const GridFunction& f, int axis);
GridFunction idft_axis(const GridFunction& f, int axis);

// Unnormalized in-place DFT of length n, sign -1 forward / +1 backward, raw
// FFT bin order.  For kernels that manage their own phases and scaling.
void raw_fft(cplx* data, int n, int sign);

// Radius in the transform variable (1-d) beyond which |dft f| stays under
// rel_thresh times its peak; sizes quadrature windows for transform-side
// integrals.
double transform_support_radius(const GridFunction& f, double rel_thresh);

// Band-limited evaluation of 1-d sampled data at the equispaced points
// u_j = u0 + j*step, j = 0..count-1.  Same values as TrigInterp (points
// outside the box evaluate to 0), but computed with a chirp-z factorization:
// three FFTs instead of count*N direct sums, which is what makes rescaled
// families affordable on long grids.
std::vector<cplx> chirp_resample(const GridFunction& f, double u0, double step,
                                 int count);

}  // namespace mlsc::core
