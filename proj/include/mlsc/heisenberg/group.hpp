#pragma once
#include "mlsc/core/grid.hpp"

namespace mlsc::heisenberg {

using core::cplx;
using core::Grid;
using core::GridFunction;

// Group law (x,y,t)(x',y',t') = (x+x', y+y', t+t' + (x y' - x' y)/2).
// Haar measure is Lebesgue measure dx dy dt.
struct HeisenbergElement {
  double x = 0.0, y = 0.0, t = 0.0;
};

HeisenbergElement multiply(const HeisenbergElement& a, const HeisenbergElement& b);
HeisenbergElement inverse(const HeisenbergElement& a);

// automorphism (x,y,t) -> (r x, r y, r^2 t); volumes scale by r^homogeneous_dim
HeisenbergElement dilate(double r, const HeisenbergElement& a);
inline constexpr int homogeneous_dim = 4;

// Functions on the group are 3-d grid functions with axes (x, y, t), the
// t axis fastest.  Largest |coordinate| along one axis carrying samples above
// rel * peak; sizes support preconditions.
double axis_support_radius(const GridFunction& f, int axis, double rel = 1e-12);

// (f1 * f2)(g) = int f1(h) f2(h^{-1} g) dh, computed as one twisted planar
// convolution per t-frequency.  Refuses (precondition_error) when the summed
// supports, including the central growth from the twist, overflow the box.
GridFunction convolve(const GridFunction& f1, const GridFunction& f2);

namespace ref {
// direct Riemann sum in (x', y', t'), band-limited periodic t-reading (the
// transform convention); small grids only (cost ~ N^6), no boundary check
GridFunction convolve(const GridFunction& f1, const GridFunction& f2);
}  // namespace ref

// Samples of h -> f(g0 h), computed spectrally: uniform shifts in x and y
// plus a per-column t-shift t0 + (x0 y - y0 x)/2.  Band-limited periodic
// reading; the left-regular action is left_translate(f, inverse(g0)).
GridFunction left_translate(const GridFunction& f, const HeisenbergElement& g0);

// X1 = dx - (y/2) dt,  X2 = dy + (x/2) dt,  T = dt  (left-invariant frame;
// [X1, X2] = T).  Spectral differentiation per axis.
enum class LeftField { x1, x2, t };
GridFunction left_invariant_derivative(const GridFunction& f, LeftField which);

// Gaussian of radial width w in (x, y) centered at (cx, cy), t-envelope
// exp(-pi (t - t0)^2 / gamma^2) carried at mu rad/unit.  The t-frequency
// content then sits in a band around mu, bounded away from zero frequency --
// the shape dual-window identities need.
GridFunction modulated_gaussian(const Grid& g, double cx, double cy, double w,
                                double gamma, double mu, double t0 = 0.0);

}  // namespace mlsc::heisenberg
