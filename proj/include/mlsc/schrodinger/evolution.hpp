#pragma once
#include "mlsc/euclid/limits.hpp"

namespace mlsc::schrodinger {

using core::cplx;
using core::Grid;
using core::GridFunction;

// Exact spectral free evolution at scale eps in the tau-regime:
//   psi_t = idft( exp(-2 pi^2 i eps^{2-tau} |xi|^2 t) dft(psi0) ).
// One multiplier per call, no time stepping, so unitarity and the group law
// in t hold to rounding.  Refuses states whose frequency mass reaches the
// edge of the dual grid (the multiplier would wrap it).
GridFunction propagate(const GridFunction& psi0, double eps, double tau, double t);

// eps^s ||D^{s/2} f_eps|| + eps^{-s} ||D^{-s/2} f_eps|| across the schedule,
// with D^{+-s/2} the Fourier multiplier (2 pi |xi|)^{+-s}, zero mode excluded.
// True when the max/min ratio stays <= 10.  A member holding most of its mass
// in the zero-frequency bin makes the negative power meaningless; such input
// is refused rather than scored.
bool oscillation_normalization_check(const euclid::WaveFamily& fam, double s);

// int a(x) |psi(x)|^2 dx against a sampled or analytic position density probe
double density_pairing(const GridFunction& psi, const GridFunction& a);
double density_pairing(const GridFunction& psi,
                       const std::function<double(const double*)>& a);

}  // namespace mlsc::schrodinger
