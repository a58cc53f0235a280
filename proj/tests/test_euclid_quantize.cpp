#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mlsc/core/bump.hpp"
#include "mlsc/core/errors.hpp"
#include "mlsc/core/fft.hpp"
#include "mlsc/core/quadrature.hpp"
#include "mlsc/core/rng.hpp"
#include "mlsc/euclid/phase_symbol.hpp"
#include "mlsc/euclid/quantize.hpp"

using namespace mlsc;
using namespace mlsc::core;
using namespace mlsc::euclid;

namespace {

GridFunction gaussian(const Grid& g) {
  return sample(g, [](const double* x) { return cplx(std::exp(-M_PI * x[0] * x[0]), 0.0); });
}

double max_abs_diff(const GridFunction& f, const GridFunction& g) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

PhaseSymbol gauss_symbol(const Grid& g) {
  return make_symbol(g, dual_grid(g), [](const double* x, const double* xi) {
    return cplx(std::exp(-x[0] * x[0] - xi[0] * xi[0]), 0.0);
  });
}

}  // namespace

TEST_CASE("kn: identity symbol acts as identity") {
  Grid g(1, 8.0, 256);
  GridFunction f = gaussian(g);
  PhaseSymbol one = make_symbol(g, dual_grid(g), [](const double*, const double*) {
    return cplx(1.0, 0.0);
  });
  GridFunction out = quantize_kn(one, f);
  CHECK(max_abs_diff(out, f) / norm_l2(f) < 1e-8);
}

TEST_CASE("kn: position symbol multiplies") {
  Grid g(1, 8.0, 256);
  GridFunction f = gaussian(g);
  PhaseSymbol xsym = make_symbol(g, dual_grid(g), [](const double* x, const double*) {
    return cplx(x[0], 0.0);
  });
  GridFunction out = quantize_kn(xsym, f);
  GridFunction want = sample(g, [](const double* x) {
    return cplx(x[0] * std::exp(-M_PI * x[0] * x[0]), 0.0);
  });
  CHECK(max_abs_diff(out, want) < 1e-8);
}

TEST_CASE("kn: frequency symbol differentiates") {
  // Op(xi) f = (2 pi i)^{-1} f'; for the unit Gaussian that is i x f
  Grid g(1, 8.0, 256);
  GridFunction f = gaussian(g);
  PhaseSymbol xisym = make_symbol(g, dual_grid(g), [](const double*, const double* xi) {
    return cplx(xi[0], 0.0);
  });
  GridFunction out = quantize_kn(xisym, f);
  GridFunction want = sample(g, [](const double* x) {
    return cplx(0.0, x[0] * std::exp(-M_PI * x[0] * x[0]));
  });
  CHECK(max_abs_diff(out, want) < 1e-8);
}

TEST_CASE("kn: separable fast path == generic path == slow reference") {
  Grid g(1, 8.0, 256);
  Rng rng(11);
  GridFunction f = random_smooth(g, rng);
  PhaseSymbol generic = gauss_symbol(g);
  PhaseSymbol sep = make_separable_symbol(
      g, dual_grid(g),
      {{[](const double* x) { return cplx(std::exp(-x[0] * x[0]), 0.0); },
        [](const double* xi) { return cplx(std::exp(-xi[0] * xi[0]), 0.0); }}});
  GridFunction a1 = quantize_kn(generic, f);
  GridFunction a2 = quantize_kn(sep, f);
  GridFunction a3 = ref::quantize_kn(generic, f);
  CHECK(max_abs_diff(a1, a2) < 1e-12);
  CHECK(max_abs_diff(a1, a3) < 1e-10);
}

TEST_CASE("kn: exact discrete adjoint") {
  Grid g(1, 6.0, 128);
  Rng rng(3);
  GridFunction f = random_smooth(g, rng);
  GridFunction h = random_smooth(g, rng);
  PhaseSymbol a = make_symbol(g, dual_grid(g), [](const double* x, const double* xi) {
    return std::exp(cplx(-x[0] * x[0] - 0.5 * xi[0] * xi[0], 0.3 * x[0] + 0.1 * xi[0]));
  });
  cplx lhs = inner_product(quantize_kn(a, f), h);
  cplx rhs = inner_product(f, quantize_kn_adjoint(a, h));
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("weyl: identity and x-free symbols") {
  Grid g(1, 8.0, 128);
  GridFunction f = gaussian(g);
  PhaseSymbol one = make_symbol(g, dual_grid(g), [](const double*, const double*) {
    return cplx(1.0, 0.0);
  });
  CHECK(max_abs_diff(quantize_weyl(one, f), f) / norm_l2(f) < 1e-8);

  Rng rng(5);
  GridFunction r = random_smooth(g, rng);
  // genuinely x-free: cutoff only on the frequency box
  PhaseSymbol xisym = make_symbol(g, dual_grid(g),
                                  [](const double*, const double* xi) { return cplx(xi[0], 0.0); },
                                  EdgeCutoff{.flat = 0.75, .supp = 0.9375, .cut_pos = false});
  CHECK(max_abs_diff(quantize_weyl(xisym, r), quantize_kn(xisym, r)) < 1e-10);
}

TEST_CASE("weyl: x.xi symbol against slow reference and closed form") {
  Grid g(1, 8.0, 128);
  GridFunction f = gaussian(g);
  PhaseSymbol a = make_symbol(g, dual_grid(g), [](const double* x, const double* xi) {
    return cplx(x[0] * xi[0], 0.0);
  });
  GridFunction fast = quantize_weyl(a, f);
  GridFunction slow = ref::quantize_weyl(a, f);
  CHECK(max_abs_diff(fast, slow) < 1e-10);
  // symmetrized ordering: Op_W(x xi) f = i (x^2 - 1/(4 pi)) f for the unit Gaussian
  GridFunction want = sample(g, [](const double* x) {
    return cplx(0.0, (x[0] * x[0] - 0.25 / M_PI) * std::exp(-M_PI * x[0] * x[0]));
  });
  CHECK(max_abs_diff(fast, want) < 1e-8);
}

TEST_CASE("weyl: self-adjoint for real symbols") {
  Grid g(1, 6.0, 128);
  Rng rng(9);
  GridFunction f = random_smooth(g, rng);
  GridFunction h = random_smooth(g, rng);
  PhaseSymbol a = make_symbol(g, dual_grid(g), [](const double* x, const double* xi) {
    return cplx(std::exp(-x[0] * x[0]) * std::cos(xi[0]) + 0.3 * x[0] * xi[0], 0.0);
  });
  cplx lhs = inner_product(quantize_weyl(a, f), h);
  cplx rhs = inner_product(f, quantize_weyl(a, h));
  CHECK(std::abs(lhs - rhs) < 1e-8);
  // Weyl square with f = g: imaginary part vanishes
  PhaseSymbol sq = make_symbol(g, dual_grid(g), [](const double* x, const double* xi) {
    double b = std::exp(-x[0] * x[0] - xi[0] * xi[0]) + 0.5 * std::exp(-2.0 * (x[0] - 0.4) * (x[0] - 0.4) - xi[0] * xi[0]);
    return cplx(b * b, 0.0);
  });
  cplx me = matrix_element(sq, 1.0, f, f, Quantization::weyl);
  CHECK(std::abs(me.imag()) <= 1e-8 * norm_l2(f) * norm_l2(f));
}

TEST_CASE("weyl: midpoint table cap") {
  Grid g(1, 8.0, 4096);
  GridFunction f = gaussian(g);
  CHECK_THROWS_AS(quantize_weyl(gauss_symbol(g), f), precondition_error);
}

TEST_CASE("quantize: grid incompatibility rejected") {
  Grid g(1, 8.0, 256);
  Grid g2(1, 8.0, 128);
  CHECK_THROWS_AS(quantize_kn(gauss_symbol(g), gaussian(g2)), config_error);
}

TEST_CASE("quantize: edge-heavy symbol refused") {
  Grid g(1, 8.0, 256);
  GridFunction f = gaussian(g);
  PhaseSymbol raw = make_symbol(
      g, dual_grid(g), [](const double*, const double*) { return cplx(1.0, 0.0); },
      EdgeCutoff{.flat = 0.75, .supp = 0.9375, .cut_pos = false, .cut_freq = false});
  CHECK_THROWS_AS(quantize_kn(raw, f), precondition_error);
}

TEST_CASE("scale_symbol: substitution, support growth, refusal") {
  Grid g(1, 4.0, 256);
  Grid d = dual_grid(g);  // half-width 16
  PhaseSymbol a = make_symbol(g, d, [](const double* x, const double* xi) {
    return cplx(std::exp(-x[0] * x[0] - xi[0] * xi[0]), 0.0);
  });

  PhaseSymbol same = scale_symbol(a, 1.0);
  double x = 0.37, xi = 1.21;
  CHECK(same.eval(&x, &xi) == a.eval(&x, &xi));

  PhaseSymbol half = scale_symbol(a, 0.5);
  CHECK(std::abs(half.eval(&x, &xi) -
                 cplx(std::exp(-x * x - 0.25 * xi * xi), 0.0)) < 1e-15);

  // compact bump in xi: thresholded support radius scales exactly by 1/eps
  PhaseSymbol bumpy = make_symbol(g, d, [](const double*, const double* xi) {
    return cplx(core::plateau_bump(xi[0], 0.5, 1.0), 0.0);
  });
  double r1 = symbol_support_radius(bumpy);
  double r2 = symbol_support_radius(scale_symbol(bumpy, 0.5));
  CHECK(std::abs(r2 - 2.0 * r1) <= 3.0 * d.spacing());

  // flattening a unit Gaussian far beyond the box aliases: refused
  Grid gs(1, 4.0, 64);  // frequency half-width 4
  PhaseSymbol small = make_symbol(gs, dual_grid(gs), [](const double* xp, const double* xip) {
    return cplx(std::exp(-xp[0] * xp[0] - xip[0] * xip[0]), 0.0);
  });
  CHECK_THROWS_AS(scale_symbol(small, 0.125), precondition_error);
  CHECK_THROWS_AS(scale_symbol(small, -1.0), config_error);

  // the acceptance ladder's finest rung stays admissible on the wide grid
  Grid gl(1, 4.0, 4096);  // frequency half-width 256
  PhaseSymbol wide = make_symbol(gl, dual_grid(gl), [](const double* xp, const double* xip) {
    return cplx(std::exp(-xp[0] * xp[0] - xip[0] * xip[0]), 0.0);
  });
  CHECK_NOTHROW(scale_symbol(wide, 1.0 / 128.0));
}

TEST_CASE("matrix_element: identity, disjoint support, double-quadrature oracle") {
  Grid g(1, 8.0, 256);
  GridFunction f = gaussian(g);
  double nf = norm_l2(f);
  for (auto& v : f.values) v /= nf;  // unit norm

  PhaseSymbol one = make_symbol(g, dual_grid(g), [](const double*, const double*) {
    return cplx(1.0, 0.0);
  });
  CHECK(std::abs(matrix_element(one, 1.0, f, f) - cplx(1.0, 0.0)) < 1e-8);

  PhaseSymbol far = make_symbol(g, dual_grid(g), [](const double*, const double* xi) {
    return cplx(std::exp(-4.0 * (xi[0] - 5.0) * (xi[0] - 5.0)), 0.0);
  });
  CHECK(std::abs(matrix_element(far, 1.0, f, f)) < 1e-8);

  // independent continuum oracle for (Op(a) f, f), a = e^{-x^2 - xi^2}
  GridFunction fg = gaussian(g);
  cplx got = matrix_element(gauss_symbol(g), 1.0, fg, fg);
  cplx want = integrate_c(
      [](double xv) {
        cplx inner = integrate_c(
            [xv](double xiv) {
              return std::exp(cplx(-xv * xv - xiv * xiv - M_PI * xiv * xiv,
                                   2.0 * M_PI * xv * xiv));
            },
            -6.0, 6.0, 12, 16);
        return inner * std::exp(-M_PI * xv * xv);
      },
      -6.0, 6.0, 12, 16);
  CHECK(std::abs(got - want) < 1e-8);
}

TEST_CASE("matrix_element: linear in the symbol") {
  Grid g(1, 6.0, 128);
  Rng rng(21);
  GridFunction f = random_smooth(g, rng);
  GridFunction h = random_smooth(g, rng);
  auto f1 = [](const double* x, const double* xi) {
    return cplx(std::exp(-x[0] * x[0] - xi[0] * xi[0]), 0.0);
  };
  auto f2 = [](const double* x, const double* xi) {
    return std::exp(cplx(-0.5 * x[0] * x[0] - 2.0 * xi[0] * xi[0], x[0]));
  };
  Grid d = dual_grid(g);
  PhaseSymbol a1 = make_symbol(g, d, f1);
  PhaseSymbol a2 = make_symbol(g, d, f2);
  PhaseSymbol sum = make_symbol(g, d, [f1, f2](const double* x, const double* xi) {
    return f1(x, xi) + f2(x, xi);
  });
  cplx v = matrix_element(sum, 1.0, f, h);
  cplx v12 = matrix_element(a1, 1.0, f, h) + matrix_element(a2, 1.0, f, h);
  CHECK(std::abs(v - v12) < 1e-12);
}

TEST_CASE("matrix_element: scaling identity shares the code path") {
  Grid g(1, 4.0, 1024);
  Rng rng(33);
  GridFunction f = random_smooth(g, rng, 0.1);
  GridFunction h = random_smooth(g, rng, 0.1);
  PhaseSymbol a = gauss_symbol(g);
  for (double eps : {0.5, 0.25, 0.125}) {
    cplx v1 = matrix_element(a, eps, f, h);
    cplx v2 = matrix_element(scale_symbol(a, eps), 1.0, f, h);
    CHECK(v1.real() == v2.real());
    CHECK(v1.imag() == v2.imag());
  }
}

TEST_CASE("operator norms stay level across the eps ladder") {
  Grid g(1, 4.0, 4096);
  PhaseSymbol a = make_separable_symbol(
      g, dual_grid(g),
      {{[](const double* x) { return cplx(std::exp(-x[0] * x[0]), 0.0); },
        [](const double* xi) { return cplx(std::exp(-xi[0] * xi[0]), 0.0); }}});
  Rng rng(77);
  GridFunction start = random_smooth(g, rng, 0.05);
  double lo = 1e300, hi = 0.0;
  for (int k = 3; k <= 7; ++k) {
    double eps = std::pow(2.0, -k);
    double nrm = op_norm_estimate(scale_symbol(a, eps), start, 8);
    lo = std::min(lo, nrm);
    hi = std::max(hi, nrm);
  }
  CHECK(hi / lo < 1.1);
  CHECK(hi < 1.2);  // bounded by roughly sup|a| = 1
}
