#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "mlsc/core/errors.hpp"
#include "mlsc/core/grid.hpp"
#include "mlsc/core/hermite.hpp"
#include "mlsc/core/rng.hpp"
#include "mlsc/heisenberg/group.hpp"
#include "mlsc/heisenberg/representation.hpp"

using namespace mlsc;
using namespace mlsc::heisenberg;
using core::cplx;
using core::Grid;
using core::GridFunction;

namespace {

double maxabs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Truncated representations converge strongly, not in norm: the top few modes
// of the window couple to modes outside it with O(1) amplitude no matter how
// large M is.  All law residuals are therefore measured on a fixed leading
// observation block, which the larger windows approximate to spectral accuracy.
double blockmax(const Eigen::MatrixXcd& m, int k) {
  return m.topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

double integral(const GridFunction& f) {
  cplx s = 0.0;
  for (auto v : f.values) s += v;
  return s.real() * f.grid.cell_volume();
}

// Mollifier with vanishing second and fourth moments: Gaussians of width
// w, w*sqrt2, 2w combined with weights 8/3, -2, 1/3, each normalized to unit
// integral.  Leaves an O(w^6) mollification error.
GridFunction sharp_delta(const Grid& g, double w) {
  GridFunction m1 = modulated_gaussian(g, 0, 0, w, w, 0.0);
  GridFunction m2 =
      modulated_gaussian(g, 0, 0, w * std::numbers::sqrt2, w * std::numbers::sqrt2, 0.0);
  GridFunction m3 = modulated_gaussian(g, 0, 0, 2.0 * w, 2.0 * w, 0.0);
  const double a1 = integral(m1), a2 = integral(m2), a3 = integral(m3);
  GridFunction out(g);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.values[i] = (8.0 / 3.0) * m1.values[i] / a1 - 2.0 * m2.values[i] / a2 +
                    (1.0 / 3.0) * m3.values[i] / a3;
  return out;
}

}  // namespace

TEST_CASE("representation: identity, center, adjoint") {
  const double lam = 0.8;
  auto basis = fourier_basis(16, lam, 0.7, 0.7);
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(16, 16);

  auto pe = schrodinger_rep(basis, lam, {0, 0, 0});
  CHECK(maxabs(pe.mat - I) < 1e-12);

  // central character: (0,0,t) acts as the scalar e^{i lam t}
  auto pc = schrodinger_rep(basis, lam, {0, 0, 0.37});
  CHECK(maxabs(pc.mat - std::polar(1.0, lam * 0.37) * I) < 1e-12);

  // adjoint realizes the inverse element
  core::Rng rng(3);
  for (int it = 0; it < 8; ++it) {
    HeisenbergElement g{rng.uniform(-.6, .6), rng.uniform(-.6, .6), rng.uniform(-.6, .6)};
    auto p = schrodinger_rep(basis, lam, g);
    auto pi = schrodinger_rep(basis, lam, inverse(g));
    CHECK(maxabs(p.mat.adjoint() - pi.mat) < 1e-12);
  }
}

TEST_CASE("representation laws sharpen as the window grows") {
  for (double lam : {0.25, -1.0, 4.0}) {
    CAPTURE(lam);
    double prev = -1.0;
    for (int m : {8, 16, 32, 64}) {
      auto basis = fourier_basis(m, lam, 0.7, 0.7);
      core::Rng rng(7);
      double worst = 0.0;
      for (int it = 0; it < 10; ++it) {
        HeisenbergElement g1{rng.uniform(-.6, .6), rng.uniform(-.6, .6), rng.uniform(-.6, .6)};
        HeisenbergElement g2{rng.uniform(-.6, .6), rng.uniform(-.6, .6), rng.uniform(-.6, .6)};
        auto p1 = schrodinger_rep(basis, lam, g1);
        auto p2 = schrodinger_rep(basis, lam, g2);
        auto p12 = schrodinger_rep(basis, lam, multiply(g1, g2));
        worst = std::max(worst, blockmax(p1.mat * p2.mat - p12.mat, 8));
        worst = std::max(
            worst, blockmax(p1.mat * p1.mat.adjoint() - Eigen::MatrixXcd::Identity(m, m), 8));
      }
      CAPTURE(m);
      if (prev >= 0.0) CHECK(worst < std::max(prev, 1e-12));
      if (m >= 32) CHECK(worst < 1e-12);
      prev = worst;
    }
  }
}

TEST_CASE("dilation carries pi_lambda to pi_{r^2 lambda}") {
  const double lam = 1.3, r = 2.0;
  auto b1 = fourier_basis(32, lam, 0.7, 0.7);
  // same quadrature points compressed by r: the two matrices agree exactly
  auto b2 = core::hermite_basis(32, r * r * lam, Grid(1, b1.grid.half_width / r, b1.grid.n));
  core::Rng rng(9);
  for (int it = 0; it < 10; ++it) {
    HeisenbergElement g{rng.uniform(-.5, .5), rng.uniform(-.5, .5), rng.uniform(-.5, .5)};
    auto pa = schrodinger_rep(b1, lam, dilate(r, g));
    auto pb = schrodinger_rep(b2, r * r * lam, g);
    CHECK(maxabs(pa.mat - pb.mat) < 1e-12);
  }
}

TEST_CASE("transform: linearity and the convolution theorem") {
  Grid g(3, 4.0, 24);
  GridFunction f1 = modulated_gaussian(g, 0.3, -0.2, 0.9, 1.2, 1.5, 0.1);
  GridFunction f2 = modulated_gaussian(g, -0.3, 0.1, 1.0, 1.3, -1.2, -0.2);
  GridFunction fc = convolve(f1, f2);
  for (double lam : {1.2, -1.5}) {
    CAPTURE(lam);
    auto basis = fourier_basis(40, lam, 3.2, 3.2);
    auto ha = group_fourier(f1, lam, basis);
    auto hb = group_fourier(f2, lam, basis);
    TruncationInfo ti;
    auto hc = group_fourier(fc, lam, basis, &ti);
    const double hcn = hc.mat.norm();

    // the transform reverses products: (f1 * f2)^ = fhat2 fhat1
    CHECK((hc.mat - hb.mat * ha.mat).norm() / hcn < 1e-3);
    CHECK((hc.mat - ha.mat * hb.mat).norm() / hcn > 0.05);  // pins the order

    GridFunction fsum(g);
    for (std::size_t i = 0; i < fsum.size(); ++i)
      fsum.values[i] = 2.0 * f1.values[i] + cplx(0, 1) * f2.values[i];
    auto hs = group_fourier(fsum, lam, basis);
    CHECK((hs.mat - 2.0 * ha.mat - cplx(0, 1) * hb.mat).norm() / hs.mat.norm() < 1e-12);

    CHECK(ti.matrix_hs2 >= 0.0);
    CHECK(ti.matrix_hs2 <= ti.kernel_hs2 * (1.0 + 1e-9));
    CHECK(ti.matrix_hs2 / ti.kernel_hs2 > 0.9);  // window wide enough for this data
  }
}

TEST_CASE("mollified delta transforms to the identity") {
  Grid g(3, 5.0, 128);
  {
    GridFunction moll = sharp_delta(g, 0.42);
    for (double lam : {0.6, -0.6}) {
      CAPTURE(lam);
      auto basis = fourier_basis(16, lam, 2.9, 2.9);
      auto fh = group_fourier(moll, lam, basis);
      Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(16, 16);
      CHECK(blockmax(fh.mat - I, 4) < 1e-3);
      CHECK(blockmax(fh.mat - I, 2) < 2e-4);
    }
  }
  {
    // higher lambda reads finer group scales: the mollifier must narrow with it
    GridFunction moll = sharp_delta(g, 0.30);
    auto basis = fourier_basis(16, 1.7, 2.1, 2.1);
    auto fh = group_fourier(moll, 1.7, basis);
    CHECK(blockmax(fh.mat - Eigen::MatrixXcd::Identity(16, 16), 2) < 1e-3);
  }
}

TEST_CASE("Plancherel: fitted constant, held-out prediction") {
  Grid g(3, 9.0, 72);
  std::vector<GridFunction> fs;
  fs.push_back(modulated_gaussian(g, 0.4, -0.3, 1.4, 3.5, 2.0, 0.2));
  fs.push_back(modulated_gaussian(g, -0.5, 0.2, 1.2, 3.0, 1.6, -0.3));
  GridFunction held = modulated_gaussian(g, 0.0, 0.6, 1.5, 4.0, 2.4, 0.0);
  {
    GridFunction b = modulated_gaussian(g, 0.5, 0.5, 1.3, 3.2, 1.4, 0.5);
    for (std::size_t i = 0; i < held.size(); ++i) held.values[i] += 0.7 * b.values[i];
  }

  auto win = dual_window(0.125, 8.0, 48);
  std::vector<double> l2sq;
  std::vector<std::vector<double>> masses;
  for (const auto& f : fs) {
    const double n2 = core::norm_l2(f);
    l2sq.push_back(n2 * n2);
    masses.push_back(dual_masses(f, win));
  }
  auto fit = plancherel_fit(l2sq, masses, win);

  // fitted free; the known closed form pins it
  CHECK(std::abs(fit.constant * 4.0 * std::numbers::pi * std::numbers::pi - 1.0) < 5e-3);
  for (double r : fit.residuals) CHECK(r < 2e-2);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    CHECK(fit.tails[i] >= 0.0);
    CHECK(fit.tails[i] < 0.05 * l2sq[i]);
  }

  // held-out function: dual masses predict its squared norm
  auto mh = dual_masses(held, win);
  double sum = 0.0;
  for (std::size_t k = 0; k < mh.size(); ++k) sum += win.weights[k] * mh[k];
  const double nh = core::norm_l2(held);
  CHECK(std::abs(fit.constant * sum - nh * nh) / (nh * nh) < 1e-2);
}

TEST_CASE("Plancherel weight is homogeneous under dilation") {
  Grid g(3, 9.0, 72);
  const double r = 1.25;
  GridFunction f = modulated_gaussian(g, 0.4, -0.3, 1.4, 3.5, 2.0, 0.0);
  // f o dilate(r) in closed form: centers and widths shrink by r (t by r^2),
  // the modulation frequency grows by r^2
  GridFunction fr =
      modulated_gaussian(g, 0.4 / r, -0.3 / r, 1.4 / r, 3.5 / (r * r), 2.0 * r * r, 0.0);

  // Haar volume scales by r^{-Q}, Q = 4
  const double m0 = core::total_mass(f), mr = core::total_mass(fr);
  CHECK(std::abs(mr / m0 - std::pow(r, -4.0)) < 1e-12);

  auto win = dual_window(0.125, 8.0, 48);
  std::vector<std::vector<double>> masses;
  masses.push_back(dual_masses(f, win));
  masses.push_back(dual_masses(fr, win));
  auto fit = plancherel_fit({m0, mr}, masses, win);
  CHECK(std::abs(fit.constant * 4.0 * std::numbers::pi * std::numbers::pi - 1.0) < 1e-2);
  for (double res : fit.residuals) CHECK(res < 1e-3);
}

TEST_CASE("dual window and truncation rules") {
  auto win = dual_window(0.125, 8.0, 48);
  CHECK(win.nodes.size() == 96);
  CHECK(win.weights.size() == 96);
  CHECK(win.nodes.front() == -8.0);
  CHECK(win.nodes[47] == doctest::Approx(-0.125));
  CHECK(win.nodes[48] == doctest::Approx(0.125));
  CHECK(win.nodes.back() == 8.0);
  for (std::size_t k = 0; k + 1 < win.nodes.size(); ++k) CHECK(win.nodes[k] < win.nodes[k + 1]);
  for (double w : win.weights) CHECK(w > 0.0);
  // mirrored nodes carry mirrored weights
  for (int k = 0; k < 48; ++k) CHECK(win.weights[k] == doctest::Approx(win.weights[95 - k]));

  CHECK(dual_truncation(0.125) == 64);  // low lambda: spectrum stretches as 1/lambda
  CHECK(dual_truncation(1.0) == 32);
  CHECK(dual_truncation(4.0) == 64);  // high lambda: spatial reach stretches as sqrt(lambda)

  // requested spacing is snapped to an integer divisor
  auto b = fourier_basis(12, 1.0, 0.5, 0.5, 0.2);
  const double q = 0.2 / b.grid.spacing();
  CHECK(std::abs(q - std::round(q)) < 1e-9);
}

TEST_CASE("refusals") {
  Grid g(3, 9.0, 72);
  GridFunction f = modulated_gaussian(g, 0.4, -0.3, 1.4, 3.5, 2.0, 0.2);

  auto basis = fourier_basis(16, 1.0, 0.7, 0.7);
  CHECK_THROWS_AS(schrodinger_rep(basis, 0.0, {0, 0, 0}), config_error);
  CHECK_THROWS_AS(schrodinger_rep(basis, 2.0, {0, 0, 0}), config_error);  // scale mismatch

  CHECK_THROWS_AS(fourier_basis(16, 0.0, 0.7, 0.7), config_error);
  CHECK_THROWS_AS(fourier_basis(16, 1.0, -0.1, 0.7), config_error);
  CHECK_THROWS_AS(dual_truncation(0.0), config_error);

  // t sampling cannot resolve e^{-i lambda t} at this lambda
  CHECK_THROWS_AS(group_fourier(f, 9.0, fourier_basis(16, 9.0, 0.7, 0.7)), precondition_error);
  // basis lattice too coarse for the modulation the data picks up across x
  CHECK_THROWS_AS(group_fourier(f, 3.0, fourier_basis(16, 3.0, 0.0, 0.1)), precondition_error);
  {
    Grid g1(1, 4.0, 32);
    GridFunction f1(g1);
    CHECK_THROWS_AS(group_fourier(f1, 1.0, fourier_basis(16, 1.0, 0.7, 0.7)), config_error);
  }
  CHECK_THROWS_AS(group_fourier(f, 2.0, fourier_basis(16, 1.0, 0.7, 0.7)), config_error);

  CHECK_THROWS_AS(dual_window(0.0, 8.0, 48), config_error);
  CHECK_THROWS_AS(dual_window(2.0, 1.0, 48), config_error);
  CHECK_THROWS_AS(dual_window(0.125, 8.0, 1), config_error);

  auto win = dual_window(0.125, 8.0, 4);
  std::vector<double> m1(win.nodes.size(), 1.0);
  CHECK_THROWS_AS(plancherel_fit({1.0}, {m1, m1}, win), config_error);
  CHECK_THROWS_AS(plancherel_fit({1.0}, {{1.0, 2.0}}, win), config_error);
  CHECK_THROWS_AS(plancherel_fit({-1.0}, {m1}, win), config_error);
  {
    // inconsistent data: no single constant fits both within 5%
    std::vector<double> m2(win.nodes.size(), 2.0);
    CHECK_THROWS_AS(plancherel_fit({1.0, 1.0}, {m1, m2}, win), precondition_error);
  }
}
