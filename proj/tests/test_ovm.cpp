#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "mlsc/core/errors.hpp"
#include "mlsc/core/rng.hpp"
#include "mlsc/ovm/measure.hpp"

using namespace mlsc;
using namespace mlsc::ovm;
using cplx = std::complex<double>;

namespace {

Eigen::MatrixXcd random_block(core::Rng& rng, int d) {
  Eigen::MatrixXcd b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = cplx(rng.normal(), rng.normal());
  return b;
}

OvmAtom random_atom(core::Rng& rng, int d, bool positive) {
  OvmAtom a;
  a.point = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
  a.weight = std::exp(rng.uniform(-1, 1));
  Eigen::MatrixXcd b = random_block(rng, d);
  a.block = positive ? Eigen::MatrixXcd(b.adjoint() * b) : b;
  return a;
}

Eigen::MatrixXcd unit_projector(core::Rng& rng, int d) {
  Eigen::VectorXcd v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(rng.normal(), rng.normal());
  v.normalize();
  return v * v.adjoint();
}

}  // namespace

TEST_CASE("mov_norm: worked examples") {
  OperatorValuedMeasure m;
  m.space = "point";
  CHECK(mov_norm(m) == 0.0);

  m.atoms.push_back({{0.0}, 2.0, Eigen::MatrixXcd::Identity(2, 2) / 2.0, false});
  CHECK(mov_norm(m) == doctest::Approx(2.0).epsilon(1e-12));

  core::Rng rng(11);
  OperatorValuedMeasure p;
  p.atoms.push_back({{1.0}, 0.7, unit_projector(rng, 3), false});
  CHECK(mov_norm(p) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("normalize: trace-1 representatives") {
  core::Rng rng(13);
  OperatorValuedMeasure m;
  m.atoms.push_back({{0.0, 0.0}, 1.0, 3.0 * unit_projector(rng, 4), false});
  auto n = normalize(m);
  CHECK(n.atoms[0].weight == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(n.atoms[0].block.trace() - 1.0) < 1e-12);
  CHECK_FALSE(n.atoms[0].non_normalizable);

  // already normalized: fixed point
  auto n2 = normalize(n);
  CHECK(n2.atoms[0].weight == doctest::Approx(n.atoms[0].weight).epsilon(1e-14));
  CHECK((n2.atoms[0].block - n.atoms[0].block).cwiseAbs().maxCoeff() < 1e-14);

  // no trace-1 representative with positive weight: flagged, atom untouched
  Eigen::MatrixXcd traceless(2, 2);
  traceless << 1.0, 0.0, 0.0, -1.0;
  OperatorValuedMeasure z;
  z.atoms.push_back({{0.5}, 1.0, traceless, false});
  z.atoms.push_back({{0.7}, 2.0, -unit_projector(rng, 2), false});
  auto nz = normalize(z);
  CHECK(nz.atoms[0].non_normalizable);
  CHECK(nz.atoms[1].non_normalizable);
  CHECK((nz.atoms[0].block - traceless).cwiseAbs().maxCoeff() == 0.0);
  CHECK(nz.atoms[0].weight == 1.0);
}

TEST_CASE("pair: worked examples") {
  core::Rng rng(17);
  OperatorValuedMeasure m;
  m.atoms.push_back({{0.0}, 0.8, unit_projector(rng, 3), false});
  m.atoms.push_back({{1.0}, 1.7, unit_projector(rng, 3), false});

  // identity symbol reads off the scalar mass
  std::vector<Eigen::MatrixXcd> ones(2, Eigen::MatrixXcd::Identity(3, 3));
  CHECK(std::abs(pair(ones, m) - cplx(0.8 + 1.7)) < 1e-12);

  // adjoint symbol on a unit rank-1 atom
  OperatorValuedMeasure single;
  single.atoms.push_back({{0.0}, 1.0, unit_projector(rng, 4), false});
  CHECK(std::abs(pair({single.atoms[0].block.adjoint()}, single) - cplx(1.0)) < 1e-12);

  CHECK_THROWS_AS(pair({Eigen::MatrixXcd::Identity(2, 2)}, m), config_error);
  CHECK_THROWS_AS(pair({ones[0], Eigen::MatrixXcd::Identity(2, 2)}, m), config_error);
}

TEST_CASE("is_positive: examples") {
  core::Rng rng(19);
  OperatorValuedMeasure m;
  m.atoms.push_back({{0.0}, 1.0, unit_projector(rng, 3), false});
  m.atoms.push_back({{1.0}, 2.0, unit_projector(rng, 2), false});
  CHECK(is_positive(m));

  Eigen::MatrixXcd neg(2, 2);
  neg << 1.0, 0.0, 0.0, -0.1;
  OperatorValuedMeasure bad;
  bad.atoms.push_back({{0.0}, 1.0, neg, false});
  CHECK_FALSE(is_positive(bad));

  Eigen::MatrixXcd skew(2, 2);
  skew << 1.0, cplx(0, 1), cplx(0, 1), 1.0;  // not Hermitian
  OperatorValuedMeasure nh;
  nh.atoms.push_back({{0.0}, 1.0, skew, false});
  CHECK_FALSE(is_positive(nh));
}

TEST_CASE("equivalent: rescalings yes, similarities no") {
  core::Rng rng(23);
  OperatorValuedMeasure m;
  m.atoms.push_back({{0.3, -0.4}, 1.0, 2.5 * unit_projector(rng, 3), false});
  m.atoms.push_back({{0.1, 0.9}, 0.6, Eigen::MatrixXcd(random_block(rng, 2)), false});

  CHECK(equivalent(m, normalize(m)));

  auto scaled = m;
  scaled.atoms[0].weight *= 2.0;
  scaled.atoms[0].block /= 2.0;
  CHECK(equivalent(m, scaled));

  // non-scalar similarity preserves trace but not the class
  auto sim = m;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2, 2);
  u(0, 1) = 0.5;
  sim.atoms[1].block = u * sim.atoms[1].block * u.inverse();
  CHECK_FALSE(equivalent(m, sim));

  auto moved = m;
  moved.atoms[0].point[1] += 1.0;
  CHECK_THROWS_AS(equivalent(m, moved), config_error);
  auto shorter = m;
  shorter.atoms.pop_back();
  CHECK_THROWS_AS(equivalent(m, shorter), config_error);

  OvmAtom badw = m.atoms[0];
  badw.weight = -1.0;
  OperatorValuedMeasure bw;
  bw.atoms.push_back(badw);
  CHECK_THROWS_AS(mov_norm(bw), config_error);
}

TEST_CASE("property suite: 500 random instances") {
  core::Rng rng(29);
  for (int inst = 0; inst < 500; ++inst) {
    const int d = 1 + (int)(rng.uniform(0, 5));
    const int natoms = 1 + (int)(rng.uniform(0, 4));

    OperatorValuedMeasure m1, m2;
    for (int k = 0; k < natoms; ++k) {
      OvmAtom a = random_atom(rng, d, false);
      OvmAtom b = random_atom(rng, d, false);
      b.point = a.point;
      m1.atoms.push_back(a);
      m2.atoms.push_back(b);
    }

    // triangle inequality and homogeneity of the trace-norm mass
    OperatorValuedMeasure sum;
    for (int k = 0; k < natoms; ++k) {
      OvmAtom s = m1.atoms[k];
      s.weight = 1.0;
      s.block = m1.atoms[k].weight * m1.atoms[k].block +
                m2.atoms[k].weight * m2.atoms[k].block;
      sum.atoms.push_back(s);
    }
    CHECK(mov_norm(sum) <= mov_norm(m1) + mov_norm(m2) + 1e-12);
    const double c = std::exp(rng.uniform(-1, 1));
    OperatorValuedMeasure scaled = m1;
    for (auto& a : scaled.atoms) a.weight *= c;
    CHECK(std::abs(mov_norm(scaled) - c * mov_norm(m1)) <= 1e-12 * (1.0 + mov_norm(scaled)));

    // pairing is linear in the symbol and invariant across the class
    std::vector<Eigen::MatrixXcd> s1, s2, sc;
    for (int k = 0; k < natoms; ++k) {
      s1.push_back(random_block(rng, d));
      s2.push_back(random_block(rng, d));
      sc.push_back(2.0 * s1.back() + cplx(0, 1) * s2.back());
    }
    const cplx lin = pair(sc, m1) - 2.0 * pair(s1, m1) - cplx(0, 1) * pair(s2, m1);
    CHECK(std::abs(lin) <= 1e-10 * (1.0 + std::abs(pair(sc, m1))));

    OperatorValuedMeasure resc = m1;
    for (auto& a : resc.atoms) {
      const double f = std::exp(rng.uniform(-1, 1));
      a.weight *= f;
      a.block /= f;
    }
    CHECK(equivalent(m1, resc));
    CHECK(std::abs(pair(s1, resc) - pair(s1, m1)) <=
          1e-10 * (1.0 + std::abs(pair(s1, m1))));

    // positive measures pair nonnegatively with A*A symbols
    OperatorValuedMeasure pos;
    for (int k = 0; k < natoms; ++k) pos.atoms.push_back(random_atom(rng, d, true));
    CHECK(is_positive(pos));
    std::vector<Eigen::MatrixXcd> psym;
    double scale = 0.0;
    for (int k = 0; k < natoms; ++k) {
      Eigen::MatrixXcd a = random_block(rng, d);
      psym.push_back(a.adjoint() * a);
      scale += psym.back().cwiseAbs().maxCoeff() * pos.atoms[k].block.cwiseAbs().maxCoeff();
    }
    const cplx pv = pair(psym, pos);
    CHECK(std::abs(pv.imag()) <= 1e-10 * (1.0 + scale));
    CHECK(pv.real() >= -1e-10 * (1.0 + scale));

    // normalize keeps positivity and the class, and its pairing is unchanged
    auto npos = normalize(pos);
    for (const auto& a : npos.atoms) CHECK_FALSE(a.non_normalizable);
    CHECK(is_positive(npos));
    CHECK(equivalent(pos, npos));
    CHECK(std::abs(pair(psym, npos) - pv) <= 1e-10 * (1.0 + std::abs(pv)));

    // scalar symbols s*I against trace-1 blocks reduce to a scalar pairing
    std::vector<Eigen::MatrixXcd> sid;
    double expect = 0.0;
    for (int k = 0; k < natoms; ++k) {
      const double s = rng.uniform(0, 2);
      sid.push_back(s * Eigen::MatrixXcd::Identity(d, d));
      expect += npos.atoms[k].weight * s;
    }
    CHECK(std::abs(pair(sid, npos) - expect) <= 1e-10 * (1.0 + expect));
  }
}
