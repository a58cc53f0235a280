#include "mlsc/ovm/measure.hpp"

#include <cmath>

#include "mlsc/core/errors.hpp"

namespace mlsc::ovm {

namespace {

void check_atom(const OvmAtom& a) {
  if (!(a.weight > 0.0) || !std::isfinite(a.weight))
    throw config_error("ovm: weights must be positive and finite");
  if (a.block.rows() == 0 || a.block.rows() != a.block.cols())
    throw config_error("ovm: blocks must be square and non-empty");
}

}  // namespace

double mov_norm(const OperatorValuedMeasure& m) {
  double s = 0.0;
  for (const auto& a : m.atoms) {
    check_atom(a);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.block);
    s += a.weight * svd.singularValues().sum();
  }
  return s;
}

OperatorValuedMeasure normalize(const OperatorValuedMeasure& m) {
  OperatorValuedMeasure out = m;
  for (auto& a : out.atoms) {
    check_atom(a);
    const std::complex<double> t = a.block.trace();
    const double scale = std::max(1.0, a.block.cwiseAbs().maxCoeff());
    // a trace-1 representative with positive weight exists only for a
    // positive real trace
    if (!(t.real() > 1e-12 * scale) || std::abs(t.imag()) > 1e-12 * std::abs(t.real())) {
      a.non_normalizable = true;
      continue;
    }
    a.weight *= t.real();
    a.block /= t.real();
    a.non_normalizable = false;
  }
  return out;
}

std::complex<double> pair(const std::vector<Eigen::MatrixXcd>& symbol,
                          const OperatorValuedMeasure& m) {
  if (symbol.size() != m.atoms.size())
    throw config_error("ovm: one symbol matrix per atom");
  std::complex<double> s = 0.0;
  for (std::size_t k = 0; k < m.atoms.size(); ++k) {
    const auto& a = m.atoms[k];
    check_atom(a);
    if (symbol[k].rows() != a.block.rows() || symbol[k].cols() != a.block.cols())
      throw config_error("ovm: symbol dimension mismatch at an atom");
    s += a.weight * (symbol[k] * a.block).trace();
  }
  return s;
}

bool is_positive(const OperatorValuedMeasure& m) {
  for (const auto& a : m.atoms) {
    check_atom(a);
    if ((a.block - a.block.adjoint()).cwiseAbs().maxCoeff() > 1e-10) return false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        0.5 * (a.block + a.block.adjoint()), Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) return false;
  }
  return true;
}

bool equivalent(const OperatorValuedMeasure& a, const OperatorValuedMeasure& b) {
  if (a.atoms.size() != b.atoms.size())
    throw config_error("ovm: atom lists differ in length");
  for (std::size_t k = 0; k < a.atoms.size(); ++k) {
    const auto& x = a.atoms[k];
    const auto& y = b.atoms[k];
    check_atom(x);
    check_atom(y);
    if (x.point.size() != y.point.size())
      throw config_error("ovm: atom points live in different spaces");
    for (std::size_t i = 0; i < x.point.size(); ++i)
      if (std::abs(x.point[i] - y.point[i]) > 1e-9)
        throw config_error("ovm: atom points do not match");
    if (x.block.rows() != y.block.rows())
      throw config_error("ovm: block dimensions differ at a matched atom");
    const double f = y.weight / x.weight;
    if ((y.block - x.block / f).cwiseAbs().maxCoeff() > 1e-10) return false;
  }
  return true;
}

}  // namespace mlsc::ovm
