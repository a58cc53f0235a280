#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

// Finitely-atomic operator-valued measures: a positive weight and an operator
// block at each point of a declared space.  The scalar part (the weights) and
// the blocks are only determined jointly: rescaling an atom by (f, 1/f) with
// f > 0 gives the same measure, so every operation here is a class invariant.

namespace mlsc::ovm {

struct OvmAtom {
  std::vector<double> point;
  double weight = 1.0;
  Eigen::MatrixXcd block;
  // set by normalize() when no trace-1 representative with positive weight
  // exists (trace zero, negative, or non-real)
  bool non_normalizable = false;
};

struct OperatorValuedMeasure {
  std::string space;  // descriptor of Z; informational
  std::vector<OvmAtom> atoms;
};

// sum_k w_k tr|block_k|, trace norm via singular values
double mov_norm(const OperatorValuedMeasure& m);

// rescale each atom so its block has unit trace, weights absorbing the factor;
// atoms whose trace is not a positive real are flagged and left untouched
OperatorValuedMeasure normalize(const OperatorValuedMeasure& m);

// sum_k w_k tr(symbol_k block_k); one symbol matrix per atom, matching sizes
std::complex<double> pair(const std::vector<Eigen::MatrixXcd>& symbol,
                          const OperatorValuedMeasure& m);

// every block Hermitian (to 1e-10) with min eigenvalue >= -1e-10
bool is_positive(const OperatorValuedMeasure& m);

// same points in the same order, blocks equal after the (f, 1/f) rescale
// dictated by the weight ratio; structural mismatch is a config error
bool equivalent(const OperatorValuedMeasure& a, const OperatorValuedMeasure& b);

}  // namespace mlsc::ovm
