#pragma once
// Deterministic matrix-valued integrands t -> n x d used in the additive
// processes M_t = int sigma(s) dL_s.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "levylab/linalg.hpp"
#include "levylab/matflow/matexp.hpp"

namespace levylab {

class MatrixIntegrand {
 public:
  MatrixIntegrand() = default;  // empty; any real use requires a factory

  static MatrixIntegrand constant(Matrix m);
  // t -> e^{-tA} sigma0
  static MatrixIntegrand matexp_factor(Matrix a, Matrix sigma0);
  // breakpoints b0=0 < b1 < ... ; value mats[i] on [b_i, b_{i+1})
  static MatrixIntegrand piecewise_constant(std::vector<double> breaks, std::vector<Matrix> mats);
  static MatrixIntegrand custom(int rows, int cols, std::function<Matrix(double)> eval,
                                std::string name);

  // r -> e^{-rA} * inner(r)
  static MatrixIntegrand modified_by(Matrix a, const MatrixIntegrand& inner);

  Matrix eval(double t) const { return eval_(t); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const std::string& name() const { return name_; }

  // sup of the operator norm over [0,T] (closed form for constants, sampled
  // on a fine grid plus breakpoints otherwise)
  double bound(double horizon) const;

 private:
  MatrixIntegrand(int rows, int cols, std::function<Matrix(double)> eval, std::string name,
                  std::vector<double> breaks = {});
  int rows_ = 0, cols_ = 0;
  std::function<Matrix(double)> eval_;
  std::string name_;
  std::vector<double> breaks_;
  bool is_constant_ = false;
};

}  // namespace levylab
