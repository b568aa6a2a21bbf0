#pragma once
// Matrix exponentials e^{tA}: scaling-and-squaring with a Pade core, with an
// exact finite sum when A is nilpotent (the kinetic block matrix is, and its
// exponential should be exact).

#include <memory>
#include <mutex>
#include <unordered_map>

#include "levylab/linalg.hpp"

namespace levylab {

// Smallest m <= n with ||A^m|| below tol (entrywise), or 0 if none.
int nilpotency_order(const Matrix& a, double tol = 1e-14);

Matrix matexp(const Matrix& a, double t);

// Caches e^{tA} at requested times. Thread-safe; cached values are shared.
class MatrixExp {
 public:
  explicit MatrixExp(Matrix a);

  const Matrix& at(double t) const;
  Matrix operator()(double t) const { return at(t); }
  const Matrix& matrix() const { return a_; }
  int nilpotent_order() const { return nilpotent_order_; }

 private:
  Matrix a_;
  int nilpotent_order_;
  mutable std::mutex mu_;
  mutable std::unordered_map<double, std::unique_ptr<Matrix>> cache_;
};

}  // namespace levylab
