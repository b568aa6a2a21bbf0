#include "levylab/matflow/matexp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace levylab {
namespace {

// Pade approximants of orders 3,5,7,9,13 with the usual 1-norm thresholds
// (Higham, "The scaling and squaring method for the matrix exponential
// revisited").
const double kTheta3 = 1.495585217958292e-2;
const double kTheta5 = 2.539398330063230e-1;
const double kTheta7 = 9.504178996162932e-1;
const double kTheta9 = 2.097847961257068e0;
const double kTheta13 = 5.371920351148152e0;

Matrix pade_solve(const Matrix& u, const Matrix& v) {
  // r = (v - u)^{-1} (v + u)
  return (v - u).lu().solve(v + u);
}

Matrix pade3(const Matrix& a, const Matrix& a2) {
  const double b[] = {120, 60, 12, 1};
  Matrix i = Matrix::Identity(a.rows(), a.cols());
  Matrix u = a * (b[3] * a2 + b[1] * i);
  Matrix v = b[2] * a2 + b[0] * i;
  return pade_solve(u, v);
}

Matrix pade5(const Matrix& a, const Matrix& a2) {
  const double b[] = {30240, 15120, 3360, 420, 30, 1};
  Matrix i = Matrix::Identity(a.rows(), a.cols());
  Matrix a4 = a2 * a2;
  Matrix u = a * (b[5] * a4 + b[3] * a2 + b[1] * i);
  Matrix v = b[4] * a4 + b[2] * a2 + b[0] * i;
  return pade_solve(u, v);
}

Matrix pade7(const Matrix& a, const Matrix& a2) {
  const double b[] = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1};
  Matrix i = Matrix::Identity(a.rows(), a.cols());
  Matrix a4 = a2 * a2;
  Matrix a6 = a4 * a2;
  Matrix u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * i);
  Matrix v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
  return pade_solve(u, v);
}

Matrix pade9(const Matrix& a, const Matrix& a2) {
  const double b[] = {17643225600, 8821612800, 2075673600, 302702400, 30270240,
                      2162160,     110880,     3960,       90,        1};
  Matrix i = Matrix::Identity(a.rows(), a.cols());
  Matrix a4 = a2 * a2;
  Matrix a6 = a4 * a2;
  Matrix a8 = a6 * a2;
  Matrix u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * i);
  Matrix v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * i;
  return pade_solve(u, v);
}

Matrix pade13(const Matrix& a, const Matrix& a2) {
  const double b[] = {64764752532480000.0,
                      32382376266240000.0,
                      7771770303897600.0,
                      1187353796428800.0,
                      129060195264000.0,
                      10559470521600.0,
                      670442572800.0,
                      33522128640.0,
                      1323241920.0,
                      40840800.0,
                      960960.0,
                      16380.0,
                      182.0,
                      1.0};
  Matrix i = Matrix::Identity(a.rows(), a.cols());
  Matrix a4 = a2 * a2;
  Matrix a6 = a4 * a2;
  Matrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                  b[3] * a2 + b[1] * i);
  Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
             b[0] * i;
  return pade_solve(u, v);
}

Matrix expm_dense(const Matrix& a) {
  double nrm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  Matrix a2 = a * a;
  if (nrm <= kTheta3) return pade3(a, a2);
  if (nrm <= kTheta5) return pade5(a, a2);
  if (nrm <= kTheta7) return pade7(a, a2);
  if (nrm <= kTheta9) return pade9(a, a2);

  int s = 0;
  if (nrm > kTheta13) {
    s = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  }
  double scale = std::ldexp(1.0, -s);
  Matrix as = a * scale;
  Matrix r = pade13(as, Matrix(as * as));
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

}  // namespace

int nilpotency_order(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("nilpotency_order: square matrix required");
  const int n = static_cast<int>(a.rows());
  Matrix p = a;
  for (int m = 1; m <= n; ++m) {
    if (p.cwiseAbs().maxCoeff() <= tol) return m;
    p = p * a;
  }
  return 0;
}

Matrix matexp(const Matrix& a, double t) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matexp: square matrix required");
  if (!a.allFinite() || !std::isfinite(t)) throw std::invalid_argument("matexp: non-finite input");
  const int n = static_cast<int>(a.rows());
  if (t == 0.0) return Matrix::Identity(n, n);

  int nilp = nilpotency_order(a);
  if (nilp > 0) {
    // finite series sum_{k<m} (tA)^k / k!, exact up to rounding
    Matrix r = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k < nilp; ++k) {
      term = term * a * (t / k);
      r += term;
    }
    return r;
  }

  double nrm = (t * a).cwiseAbs().colwise().sum().maxCoeff();
  if (nrm > 1e4) {
    throw std::overflow_error("matexp: ||tA||_1 = " + std::to_string(nrm) +
                              " too large for reliable evaluation");
  }
  Matrix r = expm_dense(t * a);
  if (!r.allFinite()) {
    throw std::overflow_error("matexp: overflow, ||tA||_1 = " + std::to_string(nrm));
  }
  return r;
}

MatrixExp::MatrixExp(Matrix a) : a_(std::move(a)), nilpotent_order_(nilpotency_order(a_)) {}

const Matrix& MatrixExp::at(double t) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(t);
  if (it != cache_.end()) return *it->second;
  auto m = std::make_unique<Matrix>(matexp(a_, t));
  const Matrix& ref = *m;
  cache_.emplace(t, std::move(m));
  return ref;
}

}  // namespace levylab
