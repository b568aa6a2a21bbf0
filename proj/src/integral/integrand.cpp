#include "levylab/integral/integrand.hpp"

#include <stdexcept>
#include <utility>

namespace levylab {

MatrixIntegrand::MatrixIntegrand(int rows, int cols, std::function<Matrix(double)> eval,
                                 std::string name, std::vector<double> breaks)
    : rows_(rows), cols_(cols), eval_(std::move(eval)), name_(std::move(name)),
      breaks_(std::move(breaks)) {}

MatrixIntegrand MatrixIntegrand::constant(Matrix m) {
  int r = static_cast<int>(m.rows()), c = static_cast<int>(m.cols());
  MatrixIntegrand out(r, c, [m = std::move(m)](double) { return m; }, "constant");
  out.is_constant_ = true;
  return out;
}

MatrixIntegrand MatrixIntegrand::matexp_factor(Matrix a, Matrix sigma0) {
  if (a.rows() != sigma0.rows()) {
    throw std::invalid_argument("matexp_factor: A and sigma0 row mismatch");
  }
  auto me = std::make_shared<MatrixExp>(std::move(a));
  int r = static_cast<int>(sigma0.rows()), c = static_cast<int>(sigma0.cols());
  return MatrixIntegrand(
      r, c, [me, s0 = std::move(sigma0)](double t) { return me->at(-t) * s0; }, "matexp_factor");
}

MatrixIntegrand MatrixIntegrand::piecewise_constant(std::vector<double> breaks,
                                                    std::vector<Matrix> mats) {
  if (breaks.size() != mats.size() || breaks.empty() || breaks.front() != 0.0) {
    throw std::invalid_argument("piecewise_constant: breaks must start at 0 and match mats");
  }
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (!(breaks[i] > breaks[i - 1])) {
      throw std::invalid_argument("piecewise_constant: breaks must be sorted");
    }
  }
  int r = static_cast<int>(mats[0].rows()), c = static_cast<int>(mats[0].cols());
  auto eval = [breaks, mats](double t) {
    std::size_t i = 0;
    while (i + 1 < breaks.size() && t >= breaks[i + 1]) ++i;
    return mats[i];
  };
  return MatrixIntegrand(r, c, std::move(eval), "piecewise_constant", std::move(breaks));
}

MatrixIntegrand MatrixIntegrand::custom(int rows, int cols, std::function<Matrix(double)> eval,
                                        std::string name) {
  return MatrixIntegrand(rows, cols, std::move(eval), std::move(name));
}

MatrixIntegrand MatrixIntegrand::modified_by(Matrix a, const MatrixIntegrand& inner) {
  if (a.rows() != inner.rows()) throw std::invalid_argument("modified_by: dimension mismatch");
  auto me = std::make_shared<MatrixExp>(std::move(a));
  return MatrixIntegrand(
      inner.rows(), inner.cols(), [me, inner](double t) { return me->at(-t) * inner.eval(t); },
      "modified(" + inner.name() + ")");
}

double MatrixIntegrand::bound(double horizon) const {
  if (is_constant_) return eval_(0.0).norm();
  double best = 0;
  const int kGrid = 512;
  for (int i = 0; i <= kGrid; ++i) {
    double t = horizon * i / kGrid;
    best = std::max(best, eval_(t).norm());
  }
  for (double b : breaks_) {
    if (b <= horizon) best = std::max(best, eval_(b).norm());
  }
  return best;
}

}  // namespace levylab
