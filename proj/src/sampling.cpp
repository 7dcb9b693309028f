#include "msp/sampling.hpp"

#include "msp/errors.hpp"

namespace msp {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(rows, cols);
  // Fill column-major in a fixed order so that streams are reproducible.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      g(i, j) = normal(rng);
    }
  }
  return g;
}

Eigen::MatrixXd haar_orthogonal(int m, std::mt19937_64& rng) {
  if (m < 1) {
    throw ConfigError("haar_orthogonal requires m >= 1");
  }
  const Eigen::MatrixXd g = gaussian_matrix(m, m, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    if (r(j, j) < 0.0) {
      q.col(j) = -q.col(j);
    }
  }
  return q;
}

}  // namespace msp
