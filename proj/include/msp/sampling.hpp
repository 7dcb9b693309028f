#pragma once

#include <Eigen/Dense>
#include <random>

namespace msp {

/// Haar-distributed m x m orthogonal matrix: QR of a standard Gaussian matrix
/// with the signs of R's diagonal folded into Q.
Eigen::MatrixXd haar_orthogonal(int m, std::mt19937_64& rng);

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

}  // namespace msp
