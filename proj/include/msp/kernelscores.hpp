#pragma once

#include <Eigen/Dense>
#include <span>

namespace msp {

/// n training inputs of dimension p, one per row.
class InputMatrix {
 public:
  InputMatrix() = default;
  explicit InputMatrix(Eigen::MatrixXd rows);

  Eigen::Index n() const { return rows_.rows(); }
  Eigen::Index p() const { return rows_.cols(); }
  const Eigen::MatrixXd& rows() const { return rows_; }
  Eigen::VectorXd row(Eigen::Index i) const { return rows_.row(i).transpose(); }

 private:
  Eigen::MatrixXd rows_;
};

/// exp(-|x - x'|^2 / (2 sigma^2)).
double gaussian_kernel(std::span<const double> x, std::span<const double> xp, double sigma);
double gaussian_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& xp, double sigma);

Eigen::MatrixXd gram_matrix(const InputMatrix& inputs, double sigma);

/// Kernel ridge scores alpha(x) = (K + n lambda I)^{-1} K_x, held as a Cholesky
/// factorization of the regularized Gram matrix.
class ScoreModel {
 public:
  const InputMatrix& train_inputs() const { return inputs_; }
  double sigma() const { return sigma_; }
  double lambda() const { return lambda_; }
  /// Diagonal jitter added on top of n * lambda to make the factorization succeed.
  double jitter() const { return jitter_; }
  Eigen::Index n() const { return inputs_.n(); }

  /// Lower-triangular L with L L^T = K + n lambda I + jitter I.
  Eigen::MatrixXd factor() const { return llt_.matrixL(); }
  /// K + n lambda I + jitter I as factored.
  const Eigen::MatrixXd& system() const { return system_; }

  /// Column of kernel values k(x_i, x).
  Eigen::VectorXd kernel_column(const Eigen::VectorXd& x) const;

  /// Solves the regularized system against one or more right-hand sides.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return llt_.solve(rhs); }

  friend ScoreModel fit_scores(const InputMatrix& x_train, double sigma, double lambda);

 private:
  InputMatrix inputs_;
  double sigma_ = 1.0;
  double lambda_ = 1.0;
  double jitter_ = 0.0;
  Eigen::MatrixXd system_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// Cholesky of K + n lambda I, escalating diagonal jitter from 0 through
/// 1e-12 n, 1e-11 n, ..., 1e-6 n. Throws IllConditioned if all attempts fail.
ScoreModel fit_scores(const InputMatrix& x_train, double sigma, double lambda);

/// alpha(x) via two triangular solves.
Eigen::VectorXd scores(const ScoreModel& model, const Eigen::VectorXd& x);

}  // namespace msp
