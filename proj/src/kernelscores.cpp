#include "msp/kernelscores.hpp"

#include <cmath>
#include <sstream>

#include "msp/errors.hpp"

namespace msp {

InputMatrix::InputMatrix(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
  if (rows_.rows() < 1) {
    throw ConfigError("input matrix needs at least one sample");
  }
  if (!rows_.allFinite()) {
    throw ConfigError("input matrix has non-finite entries");
  }
}

double gaussian_kernel(std::span<const double> x, std::span<const double> xp, double sigma) {
  if (x.size() != xp.size()) {
    throw DimensionMismatch("kernel inputs differ in dimension");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("kernel bandwidth must be positive");
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - xp[i];
    d2 += d * d;
  }
  if (!std::isfinite(d2)) {
    throw NumericalError("non-finite kernel input");
  }
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

double gaussian_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& xp, double sigma) {
  return gaussian_kernel(std::span<const double>(x.data(), x.size()),
                         std::span<const double>(xp.data(), xp.size()), sigma);
}

Eigen::MatrixXd gram_matrix(const InputMatrix& inputs, double sigma) {
  const Eigen::Index n = inputs.n();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    const Eigen::VectorXd xi = inputs.row(i);
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = gaussian_kernel(xi, inputs.row(j), sigma);
    }
  }
  return k;
}

Eigen::VectorXd ScoreModel::kernel_column(const Eigen::VectorXd& x) const {
  if (x.size() != inputs_.p()) {
    std::ostringstream msg;
    msg << "query has dimension " << x.size() << ", model expects " << inputs_.p();
    throw DimensionMismatch(msg.str());
  }
  if (!x.allFinite()) {
    throw ConfigError("query input has non-finite entries");
  }
  Eigen::VectorXd kx(inputs_.n());
  for (Eigen::Index i = 0; i < inputs_.n(); ++i) {
    kx(i) = gaussian_kernel(inputs_.row(i), x, sigma_);
  }
  return kx;
}

ScoreModel fit_scores(const InputMatrix& x_train, double sigma, double lambda) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("sigma must be positive");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be positive");
  }
  ScoreModel model;
  model.inputs_ = x_train;
  model.sigma_ = sigma;
  model.lambda_ = lambda;

  const Eigen::Index n = x_train.n();
  const double dn = static_cast<double>(n);
  Eigen::MatrixXd base = gram_matrix(x_train, sigma);
  base.diagonal().array() += dn * lambda;

  double jitter = 0.0;
  for (int attempt = 0;; ++attempt) {
    model.system_ = base;
    model.system_.diagonal().array() += jitter;
    model.llt_.compute(model.system_);
    if (model.llt_.info() == Eigen::Success) {
      model.jitter_ = jitter;
      return model;
    }
    if (jitter >= 1e-6 * dn * (1.0 - 1e-9)) {
      std::ostringstream msg;
      msg << "Cholesky factorization failed; last jitter tried " << jitter;
      throw IllConditioned(msg.str(), jitter);
    }
    jitter = attempt == 0 ? 1e-12 * dn : jitter * 10.0;
  }
}

Eigen::VectorXd scores(const ScoreModel& model, const Eigen::VectorXd& x) {
  return model.solve(model.kernel_column(x));
}

}  // namespace msp
