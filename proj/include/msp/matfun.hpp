#pragma once

#include <Eigen/Dense>

namespace msp {

/// Smallest eigenvalue accepted as positive on the sqrt / inv_sqrt / log paths.
inline constexpr double kEigenFloor = 1e-12;

/// Dense symmetric matrix. Every construction symmetrizes its input as
/// (A + A^T) / 2, so the stored values are exactly symmetric.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(const Eigen::MatrixXd& a);

  static SymMat identity(Eigen::Index m);
  static SymMat diagonal(const Eigen::VectorXd& d);

  Eigen::Index dim() const { return values_.rows(); }
  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

 private:
  Eigen::MatrixXd values_;
};

/// Spectral form A = Q diag(eigvals) Q^T with eigenvalues sorted descending.
struct EigPair {
  Eigen::MatrixXd eigvecs;
  Eigen::VectorXd eigvals;

  Eigen::MatrixXd reconstruct() const;
};

EigPair sym_eig(const SymMat& a);

enum class SpectralFn { sqrt, inv_sqrt, log, exp };

/// Q f(Lambda) Q^T. Throws NotPositiveDefinite for sqrt / inv_sqrt / log when
/// an eigenvalue is <= kEigenFloor.
SymMat spd_fn(const SymMat& a, SpectralFn f);

/// Applies f to an existing decomposition.
SymMat spd_fn(const EigPair& eig, SpectralFn f);

/// Eigenvalues only, descending.
Eigen::VectorXd sym_eigvals(const SymMat& a);

}  // namespace msp
