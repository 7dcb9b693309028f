#include "msp/matfun.hpp"

#include <cmath>
#include <sstream>

#include "msp/errors.hpp"

namespace msp {

SymMat::SymMat(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw DimensionMismatch("SymMat requires a non-empty square matrix");
  }
  values_ = 0.5 * (a + a.transpose());
}

SymMat SymMat::identity(Eigen::Index m) {
  return SymMat(Eigen::MatrixXd::Identity(m, m));
}

SymMat SymMat::diagonal(const Eigen::VectorXd& d) {
  return SymMat(Eigen::MatrixXd(d.asDiagonal()));
}

Eigen::MatrixXd EigPair::reconstruct() const {
  return eigvecs * eigvals.asDiagonal() * eigvecs.transpose();
}

EigPair sym_eig(const SymMat& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.values());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  // Eigen returns ascending order.
  EigPair out;
  out.eigvals = solver.eigenvalues().reverse();
  out.eigvecs = solver.eigenvectors().rowwise().reverse();
  return out;
}

Eigen::VectorXd sym_eigvals(const SymMat& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.values(),
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolver did not converge");
  }
  return solver.eigenvalues().reverse();
}

namespace {

double apply(SpectralFn f, double x) {
  switch (f) {
    case SpectralFn::sqrt:
      return std::sqrt(x);
    case SpectralFn::inv_sqrt:
      return 1.0 / std::sqrt(x);
    case SpectralFn::log:
      return std::log(x);
    case SpectralFn::exp:
      return std::exp(x);
  }
  return x;
}

const char* name(SpectralFn f) {
  switch (f) {
    case SpectralFn::sqrt:
      return "sqrt";
    case SpectralFn::inv_sqrt:
      return "inv_sqrt";
    case SpectralFn::log:
      return "log";
    case SpectralFn::exp:
      return "exp";
  }
  return "?";
}

}  // namespace

SymMat spd_fn(const EigPair& eig, SpectralFn f) {
  if (f != SpectralFn::exp) {
    const double smallest = eig.eigvals.minCoeff();
    if (!(smallest > kEigenFloor)) {
      std::ostringstream msg;
      msg << "matrix " << name(f) << " requires a positive-definite input; "
          << "smallest eigenvalue is " << smallest;
      throw NotPositiveDefinite(msg.str(), smallest);
    }
  }
  Eigen::VectorXd mapped = eig.eigvals.unaryExpr([f](double x) { return apply(f, x); });
  return SymMat(eig.eigvecs * mapped.asDiagonal() * eig.eigvecs.transpose());
}

SymMat spd_fn(const SymMat& a, SpectralFn f) { return spd_fn(sym_eig(a), f); }

}  // namespace msp
