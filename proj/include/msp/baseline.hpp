#pragma once

#include "msp/estimator.hpp"

namespace msp {

/// Row-major flattening of an ambient point (m^2 entries for SPD).
Eigen::VectorXd flatten(const Ambient& a);
Ambient unflatten(const Eigen::VectorXd& v, const ManifoldTag& tag);

/// Independent kernel ridge regression per flattened output coordinate, all
/// sharing one factorization of K + n lambda I.
struct KrlsModel {
  ScoreModel score_model;
  Eigen::MatrixXd weights;  // n x D
  ManifoldTag tag;
};

KrlsModel krls_train(const Dataset& data, double sigma, double lambda);

/// W^T K_x reshaped, before projection.
Ambient krls_predict_ambient(const KrlsModel& model, const Eigen::VectorXd& x);

/// Ambient prediction projected onto the manifold.
Ambient krls_predict(const KrlsModel& model, const Eigen::VectorXd& x);

/// Grid search on mean squared ambient error of the unprojected predictions.
CvResult krls_cross_validate(const Dataset& train_set, const Dataset& val_set,
                             const CvGrid& grid);

}  // namespace msp
