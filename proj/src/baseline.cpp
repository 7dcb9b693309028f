#include "msp/baseline.hpp"

#include <cmath>

#include "msp/errors.hpp"

namespace msp {

Eigen::VectorXd flatten(const Ambient& a) {
  Eigen::VectorXd v(a.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(k++) = a(i, j);
  }
  return v;
}

Ambient unflatten(const Eigen::VectorXd& v, const ManifoldTag& tag) {
  if (v.size() != tag.ambient_size()) {
    throw DimensionMismatch("flattened vector does not match the manifold's ambient size");
  }
  Ambient a(tag.ambient_rows(), tag.ambient_cols());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = v(k++);
  }
  return a;
}

KrlsModel krls_train(const Dataset& data, double sigma, double lambda) {
  data.validate();
  KrlsModel model{fit_scores(data.inputs, sigma, lambda), {}, data.tag};
  Eigen::MatrixXd targets(static_cast<Eigen::Index>(data.size()), data.tag.ambient_size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    targets.row(static_cast<Eigen::Index>(i)) = flatten(data.outputs[i]).transpose();
  }
  model.weights = model.score_model.solve(targets);
  return model;
}

Ambient krls_predict_ambient(const KrlsModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd kx = model.score_model.kernel_column(x);
  return unflatten(model.weights.transpose() * kx, model.tag);
}

Ambient krls_predict(const KrlsModel& model, const Eigen::VectorXd& x) {
  return project_ambient(model.tag, krls_predict_ambient(model, x));
}

CvResult krls_cross_validate(const Dataset& train_set, const Dataset& val_set,
                             const CvGrid& grid) {
  grid.validate();
  if (train_set.size() == 0 || val_set.size() == 0) {
    throw ConfigError("cross-validation split is empty");
  }
  std::vector<CvCell> table;
  for (double s : grid.sigmas) {
    for (double l : grid.lambdas) {
      CvCell cell{s, l, 0.0};
      try {
        const KrlsModel model = krls_train(train_set, s, l);
        double sum = 0.0;
        for (std::size_t i = 0; i < val_set.size(); ++i) {
          const Ambient pred =
              krls_predict_ambient(model, val_set.inputs.row(static_cast<Eigen::Index>(i)));
          sum += (pred - val_set.outputs[i]).squaredNorm();
        }
        cell.val_loss = sum / static_cast<double>(val_set.size());
        if (!std::isfinite(cell.val_loss)) {
          cell.val_loss = std::numeric_limits<double>::infinity();
        }
      } catch (const NumericalError&) {
        cell.val_loss = std::numeric_limits<double>::infinity();
      }
      table.push_back(cell);
    }
  }
  return select_best(std::move(table));
}

}  // namespace msp
