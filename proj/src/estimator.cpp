#include "msp/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "msp/errors.hpp"

namespace msp {

void Dataset::validate() const {
  tag.validate();
  if (static_cast<Eigen::Index>(outputs.size()) != inputs.n()) {
    throw ConfigError("dataset has mismatched input and output counts");
  }
  const auto m = make_manifold(tag);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    try {
      m->check_point(outputs[i]);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "output " << i << " is not on the " << tag.name() << " manifold: " << e.what();
      throw ConfigError(msg.str());
    }
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& idx) const {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(idx.size()), inputs.p());
  std::vector<Ambient> outs;
  outs.reserve(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    rows.row(static_cast<Eigen::Index>(k)) = inputs.rows().row(static_cast<Eigen::Index>(idx[k]));
    outs.push_back(outputs.at(idx[k]));
  }
  return Dataset{InputMatrix(std::move(rows)), std::move(outs), tag};
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = n;
  std::exception_ptr err;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        // Report the lowest failing index so errors are reproducible.
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

PredictorModel::PredictorModel(ScoreModel scores, std::vector<Ambient> outputs, ManifoldTag tag,
                               RgdConfig rgd)
    : scores_(std::move(scores)), tag_(tag), rgd_(rgd), manifold_(make_manifold(tag)) {
  rgd_.validate();
  if (static_cast<Eigen::Index>(outputs.size()) != scores_.n()) {
    throw ConfigError("training outputs do not match the score model size");
  }
  for (const auto& y : outputs) manifold_->check_point(y);
  anchors_ = manifold_->prepare(std::move(outputs));
}

Prediction PredictorModel::predict_traced(const Eigen::VectorXd& x,
                                          std::uint64_t restart_seed) const {
  const Eigen::VectorXd alpha = scores(scores_, x);
  Eigen::Index top = 0;
  // Scores equal up to solver rounding count as tied, so duplicated inputs
  // still start from the lowest index.
  const double tie_tol = 1e-12 * alpha.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 1; i < alpha.size(); ++i) {
    if (alpha(i) > alpha(top) + tie_tol) top = i;
  }
  Rng rng(restart_seed);
  RgdResult r = minimize(*manifold_, anchors_, std::span<const double>(alpha.data(), alpha.size()),
                         anchors_.points[static_cast<std::size_t>(top)], rgd_, &rng);
  return {std::move(r.point), std::move(r.trace)};
}

std::vector<Prediction> PredictorModel::predict_batch(const Eigen::MatrixXd& xs) const {
  std::vector<Prediction> out(static_cast<std::size_t>(xs.rows()));
  parallel_for(out.size(), [&](std::size_t i) {
    out[i] = predict_traced(xs.row(static_cast<Eigen::Index>(i)).transpose(), i);
  });
  return out;
}

PredictorModel train(const Dataset& data, double sigma, double lambda, const RgdConfig& rgd) {
  data.validate();
  return PredictorModel(fit_scores(data.inputs, sigma, lambda), data.outputs, data.tag, rgd);
}

void CvGrid::validate() const {
  if (sigmas.empty() || lambdas.empty()) {
    throw ConfigError("cross-validation grid must be nonempty");
  }
  for (double s : sigmas) {
    if (!(s > 0.0)) throw ConfigError("grid sigma values must be positive");
  }
  for (double l : lambdas) {
    if (!(l > 0.0)) throw ConfigError("grid lambda values must be positive");
  }
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw ConfigError("val_fraction must lie in (0, 1)");
  }
}

std::vector<double> CvGrid::logspace(double lo, double hi, int count) {
  if (count < 1 || !(lo > 0.0) || !(hi > 0.0)) {
    throw ConfigError("logspace needs positive bounds and count");
  }
  std::vector<double> v(static_cast<std::size_t>(count));
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    v[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (count - 1));
  }
  return v;
}

CvResult select_best(std::vector<CvCell> table) {
  if (table.empty()) throw ConfigError("empty cross-validation table");
  const CvCell* best = &table.front();
  for (const auto& c : table) {
    const bool better =
        c.val_loss < best->val_loss ||
        (c.val_loss == best->val_loss &&
         (c.lambda < best->lambda || (c.lambda == best->lambda && c.sigma < best->sigma)));
    if (better) best = &c;
  }
  CvResult r;
  r.best_sigma = best->sigma;
  r.best_lambda = best->lambda;
  r.table = std::move(table);
  return r;
}

CvResult cross_validate(const Dataset& train_set, const Dataset& val_set, const CvGrid& grid,
                        const RgdConfig& rgd) {
  grid.validate();
  if (train_set.size() == 0 || val_set.size() == 0) {
    throw ConfigError("cross-validation split is empty");
  }
  train_set.validate();
  val_set.validate();
  std::vector<CvCell> table;
  for (double s : grid.sigmas) {
    for (double l : grid.lambdas) table.push_back({s, l, 0.0});
  }
  const auto manifold = make_manifold(train_set.tag);
  for (auto& cell : table) {
    try {
      const PredictorModel model = train(train_set, cell.sigma, cell.lambda, rgd);
      const auto preds = model.predict_batch(val_set.inputs.rows());
      double sum = 0.0;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        sum += manifold->loss(preds[i].point, val_set.outputs[i]);
      }
      cell.val_loss = sum / static_cast<double>(preds.size());
      if (!std::isfinite(cell.val_loss)) {
        cell.val_loss = std::numeric_limits<double>::infinity();
      }
    } catch (const NumericalError&) {
      cell.val_loss = std::numeric_limits<double>::infinity();
    }
  }
  return select_best(std::move(table));
}

CvResult cross_validate(const Dataset& data, const CvGrid& grid, const RgdConfig& rgd, Rng& rng) {
  grid.validate();
  const std::size_t n = data.size();
  const auto n_val = static_cast<std::size_t>(std::llround(grid.val_fraction * static_cast<double>(n)));
  if (n_val == 0 || n_val >= n) {
    throw ConfigError("dataset too small for the requested validation split");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  const std::vector<std::size_t> val(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  const std::vector<std::size_t> tr(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  return cross_validate(data.subset(tr), data.subset(val), grid, rgd);
}

}  // namespace msp
