#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <vector>

#include "msp/kernelscores.hpp"
#include "msp/manifolds.hpp"
#include "msp/rgd.hpp"

namespace msp {

/// Paired inputs and manifold-valued outputs.
struct Dataset {
  InputMatrix inputs;
  std::vector<Ambient> outputs;
  ManifoldTag tag;

  std::size_t size() const { return outputs.size(); }
  /// Throws unless len(outputs) == n and every output satisfies its invariants.
  void validate() const;
  /// Rows picked by index, in the given order.
  Dataset subset(const std::vector<std::size_t>& idx) const;
};

struct Prediction {
  Ambient point;
  RgdTrace trace;
};

/// The structured estimator: kernel ridge scores over the training inputs and
/// an RGD solve of argmin_y sum_i alpha_i(x) loss(y, y_i) per query.
class PredictorModel {
 public:
  PredictorModel(ScoreModel scores, std::vector<Ambient> outputs, ManifoldTag tag,
                 RgdConfig rgd);

  const ScoreModel& score_model() const { return scores_; }
  const std::vector<Ambient>& train_outputs() const { return anchors_.points; }
  const ManifoldTag& tag() const { return tag_; }
  const RgdConfig& rgd() const { return rgd_; }
  const Manifold& manifold() const { return *manifold_; }

  /// RGD initialized at the training output with the largest score (ties go
  /// to the lowest index). The restart seed feeds the perturbation retry.
  Prediction predict_traced(const Eigen::VectorXd& x, std::uint64_t restart_seed = 0) const;
  Ambient predict(const Eigen::VectorXd& x) const { return predict_traced(x).point; }

  /// Predicts every row of `xs`; slot i always holds the prediction for row i.
  std::vector<Prediction> predict_batch(const Eigen::MatrixXd& xs) const;

 private:
  ScoreModel scores_;
  ManifoldTag tag_;
  RgdConfig rgd_;
  std::shared_ptr<const Manifold> manifold_;
  AnchorSet anchors_;
};

PredictorModel train(const Dataset& data, double sigma, double lambda, const RgdConfig& rgd);

inline Ambient predict(const PredictorModel& model, const Eigen::VectorXd& x) {
  return model.predict(x);
}

struct CvGrid {
  std::vector<double> sigmas;
  std::vector<double> lambdas;
  /// Used by the randomized split only.
  double val_fraction = 0.2;

  void validate() const;
  /// `count` log-spaced values from lo to hi inclusive.
  static std::vector<double> logspace(double lo, double hi, int count);
};

struct CvCell {
  double sigma = 0.0;
  double lambda = 0.0;
  /// Mean validation loss; +inf when training or prediction failed.
  double val_loss = std::numeric_limits<double>::infinity();
};

struct CvResult {
  double best_sigma = 0.0;
  double best_lambda = 0.0;
  std::vector<CvCell> table;  // sigma-major, in grid order
};

/// Picks the cell with the smallest loss, ties going to the smaller lambda and
/// then the smaller sigma.
CvResult select_best(std::vector<CvCell> table);

/// Held-out split evaluation of every (sigma, lambda) pair on mean manifold loss.
CvResult cross_validate(const Dataset& train_set, const Dataset& val_set, const CvGrid& grid,
                        const RgdConfig& rgd);

/// Randomized single split of `data` by grid.val_fraction.
CvResult cross_validate(const Dataset& data, const CvGrid& grid, const RgdConfig& rgd, Rng& rng);

/// Runs fn(i) for i in [0, n) over a small thread pool.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace msp
