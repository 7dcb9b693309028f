#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msp/baseline.hpp"
#include "msp/estimator.hpp"
#include "msp/sampling.hpp"
#include "msp/serialization.hpp"

namespace msp {

// ---------------------------------------------------------------------------
// Synthetic data

/// Lower bound of the input eigenvalue range for the SPD-inverse task.
inline constexpr double kSpdInverseEigLo = 0.1;
inline constexpr double kSpdInverseEigHi = 10.0;

/// X = U diag(s) U^T with Haar U and s ~ Uniform[eig_lo, eig_hi]; the input is
/// X flattened row-major (p = m^2) and the output is X^{-1}.
Dataset gen_spd_inverse_dataset(int m, int n, Rng& rng, double eig_lo = kSpdInverseEigLo,
                                double eig_hi = kSpdInverseEigHi);

/// Orientation field on [0,1]^2 with unit-circle outputs (cos t, sin t).
Dataset gen_sphere_toy_dataset(int n, Rng& rng, double angle_noise = 0.05);

/// Multilabel task: outputs are eps-clipped normalized label indicators.
struct MultilabelData {
  Dataset data;
  std::vector<std::vector<bool>> labels;
};
MultilabelData gen_simplex_multilabel_dataset(int m, int n, double eps, Rng& rng,
                                              int input_dim = 6);

// ---------------------------------------------------------------------------
// Metrics

/// |ambient(pred) - ambient(truth)|^2 / D with D the ambient entry count.
double metric_frobenius_sq(const Ambient& pred, const Ambient& truth, const ManifoldTag& tag);
double metric_delta(const Ambient& pred, const Ambient& truth, const ManifoldTag& tag);
/// Angle in degrees between two points of the unit circle.
double metric_angular_degrees(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

struct LabeledPrediction {
  Eigen::VectorXd probs;
  std::vector<bool> labels;
};
/// Micro-averaged ranking AUC over every (sample, positive, negative) triple;
/// ties count one half.
double metric_auc(const std::vector<LabeledPrediction>& preds);

// ---------------------------------------------------------------------------
// Experiments

enum class Task { spd_inverse, sphere_toy, simplex_multilabel, custom_file };
Task parse_task(const std::string& s);
std::string task_name(Task t);

struct ExperimentConfig {
  Task task = Task::spd_inverse;
  int dim = 5;
  double eps = 1e-5;  // simplex
  int input_dim = 6;  // simplex task inputs
  int n_train = 200;
  int n_val = 50;
  int n_test = 50;
  int repeats = 1;
  std::vector<double> sigmas = CvGrid::logspace(0.1, 1000.0, 7);
  std::vector<double> lambdas = CvGrid::logspace(1e-6, 1.0, 7);
  RgdConfig rgd;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string data_file;  // custom_file task

  /// Switches the counts to 1000 / 100 / 100.
  void use_full_scale();
  void validate() const;
  ManifoldTag tag() const;
};

ExperimentConfig experiment_from_json(const Json& j);
Json experiment_to_json(const ExperimentConfig& cfg);

/// Train / validation / test partition of a generated or loaded pool.
struct Splits {
  Dataset train;
  Dataset val;
  Dataset test;
  std::vector<std::vector<bool>> test_labels;  // simplex task only
};
Splits make_splits(const ExperimentConfig& cfg, std::uint64_t seed);

struct MetricRow {
  std::string method;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  int n_test = 0;
  std::uint64_t seed = 0;
};

struct MethodSummary {
  std::string method;
  double seconds = 0.0;
  std::vector<CvResult> cv;  // one per repeat
  std::vector<double> repeat_delta_means;
  std::vector<double> repeat_frob_means;
  int predictions = 0;
  /// Outputs on the manifold as produced, with no projection.
  int feasible_raw = 0;
  /// Outputs on the manifold after the method's final step (projection for KRLS).
  int feasible_final = 0;
  // RGD bookkeeping (SP only).
  double mean_iterations = 0.0;
  int converged = 0;
  int line_search_failures = 0;
  int restarts = 0;
};

struct MetricsReport {
  std::vector<MetricRow> rows;
  std::vector<MethodSummary> methods;
  Json config;

  /// SP outputs all feasible without projection and every KRLS output
  /// feasible after projection.
  bool feasibility_ok() const;
  const MetricRow* find(const std::string& method, const std::string& metric) const;
  const MethodSummary* method(const std::string& name) const;

  /// Fixed header method,metric,mean,stddev,n_test,seed. Wall-clock timings
  /// live only in the JSON report.
  std::string to_csv() const;
  Json to_json() const;
};

MetricsReport run_benchmark(const ExperimentConfig& cfg);

/// Writes report.csv and report.json into `dir` (created if missing).
void write_report(const MetricsReport& report, const std::string& dir);

// ---------------------------------------------------------------------------
// Gradient check

struct GradcheckReport {
  ManifoldTag tag;
  int trials = 0;
  int evaluated = 0;
  int excluded = 0;  // near a cut locus, or a simplex point on the eps floor
  double max_rel_err = 0.0;
  double tolerance = 0.0;
  bool pass() const { return evaluated > 0 && max_rel_err <= tolerance; }
};

/// Central finite differences (h = 1e-5) of F along a retraction curve against
/// <grad F, v>_y for random points, anchors, mixed-sign weights and unit tangents.
GradcheckReport run_gradcheck(const ManifoldTag& tag, int trials, Rng& rng);

}  // namespace msp
