#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "msp/errors.hpp"
#include "msp/harness.hpp"

using namespace msp;

namespace {

ExperimentConfig tiny_config(Task task, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.task = task;
  cfg.dim = task == Task::spd_inverse ? 2 : 4;
  cfg.eps = 1e-3;
  cfg.n_train = 20;
  cfg.n_val = 8;
  cfg.n_test = 8;
  cfg.sigmas = {1.0, 10.0};
  cfg.lambdas = {1e-4, 1e-1};
  cfg.rgd.max_iters = 100;
  cfg.seed = seed;
  return cfg;
}

std::set<std::vector<double>> row_set(const Dataset& d) {
  std::set<std::vector<double>> out;
  const Eigen::MatrixXd& x = d.inputs.rows();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index j = 0; j < x.cols(); ++j) r[static_cast<std::size_t>(j)] = x(i, j);
    out.insert(r);
  }
  return out;
}

}  // namespace

TEST(Haar, Orthogonal) {
  Rng rng(1);
  for (int k = 0; k < 100; ++k) {
    const Eigen::MatrixXd q = haar_orthogonal(6, rng);
    EXPECT_LE((q.transpose() * q - Eigen::MatrixXd::Identity(6, 6)).norm(), 1e-12);
  }
}

TEST(Haar, ScalarCaseIsSign) {
  Rng rng(2);
  int pos = 0, neg = 0;
  for (int k = 0; k < 200; ++k) {
    const double q = haar_orthogonal(1, rng)(0, 0);
    ASSERT_EQ(std::abs(q), 1.0);
    (q > 0 ? pos : neg)++;
  }
  EXPECT_GT(pos, 50);
  EXPECT_GT(neg, 50);
}

TEST(Haar, FirstEntryMoments) {
  // Each column is uniform on S^2: E[q00] = 0 and E[q00^2] = 1/3.
  Rng rng(3);
  const int n = 10000;
  double s1 = 0.0, s2 = 0.0, s4 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double q = haar_orthogonal(3, rng)(0, 0);
    s1 += q;
    s2 += q * q;
    s4 += q * q * q * q;
  }
  const double mean = s1 / n;
  const double second = s2 / n;
  EXPECT_LE(std::abs(mean), 3.0 * std::sqrt(1.0 / 3.0 / n));
  // Var(q^2) = E[q^4] - 1/9 = 1/5 - 1/9.
  EXPECT_LE(std::abs(second - 1.0 / 3.0), 3.0 * std::sqrt((0.2 - 1.0 / 9.0) / n));
  EXPECT_NEAR(s4 / n, 0.2, 0.02);
}

TEST(SpdInverseData, OutputInvertsInput) {
  Rng rng(4);
  const Dataset d = gen_spd_inverse_dataset(3, 40, rng);
  EXPECT_EQ(d.tag, ManifoldTag::spd(3));
  EXPECT_EQ(d.inputs.rows().cols(), 9);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Eigen::VectorXd row = d.inputs.row(static_cast<Eigen::Index>(i));
    const Eigen::MatrixXd x = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(row.data());
    EXPECT_LE((x * d.outputs[i] - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-8);
    EXPECT_LE((x - x.transpose()).norm(), 1e-14);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(x).eigenvalues();
    EXPECT_GE(ev.minCoeff(), 0.1 - 1e-10);
    EXPECT_LE(ev.maxCoeff(), 10.0 + 1e-10);
  }
}

TEST(SpdInverseData, ScalarCase) {
  Rng rng(5);
  const Dataset d = gen_spd_inverse_dataset(1, 30, rng);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = d.inputs.rows()(static_cast<Eigen::Index>(i), 0);
    EXPECT_GE(x, 0.1);
    EXPECT_LE(x, 10.0);
    EXPECT_NEAR(d.outputs[i](0, 0), 1.0 / x, 1e-15 / x);
  }
  EXPECT_THROW(gen_spd_inverse_dataset(0, 3, rng), ConfigError);
  EXPECT_THROW(gen_spd_inverse_dataset(2, 3, rng, 1.0, 0.5), ConfigError);
}

TEST(SphereToyData, UnitOutputs) {
  Rng rng(6);
  const Dataset d = gen_sphere_toy_dataset(50, rng);
  const auto m = make_manifold(d.tag);
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_NEAR(d.outputs[i].norm(), 1.0, 1e-14);
    EXPECT_TRUE(m->contains(d.outputs[i]));
    const Eigen::VectorXd x = d.inputs.row(static_cast<Eigen::Index>(i));
    EXPECT_TRUE(x(0) >= 0.0 && x(0) <= 1.0 && x(1) >= 0.0 && x(1) <= 1.0);
  }
}

TEST(MultilabelData, OutputsMatchLabels) {
  Rng rng(7);
  const MultilabelData ml = gen_simplex_multilabel_dataset(5, 60, 1e-3, rng);
  const auto m = make_manifold(ml.data.tag);
  ASSERT_EQ(ml.labels.size(), 60u);
  for (std::size_t i = 0; i < 60; ++i) {
    const Ambient& y = ml.data.outputs[i];
    EXPECT_TRUE(m->contains(y));
    int k = 0;
    for (bool b : ml.labels[i]) k += b ? 1 : 0;
    ASSERT_GE(k, 1);
    // Positive labels carry the largest mass, negatives sit at the floor.
    for (int j = 0; j < 5; ++j) {
      if (ml.labels[i][static_cast<std::size_t>(j)]) {
        EXPECT_GT(y(j), 0.9 / k);
      } else {
        EXPECT_NEAR(y(j), 1e-3, 1e-12);
      }
    }
  }
}

TEST(Metrics, ZeroAtTruth) {
  Rng rng(8);
  for (const auto& tag : {ManifoldTag::spd(3), ManifoldTag::sphere(4), ManifoldTag::simplex(4, 1e-3)}) {
    const Ambient y = random_point(tag, rng);
    EXPECT_EQ(metric_frobenius_sq(y, y, tag), 0.0);
    EXPECT_LE(metric_delta(y, y, tag), 1e-24);
  }
}

TEST(Metrics, ScalarSpdHandValues) {
  const auto tag = ManifoldTag::spd(1);
  const Ambient e = Ambient::Constant(1, 1, std::numbers::e);
  const Ambient one = Ambient::Constant(1, 1, 1.0);
  EXPECT_NEAR(metric_frobenius_sq(e, one, tag), (std::numbers::e - 1.0) * (std::numbers::e - 1.0), 1e-15);
  EXPECT_NEAR(metric_delta(e, one, tag), 1.0, 1e-14);
  EXPECT_NEAR(metric_delta(one, e, tag), 1.0, 1e-14);
}

TEST(Metrics, FrobeniusNormalizedByEntryCount) {
  const auto tag = ManifoldTag::spd(2);
  const Ambient a = Eigen::Matrix2d::Identity();
  const Ambient b = 2.0 * Eigen::Matrix2d::Identity();
  EXPECT_DOUBLE_EQ(metric_frobenius_sq(a, b, tag), 0.5);
  EXPECT_THROW(metric_frobenius_sq(a, Ambient(Eigen::Matrix3d::Identity()), tag), DimensionMismatch);
}

TEST(Metrics, DeltaSymmetric) {
  Rng rng(9);
  for (const auto& tag : {ManifoldTag::spd(3), ManifoldTag::sphere(3), ManifoldTag::simplex(5, 1e-3)}) {
    for (int k = 0; k < 20; ++k) {
      const Ambient a = random_point(tag, rng);
      const Ambient b = random_point(tag, rng);
      const double ab = metric_delta(a, b, tag);
      EXPECT_NEAR(ab, metric_delta(b, a, tag), 1e-10 * std::max(1.0, ab)) << tag.name();
    }
  }
}

TEST(Metrics, AngularDegrees) {
  const Eigen::Vector2d e1(1, 0), e2(0, 1);
  EXPECT_EQ(metric_angular_degrees(e1, e1), 0.0);
  EXPECT_NEAR(metric_angular_degrees(e1, e2), 90.0, 1e-12);
  EXPECT_NEAR(metric_angular_degrees(e1, -e1), 180.0, 1e-12);
  const double t = 0.3;
  EXPECT_NEAR(metric_angular_degrees(e1, Eigen::Vector2d(std::cos(t), std::sin(t))), t * 180.0 / std::numbers::pi,
              1e-12);
  EXPECT_THROW(metric_angular_degrees(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(1, 0, 0)), DimensionMismatch);
}

TEST(Metrics, AucHandCases) {
  EXPECT_EQ(metric_auc({{Eigen::Vector3d(0.6, 0.3, 0.1), {true, false, false}}}), 1.0);
  EXPECT_EQ(metric_auc({{Eigen::Vector3d(0.1, 0.3, 0.6), {true, false, false}}}), 0.0);
  EXPECT_EQ(metric_auc({{Eigen::Vector3d(0.25, 0.25, 0.5), {true, true, false}},
                        {Eigen::Vector3d(1, 1, 1) / 3.0, {false, true, true}}}),
            0.25);  // two losses, then two ties
  // Three samples: wins 2, 1, 1.5 over 6 pairs.
  const std::vector<LabeledPrediction> preds{
      {Eigen::Vector3d(0.5, 0.3, 0.2), {true, false, false}},
      {Eigen::Vector3d(0.2, 0.5, 0.3), {true, true, false}},
      {Eigen::Vector3d(0.4, 0.4, 0.2), {false, true, false}}};
  EXPECT_DOUBLE_EQ(metric_auc(preds), 0.75);
}

TEST(Metrics, AucAllTiesIsHalf) {
  std::vector<LabeledPrediction> preds;
  for (int k = 0; k < 4; ++k) preds.push_back({Eigen::VectorXd::Constant(4, 0.25), {true, k % 2 == 0, false, false}});
  EXPECT_EQ(metric_auc(preds), 0.5);
}

TEST(Metrics, AucDegenerate) {
  EXPECT_THROW(metric_auc({}), ConfigError);
  EXPECT_THROW(metric_auc({{Eigen::Vector2d(0.5, 0.5), {true, true}}}), ConfigError);
  EXPECT_THROW(metric_auc({{Eigen::Vector2d(0.5, 0.5), {false, false}}}), ConfigError);
  EXPECT_THROW(metric_auc({{Eigen::Vector3d(0.5, 0.3, 0.2), {true, false}}}), DimensionMismatch);
}

TEST(Config, TaskNames) {
  for (Task t : {Task::spd_inverse, Task::sphere_toy, Task::simplex_multilabel, Task::custom_file}) {
    EXPECT_EQ(parse_task(task_name(t)), t);
  }
  EXPECT_THROW(parse_task("regression"), ConfigError);
}

TEST(Config, Validation) {
  ExperimentConfig cfg = tiny_config(Task::spd_inverse, 1);
  EXPECT_NO_THROW(cfg.validate());
  cfg.seed.reset();
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = tiny_config(Task::spd_inverse, 1);
  cfg.n_val = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = tiny_config(Task::custom_file, 1);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = tiny_config(Task::spd_inverse, 1);
  cfg.lambdas = {-1.0};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = tiny_config(Task::spd_inverse, 1);
  cfg.use_full_scale();
  EXPECT_EQ(cfg.n_train, 1000);
  EXPECT_EQ(cfg.n_val, 100);
  EXPECT_EQ(cfg.n_test, 100);
}

TEST(Config, JsonRoundTrip) {
  ExperimentConfig cfg = tiny_config(Task::simplex_multilabel, 42);
  cfg.rgd.max_iters = 33;
  const ExperimentConfig back = experiment_from_json(Json::parse(experiment_to_json(cfg).dump()));
  EXPECT_EQ(back.task, cfg.task);
  EXPECT_EQ(back.dim, cfg.dim);
  EXPECT_EQ(back.eps, cfg.eps);
  EXPECT_EQ(back.n_train, cfg.n_train);
  EXPECT_EQ(back.sigmas, cfg.sigmas);
  EXPECT_EQ(back.lambdas, cfg.lambdas);
  EXPECT_EQ(back.rgd, cfg.rgd);
  EXPECT_EQ(back.seed, cfg.seed);
  const ExperimentConfig full = experiment_from_json(Json{{"full_scale", true}, {"seed", 1}});
  EXPECT_EQ(full.n_train, 1000);
  EXPECT_THROW(experiment_from_json(Json::array()), ConfigError);
  EXPECT_THROW(experiment_from_json(Json{{"n_train", "many"}}), ConfigError);
}

TEST(Splits, DisjointAndSized) {
  for (Task t : {Task::spd_inverse, Task::sphere_toy, Task::simplex_multilabel}) {
    const ExperimentConfig cfg = tiny_config(t, 11);
    const Splits s = make_splits(cfg, 11);
    EXPECT_EQ(s.train.size(), 20u);
    EXPECT_EQ(s.val.size(), 8u);
    EXPECT_EQ(s.test.size(), 8u);
    auto a = row_set(s.train), b = row_set(s.val), c = row_set(s.test);
    const std::size_t total = a.size() + b.size() + c.size();
    a.insert(b.begin(), b.end());
    a.insert(c.begin(), c.end());
    EXPECT_EQ(a.size(), total);
    EXPECT_EQ(total, 36u);
    EXPECT_EQ(s.test_labels.size(), t == Task::simplex_multilabel ? 8u : 0u);
  }
}

TEST(Splits, SeedDeterminism) {
  const ExperimentConfig cfg = tiny_config(Task::spd_inverse, 3);
  const Splits a = make_splits(cfg, 3);
  const Splits b = make_splits(cfg, 3);
  const Splits c = make_splits(cfg, 4);
  EXPECT_EQ(a.train.inputs.rows(), b.train.inputs.rows());
  EXPECT_EQ(a.test.outputs, b.test.outputs);
  EXPECT_NE(a.train.inputs.rows(), c.train.inputs.rows());
}

TEST(Splits, CustomFileShuffledBySeed) {
  Rng rng(12);
  const Dataset pool = gen_sphere_toy_dataset(40, rng);
  const auto path = std::filesystem::temp_directory_path() / "msp_harness_custom.jsonl";
  {
    std::ofstream out(path);
    write_dataset_jsonl(out, pool);
  }
  ExperimentConfig cfg = tiny_config(Task::custom_file, 5);
  cfg.data_file = path.string();
  const Splits a = make_splits(cfg, 5);
  const Splits b = make_splits(cfg, 5);
  EXPECT_EQ(a.train.inputs.rows(), b.train.inputs.rows());
  // Every split row comes from the file.
  const auto all = row_set(pool);
  for (const auto& r : row_set(a.test)) EXPECT_TRUE(all.count(r));
  cfg.n_train = 100;
  EXPECT_THROW(make_splits(cfg, 5), ConfigError);
  std::filesystem::remove(path);
}

TEST(Benchmark, CsvFormatAndDeterminism) {
  const ExperimentConfig cfg = tiny_config(Task::spd_inverse, 21);
  const MetricsReport a = run_benchmark(cfg);
  const MetricsReport b = run_benchmark(cfg);
  const std::string csv = a.to_csv();
  EXPECT_EQ(csv, b.to_csv());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,metric,mean,stddev,n_test,seed");
  for (const char* m : {"sp", "krls"}) {
    for (const char* metric : {"frobenius_sq", "delta"}) {
      const MetricRow* r = a.find(m, metric);
      ASSERT_NE(r, nullptr) << m << " " << metric;
      EXPECT_EQ(r->n_test, 8);
      EXPECT_EQ(r->seed, 21u);
      EXPECT_TRUE(std::isfinite(r->mean));
    }
  }
  EXPECT_TRUE(a.feasibility_ok());
  const Json j = a.to_json();
  EXPECT_TRUE(j.at("feasibility_ok").get<bool>());
  EXPECT_EQ(j.at("config").at("seed"), 21);
  EXPECT_EQ(j.at("methods").size(), 2u);
}

TEST(Benchmark, TaskSpecificMetrics) {
  const MetricsReport circle = run_benchmark(tiny_config(Task::sphere_toy, 2));
  ASSERT_NE(circle.find("sp", "angular_deg"), nullptr);
  EXPECT_LE(circle.find("sp", "angular_deg")->mean, 180.0);
  const MetricsReport ml = run_benchmark(tiny_config(Task::simplex_multilabel, 2));
  ASSERT_NE(ml.find("krls", "auc"), nullptr);
  const double auc = ml.find("sp", "auc")->mean;
  EXPECT_TRUE(auc >= 0.0 && auc <= 1.0);
  EXPECT_TRUE(ml.feasibility_ok());
}

TEST(Benchmark, RepeatsUseConsecutiveSeeds) {
  ExperimentConfig cfg = tiny_config(Task::spd_inverse, 30);
  cfg.repeats = 2;
  const MetricsReport r = run_benchmark(cfg);
  ASSERT_EQ(r.method("sp")->repeat_delta_means.size(), 2u);
  EXPECT_EQ(r.find("sp", "delta")->n_test, 16);
  ExperimentConfig second = tiny_config(Task::spd_inverse, 31);
  const MetricsReport s = run_benchmark(second);
  EXPECT_NEAR(r.method("sp")->repeat_delta_means[1], s.find("sp", "delta")->mean, 1e-12);
}

TEST(Benchmark, WriteReport) {
  const MetricsReport r = run_benchmark(tiny_config(Task::spd_inverse, 7));
  const auto dir = std::filesystem::temp_directory_path() / "msp_harness_report";
  std::filesystem::remove_all(dir);
  write_report(r, dir.string());
  std::ifstream csv(dir / "report.csv");
  const std::string text((std::istreambuf_iterator<char>(csv)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text, r.to_csv());
  EXPECT_EQ(read_json_file((dir / "report.json").string()).at("rows").size(), r.rows.size());
  std::filesystem::remove_all(dir);
}

TEST(Gradcheck, PassesOnEveryGeometry) {
  Rng rng(13);
  for (const auto& tag : {ManifoldTag::euclidean(3), ManifoldTag::sphere(3), ManifoldTag::spd(3),
                          ManifoldTag::simplex(4, 1e-3)}) {
    const GradcheckReport r = run_gradcheck(tag, 30, rng);
    EXPECT_TRUE(r.pass()) << tag.name() << " " << r.max_rel_err;
    EXPECT_EQ(r.evaluated + r.excluded, 30);
  }
  EXPECT_THROW(run_gradcheck(ManifoldTag::sphere(2), 0, rng), ConfigError);
}
