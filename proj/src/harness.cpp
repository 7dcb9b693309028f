#include "msp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "msp/errors.hpp"

namespace msp {

// ---------------------------------------------------------------------------
// Synthetic data

Dataset gen_spd_inverse_dataset(int m, int n, Rng& rng, double eig_lo, double eig_hi) {
  if (m < 1 || n < 1) throw ConfigError("spd_inverse needs m >= 1 and n >= 1");
  if (!(eig_lo > 0.0) || !(eig_hi > eig_lo)) throw ConfigError("bad eigenvalue range");
  const ManifoldTag tag = ManifoldTag::spd(m);
  std::uniform_real_distribution<double> unif(eig_lo, eig_hi);
  Eigen::MatrixXd inputs(n, m * m);
  std::vector<Ambient> outputs;
  outputs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd u = haar_orthogonal(m, rng);
    Eigen::VectorXd s(m);
    for (int k = 0; k < m; ++k) s(k) = unif(rng);
    const SymMat x(u * s.asDiagonal() * u.transpose());
    const SymMat x_inv(u * s.cwiseInverse().asDiagonal() * u.transpose());
    inputs.row(i) = flatten(x.values()).transpose();
    outputs.push_back(x_inv.values());
  }
  return Dataset{InputMatrix(std::move(inputs)), std::move(outputs), tag};
}

Dataset gen_sphere_toy_dataset(int n, Rng& rng, double angle_noise) {
  if (n < 1) throw ConfigError("sphere_toy needs n >= 1");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, angle_noise);
  constexpr double pi = std::numbers::pi;
  Eigen::MatrixXd inputs(n, 2);
  std::vector<Ambient> outputs;
  for (int i = 0; i < n; ++i) {
    const double a = unif(rng);
    const double b = unif(rng);
    // Smooth orientation field that wraps around the circle.
    const double theta = 2.0 * pi * b + 0.8 * std::sin(2.0 * pi * a) + noise(rng);
    inputs(i, 0) = a;
    inputs(i, 1) = b;
    Eigen::VectorXd y(2);
    y << std::cos(theta), std::sin(theta);
    outputs.push_back(y);
  }
  return Dataset{InputMatrix(std::move(inputs)), std::move(outputs), ManifoldTag::sphere(2)};
}

MultilabelData gen_simplex_multilabel_dataset(int m, int n, double eps, Rng& rng, int input_dim) {
  const ManifoldTag tag = ManifoldTag::simplex(m, eps);
  tag.validate();
  if (n < 1 || input_dim < 1) throw ConfigError("simplex_multilabel needs n, input_dim >= 1");
  const Eigen::MatrixXd hidden = gaussian_matrix(m, input_dim, rng);
  const Eigen::MatrixXd mix = gaussian_matrix(m, m, rng);
  const auto manifold = make_manifold(tag);
  MultilabelData out;
  Eigen::MatrixXd inputs = gaussian_matrix(input_dim, n, rng).transpose();
  std::vector<Ambient> outputs;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd h = (hidden * inputs.row(i).transpose()).array().tanh().matrix();
    const Eigen::VectorXd s = mix * h;
    const Eigen::Index top = std::distance(s.data(), std::max_element(s.data(), s.data() + m));
    // Labels: the top score plus anything within one unit of it.
    std::vector<bool> labels(static_cast<std::size_t>(m), false);
    Eigen::VectorXd hist = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < m; ++j) {
      if (j == top || s(j) > s(top) - 1.0) {
        labels[static_cast<std::size_t>(j)] = true;
        hist(j) = 1.0;
      }
    }
    outputs.push_back(manifold->project(hist / hist.sum()));
    out.labels.push_back(std::move(labels));
  }
  out.data = Dataset{InputMatrix(std::move(inputs)), std::move(outputs), tag};
  return out;
}

// ---------------------------------------------------------------------------
// Metrics

double metric_frobenius_sq(const Ambient& pred, const Ambient& truth, const ManifoldTag& tag) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols() ||
      pred.size() != tag.ambient_size()) {
    throw DimensionMismatch("metric arguments differ in shape");
  }
  return (pred - truth).squaredNorm() / static_cast<double>(tag.ambient_size());
}

double metric_delta(const Ambient& pred, const Ambient& truth, const ManifoldTag& tag) {
  return loss(tag, pred, truth);
}

double metric_angular_degrees(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
  if (pred.size() != 2 || truth.size() != 2) {
    throw DimensionMismatch("angular error is defined on the unit circle");
  }
  return unit_angle(pred, truth) * 180.0 / std::numbers::pi;
}

double metric_auc(const std::vector<LabeledPrediction>& preds) {
  double wins = 0.0;
  double pairs = 0.0;
  for (const auto& p : preds) {
    if (static_cast<std::size_t>(p.probs.size()) != p.labels.size() || p.labels.empty()) {
      throw DimensionMismatch("prediction and label set differ in size");
    }
    for (std::size_t a = 0; a < p.labels.size(); ++a) {
      if (!p.labels[a]) continue;
      for (std::size_t b = 0; b < p.labels.size(); ++b) {
        if (p.labels[b]) continue;
        const double pa = p.probs(static_cast<Eigen::Index>(a));
        const double pb = p.probs(static_cast<Eigen::Index>(b));
        wins += pa > pb ? 1.0 : (pa == pb ? 0.5 : 0.0);
        pairs += 1.0;
      }
    }
  }
  if (pairs == 0.0) {
    throw ConfigError("AUC needs at least one positive and one negative label");
  }
  return wins / pairs;
}

// ---------------------------------------------------------------------------
// Configuration

Task parse_task(const std::string& s) {
  if (s == "spd_inverse") return Task::spd_inverse;
  if (s == "sphere_toy") return Task::sphere_toy;
  if (s == "simplex_multilabel") return Task::simplex_multilabel;
  if (s == "custom_file") return Task::custom_file;
  throw ConfigError("unknown task '" + s + "'");
}

std::string task_name(Task t) {
  switch (t) {
    case Task::spd_inverse:
      return "spd_inverse";
    case Task::sphere_toy:
      return "sphere_toy";
    case Task::simplex_multilabel:
      return "simplex_multilabel";
    case Task::custom_file:
      return "custom_file";
  }
  return "unknown";
}

void ExperimentConfig::use_full_scale() {
  n_train = 1000;
  n_val = 100;
  n_test = 100;
}

void ExperimentConfig::validate() const {
  if (!seed) throw ConfigError("experiment seed is mandatory");
  if (n_train < 1 || n_val < 1 || n_test < 1) throw ConfigError("split sizes must be positive");
  if (repeats < 1) throw ConfigError("repeats must be positive");
  if (task == Task::custom_file && data_file.empty()) {
    throw ConfigError("custom_file task needs data_file");
  }
  CvGrid{sigmas, lambdas, 0.2}.validate();
  rgd.validate();
  if (task != Task::custom_file) tag().validate();
}

ManifoldTag ExperimentConfig::tag() const {
  switch (task) {
    case Task::spd_inverse:
      return ManifoldTag::spd(dim);
    case Task::sphere_toy:
      return ManifoldTag::sphere(2);
    case Task::simplex_multilabel:
      return ManifoldTag::simplex(dim, eps);
    case Task::custom_file:
      break;
  }
  throw ConfigError("custom_file tag comes from the data file");
}

ExperimentConfig experiment_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  try {
    if (j.contains("task")) cfg.task = parse_task(j.at("task").get<std::string>());
    cfg.dim = j.value("dim", cfg.dim);
    cfg.eps = j.value("eps", cfg.eps);
    cfg.input_dim = j.value("input_dim", cfg.input_dim);
    if (j.value("full_scale", false)) cfg.use_full_scale();
    cfg.n_train = j.value("n_train", cfg.n_train);
    cfg.n_val = j.value("n_val", cfg.n_val);
    cfg.n_test = j.value("n_test", cfg.n_test);
    cfg.repeats = j.value("repeats", cfg.repeats);
    if (j.contains("sigmas")) cfg.sigmas = j.at("sigmas").get<std::vector<double>>();
    if (j.contains("lambdas")) cfg.lambdas = j.at("lambdas").get<std::vector<double>>();
    if (j.contains("rgd")) cfg.rgd = rgd_from_json(j.at("rgd"));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.data_file = j.value("data_file", cfg.data_file);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
  return cfg;
}

Json experiment_to_json(const ExperimentConfig& cfg) {
  Json j{{"task", task_name(cfg.task)},
         {"dim", cfg.dim},
         {"n_train", cfg.n_train},
         {"n_val", cfg.n_val},
         {"n_test", cfg.n_test},
         {"repeats", cfg.repeats},
         {"sigmas", cfg.sigmas},
         {"lambdas", cfg.lambdas},
         {"rgd", rgd_to_json(cfg.rgd)}};
  if (cfg.seed) j["seed"] = *cfg.seed;
  if (cfg.task == Task::simplex_multilabel) {
    j["eps"] = cfg.eps;
    j["input_dim"] = cfg.input_dim;
  }
  if (cfg.task == Task::spd_inverse) {
    j["input_eigenvalue_range"] = {kSpdInverseEigLo, kSpdInverseEigHi};
  }
  if (!cfg.data_file.empty()) j["data_file"] = cfg.data_file;
  return j;
}

// ---------------------------------------------------------------------------
// Benchmark

namespace {

std::vector<std::size_t> index_range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> v(end - begin);
  std::iota(v.begin(), v.end(), begin);
  return v;
}

Dataset load_custom(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return read_orientation_csv(in);
  }
  return read_dataset_jsonl(in);
}

struct Stats {
  double mean = 0.0;
  double stddev = 0.0;
};

Stats stats_of(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.stddev = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

Json cv_to_json(const CvResult& cv) {
  Json table = Json::array();
  for (const auto& c : cv.table) {
    table.push_back({{"sigma", c.sigma},
                     {"lambda", c.lambda},
                     {"val_loss", std::isfinite(c.val_loss) ? Json(c.val_loss) : Json(nullptr)}});
  }
  return {{"best_sigma", cv.best_sigma}, {"best_lambda", cv.best_lambda}, {"table", table}};
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

Splits make_splits(const ExperimentConfig& cfg, std::uint64_t seed) {
  const auto n_tr = static_cast<std::size_t>(cfg.n_train);
  const auto n_va = static_cast<std::size_t>(cfg.n_val);
  const auto n_te = static_cast<std::size_t>(cfg.n_test);
  const std::size_t total = n_tr + n_va + n_te;
  Rng rng(seed);
  Dataset pool;
  std::vector<std::vector<bool>> labels;
  std::vector<std::size_t> order;
  switch (cfg.task) {
    case Task::spd_inverse:
      pool = gen_spd_inverse_dataset(cfg.dim, static_cast<int>(total), rng);
      break;
    case Task::sphere_toy:
      pool = gen_sphere_toy_dataset(static_cast<int>(total), rng);
      break;
    case Task::simplex_multilabel: {
      auto ml = gen_simplex_multilabel_dataset(cfg.dim, static_cast<int>(total), cfg.eps, rng,
                                               cfg.input_dim);
      pool = std::move(ml.data);
      labels = std::move(ml.labels);
      break;
    }
    case Task::custom_file: {
      pool = load_custom(cfg.data_file);
      if (pool.size() < total) {
        throw ConfigError("data file has fewer samples than n_train + n_val + n_test");
      }
      // Seeded shuffle so that the partition does not depend on file order.
      order = index_range(0, pool.size());
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(total);
      pool = pool.subset(order);
      break;
    }
  }
  Splits s;
  s.train = pool.subset(index_range(0, n_tr));
  s.val = pool.subset(index_range(n_tr, n_tr + n_va));
  s.test = pool.subset(index_range(n_tr + n_va, total));
  if (!labels.empty()) {
    s.test_labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(n_tr + n_va), labels.end());
  }
  return s;
}

bool MetricsReport::feasibility_ok() const {
  const MethodSummary* sp = method("sp");
  const MethodSummary* krls = method("krls");
  return sp && krls && sp->predictions > 0 && sp->feasible_raw == sp->predictions &&
         krls->feasible_final == krls->predictions;
}

const MetricRow* MetricsReport::find(const std::string& m, const std::string& metric) const {
  for (const auto& r : rows) {
    if (r.method == m && r.metric == metric) return &r;
  }
  return nullptr;
}

const MethodSummary* MetricsReport::method(const std::string& name) const {
  for (const auto& m : methods) {
    if (m.method == name) return &m;
  }
  return nullptr;
}

std::string MetricsReport::to_csv() const {
  std::ostringstream os;
  os << "method,metric,mean,stddev,n_test,seed\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.metric << ',' << format_double(r.mean) << ','
       << format_double(r.stddev) << ',' << r.n_test << ',' << r.seed << '\n';
  }
  return os.str();
}

Json MetricsReport::to_json() const {
  Json rows_json = Json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"method", r.method},
                         {"metric", r.metric},
                         {"mean", r.mean},
                         {"stddev", r.stddev},
                         {"n_test", r.n_test},
                         {"seed", r.seed}});
  }
  Json methods_json = Json::array();
  for (const auto& m : methods) {
    Json cv = Json::array();
    for (const auto& c : m.cv) cv.push_back(cv_to_json(c));
    const Stats d = stats_of(m.repeat_delta_means);
    const Stats f = stats_of(m.repeat_frob_means);
    Json mj{{"method", m.method},
            {"wall_clock_seconds", m.seconds},
            {"cross_validation", cv},
            {"predictions", m.predictions},
            {"feasible_without_projection", m.feasible_raw},
            {"feasible_after_final_step", m.feasible_final},
            {"repeat_delta_means", m.repeat_delta_means},
            {"repeat_frobenius_sq_means", m.repeat_frob_means},
            {"delta_stddev_over_repeats", d.stddev},
            {"frobenius_sq_stddev_over_repeats", f.stddev}};
    if (m.method == "sp") {
      mj["rgd"] = {{"mean_iterations", m.mean_iterations},
                   {"converged", m.converged},
                   {"line_search_failures", m.line_search_failures},
                   {"restarts", m.restarts}};
    }
    methods_json.push_back(std::move(mj));
  }
  Json notes = Json::array();
  notes.push_back("stddev columns in report.csv are taken over test points; "
                  "stddev over repeats is listed per method");
  if (config.value("task", std::string()) == "spd_inverse") {
    notes.push_back("inputs use eigenvalues drawn from Uniform[0.1, 10] so that inverse "
                    "targets stay bounded");
  }
  if (config.value("task", std::string()) == "simplex_multilabel") {
    notes.push_back("auc is the micro-averaged ranking AUC over (sample, positive, negative) "
                    "label triples");
  }
  return {{"config", config},
          {"rows", rows_json},
          {"methods", methods_json},
          {"feasibility_ok", feasibility_ok()},
          {"notes", notes}};
}

MetricsReport run_benchmark(const ExperimentConfig& cfg) {
  cfg.validate();
  MetricsReport report;
  report.config = experiment_to_json(cfg);
  const CvGrid grid{cfg.sigmas, cfg.lambdas, 0.2};

  MethodSummary sp;
  sp.method = "sp";
  MethodSummary krls;
  krls.method = "krls";
  std::vector<double> sp_delta, sp_frob, sp_ang, kr_delta, kr_frob, kr_ang;
  std::vector<LabeledPrediction> sp_auc, kr_auc;
  std::optional<ManifoldTag> tag;
  long total_iterations = 0;

  using clock = std::chrono::steady_clock;
  for (int r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t seed = *cfg.seed + static_cast<std::uint64_t>(r);
    const Splits s = make_splits(cfg, seed);
    tag = s.train.tag;
    const auto manifold = make_manifold(*tag);
    const bool circle = *tag == ManifoldTag::sphere(2);
    const bool simplex = tag->kind == ManifoldKind::simplex && !s.test_labels.empty();
    std::vector<double> rep_sp_delta, rep_sp_frob, rep_kr_delta, rep_kr_frob;

    auto t0 = clock::now();
    const CvResult sp_cv = cross_validate(s.train, s.val, grid, cfg.rgd);
    const PredictorModel model = train(s.train, sp_cv.best_sigma, sp_cv.best_lambda, cfg.rgd);
    const auto preds = model.predict_batch(s.test.inputs.rows());
    sp.seconds += std::chrono::duration<double>(clock::now() - t0).count();
    sp.cv.push_back(sp_cv);

    t0 = clock::now();
    const CvResult kr_cv = krls_cross_validate(s.train, s.val, grid);
    const KrlsModel kr_model = krls_train(s.train, kr_cv.best_sigma, kr_cv.best_lambda);
    std::vector<Ambient> kr_raw;
    for (std::size_t i = 0; i < s.test.size(); ++i) {
      kr_raw.push_back(krls_predict_ambient(kr_model, s.test.inputs.row(static_cast<Eigen::Index>(i))));
    }
    krls.seconds += std::chrono::duration<double>(clock::now() - t0).count();
    krls.cv.push_back(kr_cv);

    for (std::size_t i = 0; i < s.test.size(); ++i) {
      const Ambient& truth = s.test.outputs[i];

      const Prediction& p = preds[i];
      ++sp.predictions;
      if (manifold->contains(p.point)) {
        ++sp.feasible_raw;
        ++sp.feasible_final;
      }
      total_iterations += p.trace.iterations_run;
      sp.converged += p.trace.converged ? 1 : 0;
      sp.line_search_failures += p.trace.line_search_failed ? 1 : 0;
      sp.restarts += p.trace.restarts;
      rep_sp_delta.push_back(metric_delta(p.point, truth, *tag));
      rep_sp_frob.push_back(metric_frobenius_sq(p.point, truth, *tag));

      ++krls.predictions;
      if (manifold->contains(kr_raw[i])) ++krls.feasible_raw;
      const Ambient kp = manifold->project(kr_raw[i]);
      if (manifold->contains(kp)) ++krls.feasible_final;
      rep_kr_delta.push_back(metric_delta(kp, truth, *tag));
      rep_kr_frob.push_back(metric_frobenius_sq(kp, truth, *tag));

      if (circle) {
        sp_ang.push_back(metric_angular_degrees(p.point.col(0), truth.col(0)));
        kr_ang.push_back(metric_angular_degrees(kp.col(0), truth.col(0)));
      }
      if (simplex) {
        sp_auc.push_back({p.point.col(0), s.test_labels[i]});
        kr_auc.push_back({kp.col(0), s.test_labels[i]});
      }
    }
    sp.repeat_delta_means.push_back(stats_of(rep_sp_delta).mean);
    sp.repeat_frob_means.push_back(stats_of(rep_sp_frob).mean);
    krls.repeat_delta_means.push_back(stats_of(rep_kr_delta).mean);
    krls.repeat_frob_means.push_back(stats_of(rep_kr_frob).mean);
    sp_delta.insert(sp_delta.end(), rep_sp_delta.begin(), rep_sp_delta.end());
    sp_frob.insert(sp_frob.end(), rep_sp_frob.begin(), rep_sp_frob.end());
    kr_delta.insert(kr_delta.end(), rep_kr_delta.begin(), rep_kr_delta.end());
    kr_frob.insert(kr_frob.end(), rep_kr_frob.begin(), rep_kr_frob.end());
  }
  sp.mean_iterations =
      sp.predictions > 0 ? static_cast<double>(total_iterations) / sp.predictions : 0.0;

  const std::uint64_t seed = *cfg.seed;
  auto add = [&](const std::string& method, const std::string& metric,
                 const std::vector<double>& v) {
    const Stats st = stats_of(v);
    report.rows.push_back({method, metric, st.mean, st.stddev, static_cast<int>(v.size()), seed});
  };
  auto emit = [&](const std::string& name, const std::vector<double>& delta,
                  const std::vector<double>& frob, const std::vector<double>& ang,
                  const std::vector<LabeledPrediction>& auc) {
    add(name, "frobenius_sq", frob);
    add(name, "delta", delta);
    if (!ang.empty()) add(name, "angular_deg", ang);
    if (!auc.empty()) {
      report.rows.push_back(
          {name, "auc", metric_auc(auc), 0.0, static_cast<int>(auc.size()), seed});
    }
  };
  emit("sp", sp_delta, sp_frob, sp_ang, sp_auc);
  emit("krls", kr_delta, kr_frob, kr_ang, kr_auc);
  if (tag) report.config["tag"] = tag_to_json(*tag);
  report.methods = {sp, krls};
  return report;
}

void write_report(const MetricsReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(std::filesystem::path(dir) / "report.csv");
    if (!csv) throw ConfigError("cannot write report.csv in " + dir);
    csv << report.to_csv();
  }
  write_json_file((std::filesystem::path(dir) / "report.json").string(), report.to_json());
}

// ---------------------------------------------------------------------------
// Gradient check

GradcheckReport run_gradcheck(const ManifoldTag& tag, int trials, Rng& rng) {
  if (trials < 1) throw ConfigError("gradcheck needs at least one trial");
  const auto manifold = make_manifold(tag);
  // Central differences are exact on the quadratic Euclidean objective, so a
  // wider step only reduces cancellation error there.
  const double h = tag.kind == ManifoldKind::euclidean ? 1e-3 : 1e-5;
  GradcheckReport rep;
  rep.tag = tag;
  rep.trials = trials;
  rep.tolerance = tag.kind == ManifoldKind::euclidean ? 1e-9 : 1e-5;
  std::uniform_int_distribution<int> count(1, 5);
  std::uniform_real_distribution<double> weight(-1.0, 1.0);

  for (int t = 0; t < trials; ++t) {
    const Ambient y = manifold->random_point(rng);
    const int n = count(rng);
    std::vector<Ambient> anchors;
    std::vector<double> alpha;
    for (int i = 0; i < n; ++i) {
      anchors.push_back(manifold->random_point(rng));
      alpha.push_back(weight(rng));
    }
    Ambient v = manifold->random_tangent(y, rng);
    v /= manifold->norm(y, v);
    const AnchorSet set = manifold->prepare(anchors);
    // At the eps floor the retraction clips, so F along the curve is one-sided.
    if (tag.kind == ManifoldKind::simplex && y.minCoeff() < 2.0 * tag.eps) {
      ++rep.excluded;
      continue;
    }

    Ambient g;
    double fd = 0.0;
    try {
      g = manifold->gradient(y, set, alpha);
      const double fp = manifold->objective(manifold->retract(y, h * v), set, alpha);
      const double fm = manifold->objective(manifold->retract(y, -h * v), set, alpha);
      fd = (fp - fm) / (2.0 * h);
    } catch (const SingularConfiguration&) {
      ++rep.excluded;
      continue;
    }
    const double analytic = manifold->inner(y, g, v);
    const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-8});
    rep.max_rel_err = std::max(rep.max_rel_err, std::abs(analytic - fd) / scale);
    ++rep.evaluated;
  }
  return rep;
}

}  // namespace msp
