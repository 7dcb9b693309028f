// Command-line front end: data generation, training, prediction, evaluation,
// benchmarks and gradient checks.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "msp/errors.hpp"
#include "msp/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct SharedOptions {
  std::string manifold;
  int dim = 0;
  double eps = 1e-5;
  std::optional<double> sigma;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  msp::RgdConfig rgd;
};

void add_shared(CLI::App* cmd, SharedOptions& o) {
  cmd->add_option("--manifold", o.manifold, "euclidean|sphere|spd|simplex")
      ->check(CLI::IsMember({"euclidean", "sphere", "spd", "simplex"}));
  cmd->add_option("--dim", o.dim, "Manifold dimension (d for sphere, m for spd/simplex)");
  cmd->add_option("--eps", o.eps, "Simplex interior margin");
  cmd->add_option("--sigma", o.sigma, "Gaussian kernel bandwidth");
  cmd->add_option("--lambda", o.lambda, "Ridge regularizer");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--config", o.config, "JSON configuration file");
  cmd->add_option("--out", o.out, "Output file or directory");
  cmd->add_option("--max-iters", o.rgd.max_iters, "RGD iteration cap");
  cmd->add_option("--grad-tol", o.rgd.grad_tol, "RGD gradient-norm tolerance");
  cmd->add_option("--init-step", o.rgd.init_step, "RGD initial step size");
}

msp::ManifoldTag tag_from(const SharedOptions& o) {
  if (o.manifold.empty()) throw msp::ConfigError("--manifold is required");
  if (o.dim < 1) throw msp::ConfigError("--dim must be >= 1");
  msp::ManifoldTag tag{msp::ManifoldTag::parse_kind(o.manifold), o.dim,
                       o.manifold == "simplex" ? o.eps : 0.0};
  tag.validate();
  return tag;
}

std::uint64_t require_seed(const SharedOptions& o) {
  if (!o.seed) throw msp::ConfigError("--seed is required");
  return *o.seed;
}

msp::Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw msp::ConfigError("cannot open " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return msp::read_orientation_csv(in);
  }
  return msp::read_dataset_jsonl(in);
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw msp::ConfigError("cannot write " + path);
  return file;
}

Eigen::VectorXd parse_vector(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw msp::ConfigError("cannot parse '" + item + "' as a number");
    }
  }
  if (vals.empty()) throw msp::ConfigError("empty input vector");
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

struct LoadedModel {
  std::optional<msp::PredictorModel> sp;
  std::optional<msp::KrlsModel> krls;

  msp::ManifoldTag tag() const { return sp ? sp->tag() : krls->tag; }
  msp::Ambient predict(const Eigen::VectorXd& x) const {
    return sp ? sp->predict(x) : msp::krls_predict(*krls, x);
  }
};

LoadedModel load_model(const std::string& path, const SharedOptions& o) {
  const msp::Json j = msp::read_json_file(path);
  LoadedModel m;
  if (j.value("kind", std::string("sp")) == "krls") {
    m.krls = msp::krls_from_json(j);
  } else {
    msp::Json doc = j;
    // RGD flags given on the command line override the stored configuration.
    if (o.rgd != msp::RgdConfig{}) doc["rgd"] = msp::rgd_to_json(o.rgd);
    m.sp = msp::model_from_json(doc);
  }
  return m;
}

int cmd_gen_data(const SharedOptions& o, const std::string& task_str, int n) {
  const std::uint64_t seed = require_seed(o);
  msp::Rng rng(seed);
  std::string task = task_str;
  if (task.empty()) {
    if (o.manifold == "spd") task = "spd_inverse";
    else if (o.manifold == "sphere") task = "sphere_toy";
    else if (o.manifold == "simplex") task = "simplex_multilabel";
    else throw msp::ConfigError("--task or a --manifold with a synthetic generator is required");
  }
  if (n < 1) throw msp::ConfigError("--n must be >= 1");
  msp::Dataset data;
  switch (msp::parse_task(task)) {
    case msp::Task::spd_inverse:
      data = msp::gen_spd_inverse_dataset(o.dim > 0 ? o.dim : 5, n, rng);
      break;
    case msp::Task::sphere_toy:
      data = msp::gen_sphere_toy_dataset(n, rng);
      break;
    case msp::Task::simplex_multilabel:
      data = msp::gen_simplex_multilabel_dataset(o.dim > 0 ? o.dim : 5, n, o.eps, rng).data;
      break;
    case msp::Task::custom_file:
      throw msp::ConfigError("custom_file data cannot be generated");
  }
  std::ofstream file;
  std::ostream& os = open_out(o.out, file);
  if (o.out.size() >= 4 && o.out.substr(o.out.size() - 4) == ".csv") {
    msp::write_orientation_csv(os, data);
  } else {
    msp::write_dataset_jsonl(os, data);
  }
  return 0;
}

int cmd_train(const SharedOptions& o, const std::string& data_path, const std::string& method) {
  if (!o.sigma || !o.lambda) throw msp::ConfigError("--sigma and --lambda are required");
  const msp::Dataset data = load_dataset(data_path);
  msp::Json doc;
  if (method == "krls") {
    doc = msp::krls_to_json(msp::krls_train(data, *o.sigma, *o.lambda), data);
  } else {
    doc = msp::model_to_json(msp::train(data, *o.sigma, *o.lambda, o.rgd));
  }
  std::ofstream file;
  open_out(o.out, file) << doc.dump(2) << '\n';
  return 0;
}

int cmd_predict(const SharedOptions& o, const std::string& model_path,
                const std::string& data_path, const std::string& x) {
  const LoadedModel model = load_model(model_path, o);
  const msp::ManifoldTag tag = model.tag();
  std::ofstream file;
  std::ostream& os = open_out(o.out, file);
  auto emit = [&](const Eigen::VectorXd& xi) {
    msp::Json xs = msp::Json::array();
    for (Eigen::Index k = 0; k < xi.size(); ++k) xs.push_back(xi(k));
    const msp::Json rec{{"x", xs},
                        {"y", msp::point_to_json(model.predict(xi), tag)},
                        {"tag", msp::tag_to_json(tag)}};
    os << rec.dump() << '\n';
  };
  if (!x.empty()) {
    emit(parse_vector(x));
  } else if (!data_path.empty()) {
    const msp::Dataset data = load_dataset(data_path);
    for (Eigen::Index i = 0; i < data.inputs.n(); ++i) emit(data.inputs.row(i));
  } else {
    throw msp::ConfigError("predict needs --x or --data");
  }
  return 0;
}

int cmd_eval(const SharedOptions& o, const std::string& model_path, const std::string& data_path) {
  const LoadedModel model = load_model(model_path, o);
  const msp::Dataset data = load_dataset(data_path);
  if (!(data.tag == model.tag())) throw msp::ConfigError("dataset and model manifolds differ");
  double delta = 0.0;
  double frob = 0.0;
  for (Eigen::Index i = 0; i < data.inputs.n(); ++i) {
    const msp::Ambient p = model.predict(data.inputs.row(i));
    const auto& truth = data.outputs[static_cast<std::size_t>(i)];
    delta += msp::metric_delta(p, truth, data.tag);
    frob += msp::metric_frobenius_sq(p, truth, data.tag);
  }
  const double n = static_cast<double>(data.inputs.n());
  const msp::Json out{{"n", data.inputs.n()},
                      {"mean_delta", delta / n},
                      {"mean_frobenius_sq", frob / n}};
  std::ofstream file;
  open_out(o.out, file) << out.dump(2) << '\n';
  return 0;
}

int cmd_benchmark(const SharedOptions& o, const std::string& task, bool full_scale, int n_train,
                  int n_val, int n_test, int repeats) {
  msp::ExperimentConfig cfg;
  if (!o.config.empty()) cfg = msp::experiment_from_json(msp::read_json_file(o.config));
  if (!task.empty()) cfg.task = msp::parse_task(task);
  if (o.dim > 0) cfg.dim = o.dim;
  if (full_scale) cfg.use_full_scale();
  if (n_train > 0) cfg.n_train = n_train;
  if (n_val > 0) cfg.n_val = n_val;
  if (n_test > 0) cfg.n_test = n_test;
  if (repeats > 0) cfg.repeats = repeats;
  if (o.seed) cfg.seed = o.seed;
  if (o.sigma) cfg.sigmas = {*o.sigma};
  if (o.lambda) cfg.lambdas = {*o.lambda};
  if (o.rgd != msp::RgdConfig{}) cfg.rgd = o.rgd;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (cfg.out_dir.empty()) throw msp::ConfigError("benchmark needs --out or out_dir");
  const msp::MetricsReport report = msp::run_benchmark(cfg);
  msp::write_report(report, cfg.out_dir);
  std::cout << report.to_csv();
  return report.feasibility_ok() ? 0 : kExitNumerical;
}

int cmd_gradcheck(const SharedOptions& o, int trials) {
  msp::Rng rng(require_seed(o));
  const msp::GradcheckReport rep = msp::run_gradcheck(tag_from(o), trials, rng);
  const msp::Json out{{"manifold", msp::tag_to_json(rep.tag)},
                      {"trials", rep.trials},
                      {"evaluated", rep.evaluated},
                      {"excluded", rep.excluded},
                      {"max_rel_err", rep.max_rel_err},
                      {"tolerance", rep.tolerance},
                      {"pass", rep.pass()}};
  std::cout << out.dump(2) << '\n';
  return rep.pass() ? 0 : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Manifold-valued structured prediction"};
  app.require_subcommand(1);

  SharedOptions gen_o, train_o, predict_o, eval_o, bench_o, grad_o;

  auto* gen = app.add_subcommand("gen-data", "Generate a synthetic dataset (JSON lines or CSV)");
  add_shared(gen, gen_o);
  std::string gen_task;
  int gen_n = 100;
  gen->add_option("--task", gen_task, "spd_inverse|sphere_toy|simplex_multilabel");
  gen->add_option("--n", gen_n, "Number of samples");

  auto* tr = app.add_subcommand("train", "Fit a model and write it as JSON");
  add_shared(tr, train_o);
  std::string train_data, train_method = "sp";
  tr->add_option("--data", train_data, "Training dataset")->required();
  tr->add_option("--method", train_method, "sp|krls")->check(CLI::IsMember({"sp", "krls"}));

  auto* pr = app.add_subcommand("predict", "Predict with a stored model");
  add_shared(pr, predict_o);
  std::string pr_model, pr_data, pr_x;
  pr->add_option("--model", pr_model, "Model JSON")->required();
  pr->add_option("--data", pr_data, "Dataset whose inputs are predicted");
  pr->add_option("--x", pr_x, "Single comma-separated input");

  auto* ev = app.add_subcommand("eval", "Evaluate a stored model on a dataset");
  add_shared(ev, eval_o);
  std::string ev_model, ev_data;
  ev->add_option("--model", ev_model, "Model JSON")->required();
  ev->add_option("--data", ev_data, "Evaluation dataset")->required();

  auto* be = app.add_subcommand("benchmark", "Run the SP vs KRLS benchmark");
  add_shared(be, bench_o);
  std::string be_task;
  bool full_scale = false;
  int n_train = 0, n_val = 0, n_test = 0, repeats = 0;
  be->add_option("--task", be_task, "spd_inverse|sphere_toy|simplex_multilabel|custom_file");
  be->add_flag("--full-scale", full_scale, "1000 / 100 / 100 split sizes");
  be->add_option("--n-train", n_train);
  be->add_option("--n-val", n_val);
  be->add_option("--n-test", n_test);
  be->add_option("--repeats", repeats);

  auto* gc = app.add_subcommand("gradcheck", "Finite-difference check of the Riemannian gradient");
  add_shared(gc, grad_o);
  int trials = 50;
  gc->add_option("--trials", trials);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gen) return cmd_gen_data(gen_o, gen_task, gen_n);
    if (*tr) return cmd_train(train_o, train_data, train_method);
    if (*pr) return cmd_predict(predict_o, pr_model, pr_data, pr_x);
    if (*ev) return cmd_eval(eval_o, ev_model, ev_data);
    if (*be) return cmd_benchmark(bench_o, be_task, full_scale, n_train, n_val, n_test, repeats);
    if (*gc) return cmd_gradcheck(grad_o, trials);
  } catch (const msp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const msp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
