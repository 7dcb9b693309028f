#include "msp/serialization.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "msp/errors.hpp"

namespace msp {

namespace {

Json vector_to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected a numeric array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("expected a numeric array");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

template <typename T>
T require(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

Json tag_to_json(const ManifoldTag& tag) {
  Json j{{"kind", tag.name()}, {"dim", tag.dim}};
  if (tag.kind == ManifoldKind::simplex) j["eps"] = tag.eps;
  return j;
}

ManifoldTag tag_from_json(const Json& j) {
  ManifoldTag tag;
  tag.kind = ManifoldTag::parse_kind(require<std::string>(j, "kind"));
  tag.dim = require<int>(j, "dim");
  if (tag.kind == ManifoldKind::simplex) tag.eps = require<double>(j, "eps");
  tag.validate();
  return tag;
}

Json point_to_json(const Ambient& y, const ManifoldTag& tag) {
  if (tag.kind == ManifoldKind::spd) {
    return Json{{"dim", tag.dim}, {"values", vector_to_json(flatten(y))}};
  }
  return vector_to_json(y.col(0));
}

Ambient point_from_json(const Json& j, const ManifoldTag& tag) {
  if (tag.kind == ManifoldKind::spd) {
    if (!j.is_object()) throw ConfigError("SPD point must be an object");
    if (require<int>(j, "dim") != tag.dim) throw DimensionMismatch("SPD point has wrong dim");
    return unflatten(vector_from_json(j.at("values")), tag);
  }
  const Eigen::VectorXd v = vector_from_json(j);
  if (v.size() != tag.dim) throw DimensionMismatch("point has wrong dimension");
  return v;
}

Json rgd_to_json(const RgdConfig& cfg) {
  return Json{{"max_iters", cfg.max_iters},           {"grad_tol", cfg.grad_tol},
              {"init_step", cfg.init_step},           {"armijo_c", cfg.armijo_c},
              {"backtrack_factor", cfg.backtrack_factor}, {"max_backtracks", cfg.max_backtracks}};
}

RgdConfig rgd_from_json(const Json& j) {
  RgdConfig cfg;
  if (!j.is_object()) throw ConfigError("rgd config must be an object");
  cfg.max_iters = j.value("max_iters", cfg.max_iters);
  cfg.grad_tol = j.value("grad_tol", cfg.grad_tol);
  cfg.init_step = j.value("init_step", cfg.init_step);
  cfg.armijo_c = j.value("armijo_c", cfg.armijo_c);
  cfg.backtrack_factor = j.value("backtrack_factor", cfg.backtrack_factor);
  cfg.max_backtracks = j.value("max_backtracks", cfg.max_backtracks);
  cfg.validate();
  return cfg;
}

namespace {

Json envelope(const char* kind, const ScoreModel& scores, const ManifoldTag& tag,
              const std::vector<Ambient>& outputs) {
  Json inputs = Json::array();
  for (Eigen::Index i = 0; i < scores.n(); ++i) {
    inputs.push_back(vector_to_json(scores.train_inputs().row(i)));
  }
  Json outs = Json::array();
  for (const auto& y : outputs) outs.push_back(point_to_json(y, tag));
  return Json{{"version", kModelVersion}, {"kind", kind},
              {"tag", tag_to_json(tag)},  {"sigma", scores.sigma()},
              {"lambda", scores.lambda()}, {"train_inputs", std::move(inputs)},
              {"train_outputs", std::move(outs)}};
}

}  // namespace

Dataset model_dataset(const Json& j) {
  if (require<std::string>(j, "version") != kModelVersion) {
    throw ConfigError("unsupported model version");
  }
  const ManifoldTag tag = tag_from_json(j.at("tag"));
  const Json& xs = j.at("train_inputs");
  const Json& ys = j.at("train_outputs");
  if (!xs.is_array() || !ys.is_array() || xs.size() != ys.size() || xs.empty()) {
    throw ConfigError("model training inputs/outputs malformed");
  }
  const Eigen::VectorXd first = vector_from_json(xs[0]);
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(xs.size()), first.size());
  std::vector<Ambient> outs;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Eigen::VectorXd xi = vector_from_json(xs[i]);
    if (xi.size() != first.size()) throw DimensionMismatch("ragged training inputs");
    rows.row(static_cast<Eigen::Index>(i)) = xi.transpose();
    outs.push_back(point_from_json(ys[i], tag));
  }
  return Dataset{InputMatrix(std::move(rows)), std::move(outs), tag};
}

Json model_to_json(const PredictorModel& model) {
  Json j = envelope("sp", model.score_model(), model.tag(), model.train_outputs());
  j["rgd"] = rgd_to_json(model.rgd());
  return j;
}

PredictorModel model_from_json(const Json& j) {
  if (j.value("kind", std::string("sp")) != "sp") {
    throw ConfigError("document is not a structured-prediction model");
  }
  const Dataset data = model_dataset(j);
  const RgdConfig rgd = j.contains("rgd") ? rgd_from_json(j.at("rgd")) : RgdConfig{};
  return train(data, require<double>(j, "sigma"), require<double>(j, "lambda"), rgd);
}

Json krls_to_json(const KrlsModel& model, const Dataset& train_set) {
  return envelope("krls", model.score_model, model.tag, train_set.outputs);
}

KrlsModel krls_from_json(const Json& j) {
  if (require<std::string>(j, "kind") != "krls") {
    throw ConfigError("document is not a KRLS model");
  }
  return krls_train(model_dataset(j), require<double>(j, "sigma"), require<double>(j, "lambda"));
}

void write_dataset_jsonl(std::ostream& os, const Dataset& data) {
  const Json tag = tag_to_json(data.tag);
  for (std::size_t i = 0; i < data.size(); ++i) {
    Json rec{{"x", vector_to_json(data.inputs.row(static_cast<Eigen::Index>(i)))},
             {"y", point_to_json(data.outputs[i], data.tag)},
             {"tag", tag}};
    os << rec.dump() << '\n';
  }
}

Dataset read_dataset_jsonl(std::istream& is) {
  std::string line;
  std::vector<Eigen::VectorXd> xs;
  std::vector<Ambient> ys;
  ManifoldTag tag;
  bool have_tag = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json rec;
    try {
      rec = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
    const ManifoldTag t = tag_from_json(rec.at("tag"));
    if (have_tag && !(t == tag)) {
      throw ConfigError("dataset mixes manifold tags");
    }
    tag = t;
    have_tag = true;
    xs.push_back(vector_from_json(rec.at("x")));
    ys.push_back(point_from_json(rec.at("y"), tag));
    if (xs.back().size() != xs.front().size()) throw DimensionMismatch("ragged dataset inputs");
  }
  if (xs.empty()) throw ConfigError("dataset is empty");
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(xs.size()), xs.front().size());
  for (std::size_t i = 0; i < xs.size(); ++i) rows.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
  Dataset d{InputMatrix(std::move(rows)), std::move(ys), tag};
  d.validate();
  return d;
}

Dataset read_orientation_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("orientation CSV is empty");
  if (line.rfind("x,y,theta_radians", 0) != 0) {
    throw ConfigError("orientation CSV must start with header x,y,theta_radians");
  }
  std::vector<std::array<double, 3>> recs;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::array<double, 3> r{};
    char c1 = 0, c2 = 0;
    if (!(row >> r[0] >> c1 >> r[1] >> c2 >> r[2]) || c1 != ',' || c2 != ',') {
      throw ConfigError("malformed orientation row: " + line);
    }
    recs.push_back(r);
  }
  if (recs.empty()) throw ConfigError("orientation CSV has no rows");
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(recs.size()), 2);
  std::vector<Ambient> ys;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    rows(static_cast<Eigen::Index>(i), 0) = recs[i][0];
    rows(static_cast<Eigen::Index>(i), 1) = recs[i][1];
    Eigen::VectorXd y(2);
    y << std::cos(recs[i][2]), std::sin(recs[i][2]);
    ys.push_back(y);
  }
  return Dataset{InputMatrix(std::move(rows)), std::move(ys), ManifoldTag::sphere(2)};
}

void write_orientation_csv(std::ostream& os, const Dataset& data) {
  if (!(data.tag == ManifoldTag::sphere(2)) || data.inputs.p() != 2) {
    throw ConfigError("orientation CSV needs 2-d inputs and circle outputs");
  }
  os << "x,y,theta_radians\n";
  os.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    os << data.inputs.rows()(r, 0) << ',' << data.inputs.rows()(r, 1) << ','
       << std::atan2(data.outputs[i](1, 0), data.outputs[i](0, 0)) << '\n';
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace msp
