#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "msp/baseline.hpp"
#include "msp/estimator.hpp"

namespace msp {

using Json = nlohmann::json;

/// Current value of the "version" field in persisted models.
inline constexpr const char* kModelVersion = "1";

Json tag_to_json(const ManifoldTag& tag);
ManifoldTag tag_from_json(const Json& j);

/// Sphere, simplex and Euclidean points are flat arrays; SPD points are
/// {"dim": m, "values": [row-major m*m]}.
Json point_to_json(const Ambient& y, const ManifoldTag& tag);
Ambient point_from_json(const Json& j, const ManifoldTag& tag);

Json rgd_to_json(const RgdConfig& cfg);
/// Missing keys keep their defaults.
RgdConfig rgd_from_json(const Json& j);

/// {version, kind: "sp", tag, sigma, lambda, rgd, train_inputs, train_outputs}.
/// The Cholesky factor is recomputed on load.
Json model_to_json(const PredictorModel& model);
PredictorModel model_from_json(const Json& j);

/// Same envelope with kind "krls"; weights are refit on load.
Json krls_to_json(const KrlsModel& model, const Dataset& train_set);
KrlsModel krls_from_json(const Json& j);

/// Training set stored in a model document.
Dataset model_dataset(const Json& j);

/// JSON lines, one {"x": [...], "y": <point>, "tag": <tag>} per sample.
void write_dataset_jsonl(std::ostream& os, const Dataset& data);
Dataset read_dataset_jsonl(std::istream& is);

/// Orientation fields: CSV with header x,y,theta_radians. Outputs are unit
/// vectors (cos theta, sin theta) on the circle.
Dataset read_orientation_csv(std::istream& is);
void write_orientation_csv(std::ostream& os, const Dataset& data);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace msp
