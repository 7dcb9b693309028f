#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "msp/matfun.hpp"

namespace msp {

using Rng = std::mt19937_64;

/// Ambient coordinates of a point or tangent vector. Vector manifolds use a
/// d x 1 column, the SPD cone uses the full m x m matrix.
using Ambient = Eigen::MatrixXd;

/// Inner products / Bhattacharyya sums below -1 + kCutGuard are treated as
/// the cut locus of the anchor.
inline constexpr double kCutGuard = 1e-8;
/// Gradient terms with 1 - <z, y> below this use the limit 1 of
/// arccos(u) / sqrt(1 - u^2); exact coincidences contribute zero.
inline constexpr double kSingularTol = 1e-12;
/// Eigenvalue clamp used when projecting onto the SPD cone.
inline constexpr double kSpdClamp = 1e-12;

enum class ManifoldKind { euclidean, sphere, spd, simplex };

struct ManifoldTag {
  ManifoldKind kind = ManifoldKind::euclidean;
  int dim = 1;
  double eps = 0.0;  // simplex only

  static ManifoldTag euclidean(int d) { return {ManifoldKind::euclidean, d, 0.0}; }
  static ManifoldTag sphere(int d) { return {ManifoldKind::sphere, d, 0.0}; }
  static ManifoldTag spd(int m) { return {ManifoldKind::spd, m, 0.0}; }
  static ManifoldTag simplex(int m, double eps) { return {ManifoldKind::simplex, m, eps}; }

  /// Throws ConfigError unless dim >= 1 and, for the simplex, 0 < eps < 1/m.
  void validate() const;

  Eigen::Index ambient_rows() const { return dim; }
  Eigen::Index ambient_cols() const { return kind == ManifoldKind::spd ? dim : 1; }
  /// Flattened ambient dimension (m^2 for SPD).
  Eigen::Index ambient_size() const { return ambient_rows() * ambient_cols(); }

  std::string name() const;
  static ManifoldKind parse_kind(const std::string& s);

  friend bool operator==(const ManifoldTag&, const ManifoldTag&) = default;
};

/// Unit vector in R^d.
class SpherePoint {
 public:
  explicit SpherePoint(Eigen::VectorXd coords);
  const Eigen::VectorXd& coords() const { return coords_; }

 private:
  Eigen::VectorXd coords_;
};

/// Symmetric positive-definite matrix with eigenvalues >= kSpdClamp.
class SpdPoint {
 public:
  explicit SpdPoint(SymMat mat);
  const SymMat& mat() const { return mat_; }

 private:
  SymMat mat_;
};

/// Probability vector with every entry >= eps.
class SimplexPoint {
 public:
  SimplexPoint(Eigen::VectorXd probs, double eps);
  const Eigen::VectorXd& probs() const { return probs_; }
  double eps() const { return eps_; }

 private:
  Eigen::VectorXd probs_;
  double eps_;
};

struct TangentVector {
  Ambient base;
  Ambient ambient;
};

/// Training outputs together with whatever per-anchor data a manifold caches
/// for repeated objective / gradient evaluations (inverses, square roots).
struct AnchorSet {
  std::vector<Ambient> points;
  std::vector<Ambient> aux;

  std::size_t size() const { return points.size(); }
};

/// A Riemannian manifold with the squared geodesic distance as loss.
class Manifold {
 public:
  explicit Manifold(ManifoldTag tag) : tag_(tag) {}
  virtual ~Manifold() = default;

  const ManifoldTag& tag() const { return tag_; }

  /// Squared geodesic distance.
  virtual double loss(const Ambient& y, const Ambient& z) const = 0;

  virtual AnchorSet prepare(std::vector<Ambient> anchors) const;

  /// F(y) = sum_i alpha_i loss(y, anchor_i).
  virtual double objective(const Ambient& y, const AnchorSet& anchors,
                           std::span<const double> alpha) const;

  /// Riemannian gradient of F at y, in ambient coordinates.
  virtual Ambient gradient(const Ambient& y, const AnchorSet& anchors,
                           std::span<const double> alpha) const = 0;

  /// Riemannian metric at y.
  virtual double inner(const Ambient& y, const Ambient& u, const Ambient& v) const;
  double norm(const Ambient& y, const Ambient& v) const {
    return std::sqrt(std::max(0.0, inner(y, v, v)));
  }

  virtual Ambient retract(const Ambient& y, const Ambient& v) const = 0;

  /// Closed-form exponential map where one is implemented.
  virtual std::optional<Ambient> exp_map(const Ambient& y, const Ambient& v) const;

  /// Nearest-point style projection of an ambient array onto the manifold.
  virtual Ambient project(const Ambient& p) const = 0;

  /// Projects an ambient vector onto the tangent space at y.
  virtual Ambient project_tangent(const Ambient& y, const Ambient& v) const = 0;

  /// Throws ConfigError / NotPositiveDefinite when y violates the point invariants.
  virtual void check_point(const Ambient& y) const = 0;
  bool contains(const Ambient& y) const;

  virtual Ambient random_point(Rng& rng) const = 0;
  Ambient random_tangent(const Ambient& y, Rng& rng) const;

 protected:
  void check_shape(const Ambient& a, const char* what) const;

 private:
  ManifoldTag tag_;
};

std::unique_ptr<Manifold> make_manifold(const ManifoldTag& tag);

// Tag-dispatched convenience layer.

double loss(const ManifoldTag& tag, const Ambient& y, const Ambient& z);
double weighted_objective(const ManifoldTag& tag, const Ambient& y,
                          const std::vector<Ambient>& anchors,
                          std::span<const double> alpha);
TangentVector grad_weighted_objective(const ManifoldTag& tag, const Ambient& y,
                                      const std::vector<Ambient>& anchors,
                                      std::span<const double> alpha);
Ambient retract(const ManifoldTag& tag, const Ambient& y, const TangentVector& v);
Ambient project_ambient(const ManifoldTag& tag, const Ambient& p);
Ambient random_point(const ManifoldTag& tag, Rng& rng);
TangentVector random_tangent(const ManifoldTag& tag, const Ambient& y, Rng& rng);

SpherePoint simplex_to_sphere(const SimplexPoint& y);
SimplexPoint sphere_to_simplex(const SpherePoint& s, double eps);

/// Angle between unit vectors, 2 atan2(|a - b|, |a + b|); equals arccos(<a, b>)
/// but stays accurate near 0 and pi.
double unit_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// arccos of the clamped Bhattacharyya coefficient, computed directly on probabilities.
double fisher_distance(const Eigen::VectorXd& y, const Eigen::VectorXd& z);

/// Sphere exponential map cos(|v|) y + sin(|v|) v / |v|.
Eigen::VectorXd sphere_exp(const Eigen::VectorXd& y, const Eigen::VectorXd& v);

}  // namespace msp
