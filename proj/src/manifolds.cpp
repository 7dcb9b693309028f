#include "msp/manifolds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "msp/errors.hpp"
#include "msp/sampling.hpp"

namespace msp {

namespace {

double clamp_unit(double u) { return std::clamp(u, -1.0, 1.0); }

bool all_finite(const Ambient& a) { return a.allFinite(); }

}  // namespace

double unit_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 2.0 * std::atan2((a - b).norm(), (a + b).norm());
}

// ---------------------------------------------------------------------------
// ManifoldTag

void ManifoldTag::validate() const {
  if (dim < 1) {
    throw ConfigError("manifold dimension must be >= 1");
  }
  if (kind == ManifoldKind::simplex) {
    if (!(eps > 0.0) || !(eps * dim < 1.0)) {
      throw ConfigError("simplex requires 0 < eps < 1/m");
    }
  }
}

std::string ManifoldTag::name() const {
  switch (kind) {
    case ManifoldKind::euclidean:
      return "euclidean";
    case ManifoldKind::sphere:
      return "sphere";
    case ManifoldKind::spd:
      return "spd";
    case ManifoldKind::simplex:
      return "simplex";
  }
  return "unknown";
}

ManifoldKind ManifoldTag::parse_kind(const std::string& s) {
  if (s == "euclidean") return ManifoldKind::euclidean;
  if (s == "sphere") return ManifoldKind::sphere;
  if (s == "spd") return ManifoldKind::spd;
  if (s == "simplex") return ManifoldKind::simplex;
  throw ConfigError("unknown manifold '" + s + "'");
}

// ---------------------------------------------------------------------------
// Typed points

SpherePoint::SpherePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 1 || !coords_.allFinite() ||
      std::abs(coords_.norm() - 1.0) > 1e-10) {
    throw ConfigError("sphere point must have unit norm");
  }
}

SpdPoint::SpdPoint(SymMat mat) : mat_(std::move(mat)) {
  const double smallest = sym_eigvals(mat_).minCoeff();
  if (!(smallest >= kSpdClamp)) {
    throw NotPositiveDefinite("SPD point has eigenvalue below 1e-12", smallest);
  }
}

SimplexPoint::SimplexPoint(Eigen::VectorXd probs, double eps)
    : probs_(std::move(probs)), eps_(eps) {
  ManifoldTag::simplex(static_cast<int>(probs_.size()), eps).validate();
  if (!probs_.allFinite() || std::abs(probs_.sum() - 1.0) > 1e-10 ||
      probs_.minCoeff() < eps_ * (1.0 - 1e-12)) {
    throw ConfigError("simplex point must sum to 1 with entries >= eps");
  }
}

// ---------------------------------------------------------------------------
// Manifold base

AnchorSet Manifold::prepare(std::vector<Ambient> anchors) const {
  for (const auto& a : anchors) {
    check_shape(a, "anchor");
  }
  AnchorSet set;
  set.points = std::move(anchors);
  return set;
}

double Manifold::objective(const Ambient& y, const AnchorSet& anchors,
                           std::span<const double> alpha) const {
  if (alpha.size() != anchors.size()) {
    throw DimensionMismatch("alpha length differs from anchor count");
  }
  double f = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (alpha[i] != 0.0) {
      f += alpha[i] * loss(y, anchors.points[i]);
    }
  }
  return f;
}

double Manifold::inner(const Ambient&, const Ambient& u, const Ambient& v) const {
  return (u.array() * v.array()).sum();
}

std::optional<Ambient> Manifold::exp_map(const Ambient&, const Ambient&) const {
  return std::nullopt;
}

bool Manifold::contains(const Ambient& y) const {
  try {
    check_point(y);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Ambient Manifold::random_tangent(const Ambient& y, Rng& rng) const {
  check_shape(y, "base point");
  return project_tangent(y, gaussian_matrix(tag_.ambient_rows(), tag_.ambient_cols(), rng));
}

void Manifold::check_shape(const Ambient& a, const char* what) const {
  if (a.rows() != tag_.ambient_rows() || a.cols() != tag_.ambient_cols()) {
    std::ostringstream msg;
    msg << what << " has shape " << a.rows() << "x" << a.cols() << ", expected "
        << tag_.ambient_rows() << "x" << tag_.ambient_cols() << " for " << tag_.name();
    throw DimensionMismatch(msg.str());
  }
}

// ---------------------------------------------------------------------------
// Euclidean space

namespace {

class Euclidean final : public Manifold {
 public:
  using Manifold::Manifold;

  double loss(const Ambient& y, const Ambient& z) const override {
    check_shape(y, "y");
    check_shape(z, "z");
    return (y - z).squaredNorm();
  }

  Ambient gradient(const Ambient& y, const AnchorSet& anchors,
                   std::span<const double> alpha) const override {
    check_shape(y, "y");
    if (alpha.size() != anchors.size()) {
      throw DimensionMismatch("alpha length differs from anchor count");
    }
    Ambient g = Ambient::Zero(y.rows(), y.cols());
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      g += 2.0 * alpha[i] * (y - anchors.points[i]);
    }
    return g;
  }

  Ambient retract(const Ambient& y, const Ambient& v) const override { return y + v; }

  std::optional<Ambient> exp_map(const Ambient& y, const Ambient& v) const override {
    return Ambient(y + v);
  }

  Ambient project(const Ambient& p) const override {
    check_shape(p, "ambient point");
    if (!all_finite(p)) {
      throw NumericalError("cannot project non-finite coordinates");
    }
    return p;
  }

  Ambient project_tangent(const Ambient&, const Ambient& v) const override { return v; }

  void check_point(const Ambient& y) const override {
    check_shape(y, "point");
    if (!all_finite(y)) {
      throw ConfigError("euclidean point has non-finite coordinates");
    }
  }

  Ambient random_point(Rng& rng) const override {
    return gaussian_matrix(tag().dim, 1, rng);
  }
};

// ---------------------------------------------------------------------------
// Unit sphere S_{d-1}

/// Riemannian gradient of sum_i alpha_i arccos(<z_i, y>)^2 at the unit vector y.
/// Each term is -2 arccos(u) / sqrt(1 - u^2) * (z - u y).
Eigen::VectorXd sphere_gradient(const Eigen::VectorXd& y,
                                const std::vector<Ambient>& anchors,
                                std::span<const double> alpha) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(y.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (alpha[i] == 0.0) continue;
    const auto z = anchors[i].col(0);
    const double u = clamp_unit(z.dot(y));
    if (u < -1.0 + kCutGuard) {
      std::ostringstream msg;
      msg << "point is on the cut locus of anchor " << i << " (<z, y> = " << u << ")";
      throw SingularConfiguration(msg.str(), i);
    }
    // arccos(u) / sqrt(1 - u^2) -> 1 as u -> 1; z - u y vanishes at coincidence.
    const double ratio = 1.0 - u <= kSingularTol
                             ? 1.0
                             : std::acos(u) / std::sqrt((1.0 - u) * (1.0 + u));
    const double coef = -2.0 * ratio;
    g += alpha[i] * coef * (z - u * y);
  }
  // Remove the normal component accumulated through rounding.
  g -= y.dot(g) * y;
  return g;
}

class Sphere final : public Manifold {
 public:
  using Manifold::Manifold;

  double loss(const Ambient& y, const Ambient& z) const override {
    check_shape(y, "y");
    check_shape(z, "z");
    const double theta = unit_angle(y.col(0), z.col(0));
    return theta * theta;
  }

  Ambient gradient(const Ambient& y, const AnchorSet& anchors,
                   std::span<const double> alpha) const override {
    check_shape(y, "y");
    if (alpha.size() != anchors.size()) {
      throw DimensionMismatch("alpha length differs from anchor count");
    }
    return sphere_gradient(y.col(0), anchors.points, alpha);
  }

  Ambient retract(const Ambient& y, const Ambient& v) const override {
    const Eigen::VectorXd p = y.col(0) + v.col(0);
    const double n = p.norm();
    if (!(n > 1e-12) || !std::isfinite(n)) {
      throw DegenerateStep("sphere retraction of y + v = 0 is undefined");
    }
    return p / n;
  }

  std::optional<Ambient> exp_map(const Ambient& y, const Ambient& v) const override {
    return Ambient(sphere_exp(y.col(0), v.col(0)));
  }

  Ambient project(const Ambient& p) const override {
    check_shape(p, "ambient point");
    const double n = p.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw DegenerateStep("cannot project a zero or non-finite vector onto the sphere");
    }
    return p / n;
  }

  Ambient project_tangent(const Ambient& y, const Ambient& v) const override {
    return v - y.col(0).dot(v.col(0)) * y;
  }

  void check_point(const Ambient& y) const override {
    check_shape(y, "point");
    SpherePoint checked(y.col(0));
  }

  Ambient random_point(Rng& rng) const override {
    Eigen::VectorXd g;
    do {
      g = gaussian_matrix(tag().dim, 1, rng);
    } while (g.norm() == 0.0);
    return g / g.norm();
  }
};

// ---------------------------------------------------------------------------
// SPD cone with the affine-invariant metric

struct SpdRoots {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;
};

SpdRoots spd_roots(const Ambient& y) {
  const EigPair eig = sym_eig(SymMat(y));
  const double smallest = eig.eigvals.minCoeff();
  if (!(smallest > kEigenFloor * 0.5)) {
    throw NotPositiveDefinite("SPD base point is not positive definite", smallest);
  }
  const Eigen::VectorXd root = eig.eigvals.cwiseSqrt();
  SpdRoots r;
  r.sqrt = eig.eigvecs * root.asDiagonal() * eig.eigvecs.transpose();
  r.inv_sqrt = eig.eigvecs * root.cwiseInverse().asDiagonal() * eig.eigvecs.transpose();
  return r;
}

double sum_log_sq(const Eigen::MatrixXd& sandwich) {
  const Eigen::VectorXd ev = sym_eigvals(SymMat(sandwich));
  if (!(ev.minCoeff() > 0.0)) {
    throw NotPositiveDefinite("geodesic distance requires positive-definite inputs",
                              ev.minCoeff());
  }
  return ev.array().log().square().sum();
}

class Spd final : public Manifold {
 public:
  using Manifold::Manifold;

  double loss(const Ambient& y, const Ambient& z) const override {
    check_shape(y, "y");
    check_shape(z, "z");
    const SpdRoots r = spd_roots(y);
    return sum_log_sq(r.inv_sqrt * z * r.inv_sqrt);
  }

  AnchorSet prepare(std::vector<Ambient> anchors) const override {
    AnchorSet set = Manifold::prepare(std::move(anchors));
    set.aux.reserve(set.size());
    for (const auto& z : set.points) {
      set.aux.push_back(spd_fn(SymMat(z), SpectralFn::inv_sqrt).values());
      set.aux.back() = set.aux.back() * set.aux.back();
    }
    return set;
  }

  double objective(const Ambient& y, const AnchorSet& anchors,
                   std::span<const double> alpha) const override {
    check_shape(y, "y");
    if (alpha.size() != anchors.size()) {
      throw DimensionMismatch("alpha length differs from anchor count");
    }
    const SpdRoots r = spd_roots(y);
    double f = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      if (alpha[i] == 0.0) continue;
      f += alpha[i] * sum_log_sq(r.inv_sqrt * anchors.points[i] * r.inv_sqrt);
    }
    return f;
  }

  /// 2 sum_i alpha_i Y^{1/2} log(Y^{1/2} Z_i^{-1} Y^{1/2}) Y^{1/2}.
  Ambient gradient(const Ambient& y, const AnchorSet& anchors,
                   std::span<const double> alpha) const override {
    check_shape(y, "y");
    if (alpha.size() != anchors.size()) {
      throw DimensionMismatch("alpha length differs from anchor count");
    }
    const SpdRoots r = spd_roots(y);
    const bool cached = anchors.aux.size() == anchors.size();
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(y.rows(), y.cols());
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      if (alpha[i] == 0.0) continue;
      const Eigen::MatrixXd z_inv =
          cached ? anchors.aux[i] : Eigen::MatrixXd(anchors.points[i].inverse());
      acc += alpha[i] * spd_fn(SymMat(r.sqrt * z_inv * r.sqrt), SpectralFn::log).values();
    }
    return SymMat(2.0 * r.sqrt * acc * r.sqrt).values();
  }

  /// tr(Y^{-1} U Y^{-1} V).
  double inner(const Ambient& y, const Ambient& u, const Ambient& v) const override {
    const Eigen::MatrixXd y_inv = y.inverse();
    return (y_inv * u * y_inv * v).trace();
  }

  /// Exponential map Y^{1/2} exp(Y^{-1/2} V Y^{-1/2}) Y^{1/2}. Long steps can
  /// underflow eigenvalues below the clamp, so the result is projected.
  Ambient retract(const Ambient& y, const Ambient& v) const override {
    return project(*exp_map(y, v));
  }

  std::optional<Ambient> exp_map(const Ambient& y, const Ambient& v) const override {
    const SpdRoots r = spd_roots(y);
    const SymMat inner_exp = spd_fn(SymMat(r.inv_sqrt * v * r.inv_sqrt), SpectralFn::exp);
    return SymMat(r.sqrt * inner_exp.values() * r.sqrt).values();
  }

  Ambient project(const Ambient& p) const override {
    check_shape(p, "ambient point");
    if (!all_finite(p)) {
      throw NumericalError("cannot project non-finite matrix onto the SPD cone");
    }
    EigPair eig = sym_eig(SymMat(p));
    if (eig.eigvals.minCoeff() >= kSpdClamp) {
      return SymMat(p).values();
    }
    eig.eigvals = eig.eigvals.cwiseMax(kSpdClamp);
    return SymMat(eig.reconstruct()).values();
  }

  Ambient project_tangent(const Ambient&, const Ambient& v) const override {
    return SymMat(v).values();
  }

  void check_point(const Ambient& y) const override {
    check_shape(y, "point");
    if (!all_finite(y)) {
      throw ConfigError("SPD point has non-finite entries");
    }
    const double scale = std::max(1.0, y.norm());
    if ((y - y.transpose()).norm() > 1e-10 * scale) {
      throw ConfigError("SPD point is not symmetric");
    }
    // Clamped eigenvalues can lose a few ulps of the matrix norm on reassembly.
    const double smallest = sym_eigvals(SymMat(y)).minCoeff();
    if (smallest < kSpdClamp - 64 * std::numeric_limits<double>::epsilon() * scale) {
      throw NotPositiveDefinite("SPD point has eigenvalue below 1e-12", smallest);
    }
  }

  /// Haar eigenvectors, log-uniform eigenvalues in [0.1, 10].
  Ambient random_point(Rng& rng) const override {
    const int m = tag().dim;
    const Eigen::MatrixXd q = haar_orthogonal(m, rng);
    std::uniform_real_distribution<double> expo(std::log(0.1), std::log(10.0));
    Eigen::VectorXd lambda(m);
    for (int i = 0; i < m; ++i) lambda(i) = std::exp(expo(rng));
    return SymMat(q * lambda.asDiagonal() * q.transpose()).values();
  }
};

// ---------------------------------------------------------------------------
// eps-interior simplex with the Fisher metric, handled through the square-root
// map onto the positive orthant of the sphere.

Eigen::VectorXd clip_simplex(const Eigen::VectorXd& p, double eps) {
  if (!p.allFinite()) {
    throw NumericalError("cannot project non-finite coordinates onto the simplex");
  }
  const Eigen::Index m = p.size();
  Eigen::VectorXd q = p.cwiseMax(0.0);
  if (q.sum() <= 0.0) {
    return Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  }
  q /= q.sum();
  if (q.minCoeff() >= eps) {
    return q;
  }
  // Entries pinned at eps; the remaining mass is shared proportionally by the
  // free entries. Grows the pinned set until every free entry clears eps.
  std::vector<bool> pinned(m, false);
  for (;;) {
    double free_mass = 0.0;
    Eigen::Index n_pinned = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (pinned[i]) {
        ++n_pinned;
      } else {
        free_mass += q(i);
      }
    }
    const double target = 1.0 - static_cast<double>(n_pinned) * eps;
    bool changed = false;
    Eigen::VectorXd r(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      if (pinned[i]) {
        r(i) = eps;
      } else {
        r(i) = free_mass > 0.0 ? q(i) * target / free_mass
                               : target / static_cast<double>(m - n_pinned);
        if (r(i) < eps) {
          pinned[i] = true;
          changed = true;
        }
      }
    }
    if (!changed) {
      return r;
    }
  }
}

class Simplex final : public Manifold {
 public:
  using Manifold::Manifold;

  /// Squared Fisher distance arccos(sum_i sqrt(y_i z_i))^2, evaluated as the
  /// angle between the square-root vectors.
  double loss(const Ambient& y, const Ambient& z) const override {
    check_shape(y, "y");
    check_shape(z, "z");
    const double d =
        unit_angle(y.col(0).cwiseMax(0.0).cwiseSqrt(), z.col(0).cwiseMax(0.0).cwiseSqrt());
    return d * d;
  }

  AnchorSet prepare(std::vector<Ambient> anchors) const override {
    AnchorSet set = Manifold::prepare(std::move(anchors));
    set.aux.reserve(set.size());
    for (const auto& z : set.points) {
      set.aux.push_back(z.cwiseMax(0.0).cwiseSqrt());
    }
    return set;
  }

  double objective(const Ambient& y, const AnchorSet& anchors,
                   std::span<const double> alpha) const override {
    if (anchors.aux.size() != anchors.size()) {
      return Manifold::objective(y, anchors, alpha);
    }
    check_shape(y, "y");
    if (alpha.size() != anchors.size()) {
      throw DimensionMismatch("alpha length differs from anchor count");
    }
    const Eigen::VectorXd s = y.col(0).cwiseMax(0.0).cwiseSqrt();
    double f = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) {
      if (alpha[i] == 0.0) continue;
      const double theta = unit_angle(s, anchors.aux[i].col(0));
      f += alpha[i] * theta * theta;
    }
    return f;
  }

  /// Pull-back of the sphere gradient at sqrt(y): 2 sqrt(y) .* g_sphere.
  Ambient gradient(const Ambient& y, const AnchorSet& anchors,
                   std::span<const double> alpha) const override {
    check_shape(y, "y");
    if (alpha.size() != anchors.size()) {
      throw DimensionMismatch("alpha length differs from anchor count");
    }
    const Eigen::VectorXd s = y.col(0).cwiseSqrt();
    std::vector<Ambient> roots;
    const std::vector<Ambient>* sphere_anchors = &anchors.aux;
    if (anchors.aux.size() != anchors.size()) {
      roots.reserve(anchors.size());
      for (const auto& z : anchors.points) roots.push_back(z.cwiseSqrt());
      sphere_anchors = &roots;
    }
    const Eigen::VectorXd gs = sphere_gradient(s, *sphere_anchors, alpha);
    Eigen::VectorXd g = 2.0 * s.cwiseProduct(gs);
    g.array() -= g.mean();
    return g;
  }

  /// Fisher metric sum_i u_i v_i / (4 y_i), the pull-back of the sphere metric.
  double inner(const Ambient& y, const Ambient& u, const Ambient& v) const override {
    return (u.array() * v.array() / (4.0 * y.array())).sum();
  }

  Ambient retract(const Ambient& y, const Ambient& v) const override {
    const Eigen::VectorXd s = y.col(0).cwiseSqrt();
    const Eigen::VectorXd ds = v.col(0).cwiseQuotient(2.0 * s);
    const Eigen::VectorXd p = s + ds;
    const double n = p.norm();
    if (!(n > 1e-12) || !std::isfinite(n)) {
      throw DegenerateStep("simplex retraction through the sphere is undefined");
    }
    const Eigen::VectorXd moved = p / n;
    return clip_simplex(moved.cwiseProduct(moved), tag().eps);
  }

  Ambient project(const Ambient& p) const override {
    check_shape(p, "ambient point");
    return clip_simplex(p.col(0), tag().eps);
  }

  Ambient project_tangent(const Ambient&, const Ambient& v) const override {
    Eigen::VectorXd t = v.col(0);
    t.array() -= t.mean();
    return t;
  }

  void check_point(const Ambient& y) const override {
    check_shape(y, "point");
    const Eigen::VectorXd p = y.col(0);
    if (!p.allFinite() || std::abs(p.sum() - 1.0) > 1e-10 ||
        p.minCoeff() < tag().eps * (1.0 - 1e-12)) {
      throw ConfigError("simplex point must sum to 1 with entries >= eps");
    }
  }

  /// Dirichlet(1, ..., 1) clipped to the eps-interior.
  Ambient random_point(Rng& rng) const override {
    std::exponential_distribution<double> expo(1.0);
    Eigen::VectorXd g(tag().dim);
    for (int i = 0; i < tag().dim; ++i) g(i) = expo(rng);
    return clip_simplex(g / g.sum(), tag().eps);
  }
};

}  // namespace

std::unique_ptr<Manifold> make_manifold(const ManifoldTag& tag) {
  tag.validate();
  switch (tag.kind) {
    case ManifoldKind::euclidean:
      return std::make_unique<Euclidean>(tag);
    case ManifoldKind::sphere:
      return std::make_unique<Sphere>(tag);
    case ManifoldKind::spd:
      return std::make_unique<Spd>(tag);
    case ManifoldKind::simplex:
      return std::make_unique<Simplex>(tag);
  }
  throw ConfigError("unknown manifold kind");
}

// ---------------------------------------------------------------------------
// Tag-dispatched layer

double loss(const ManifoldTag& tag, const Ambient& y, const Ambient& z) {
  return make_manifold(tag)->loss(y, z);
}

double weighted_objective(const ManifoldTag& tag, const Ambient& y,
                          const std::vector<Ambient>& anchors,
                          std::span<const double> alpha) {
  const auto m = make_manifold(tag);
  return m->objective(y, m->prepare(anchors), alpha);
}

TangentVector grad_weighted_objective(const ManifoldTag& tag, const Ambient& y,
                                      const std::vector<Ambient>& anchors,
                                      std::span<const double> alpha) {
  const auto m = make_manifold(tag);
  return {y, m->gradient(y, m->prepare(anchors), alpha)};
}

Ambient retract(const ManifoldTag& tag, const Ambient& y, const TangentVector& v) {
  if (v.base.rows() != y.rows() || v.base.cols() != y.cols() ||
      (v.base - y).norm() > 1e-12 * std::max(1.0, y.norm())) {
    throw DimensionMismatch("tangent vector is not based at the retraction point");
  }
  return make_manifold(tag)->retract(y, v.ambient);
}

Ambient project_ambient(const ManifoldTag& tag, const Ambient& p) {
  return make_manifold(tag)->project(p);
}

Ambient random_point(const ManifoldTag& tag, Rng& rng) {
  return make_manifold(tag)->random_point(rng);
}

TangentVector random_tangent(const ManifoldTag& tag, const Ambient& y, Rng& rng) {
  return {y, make_manifold(tag)->random_tangent(y, rng)};
}

SpherePoint simplex_to_sphere(const SimplexPoint& y) {
  return SpherePoint(y.probs().cwiseSqrt());
}

SimplexPoint sphere_to_simplex(const SpherePoint& s, double eps) {
  if (s.coords().minCoeff() <= 0.0) {
    throw ConfigError("sphere point outside the open positive orthant has no simplex preimage");
  }
  return SimplexPoint(s.coords().cwiseProduct(s.coords()), eps);
}

double fisher_distance(const Eigen::VectorXd& y, const Eigen::VectorXd& z) {
  if (y.size() != z.size()) {
    throw DimensionMismatch("simplex points differ in dimension");
  }
  double b = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    b += std::sqrt(std::max(0.0, y(i) * z(i)));
  }
  return std::acos(clamp_unit(b));
}

Eigen::VectorXd sphere_exp(const Eigen::VectorXd& y, const Eigen::VectorXd& v) {
  const double n = v.norm();
  if (n == 0.0) return y;
  return std::cos(n) * y + std::sin(n) * v / n;
}

}  // namespace msp
