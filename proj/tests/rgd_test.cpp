#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "msp/errors.hpp"
#include "msp/rgd.hpp"
#include "test_util.hpp"

using namespace msp;

namespace {

Ambient e(int d, int k) { return Eigen::VectorXd::Unit(d, k); }

double dist(const ManifoldTag& tag, const Ambient& a, const Ambient& b) {
  return std::sqrt(loss(tag, a, b));
}

// Gradient descent on sum_i a_i |y - z_i|^2: backtrack to the first Armijo
// step, then keep halving while the objective improves.
struct PlainGd {
  std::vector<Eigen::VectorXd> history;
  Eigen::VectorXd point;
};

PlainGd plain_gd(const std::vector<Eigen::VectorXd>& zs, const std::vector<double>& a,
                 Eigen::VectorXd y, const RgdConfig& cfg) {
  auto f = [&](const Eigen::VectorXd& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) s += a[i] * (p - zs[i]).squaredNorm();
    return s;
  };
  auto grad = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(p.size());
    for (std::size_t i = 0; i < zs.size(); ++i) g += 2.0 * a[i] * (p - zs[i]);
    return g;
  };
  PlainGd out;
  out.history.push_back(y);
  for (int t = 0; t < cfg.max_iters; ++t) {
    const Eigen::VectorXd g = grad(y);
    if (g.norm() <= cfg.grad_tol) break;
    double eta = cfg.init_step;
    double best_eta = -1.0, best_f = 0.0;
    for (int b = 0; b < cfg.max_backtracks; ++b, eta *= cfg.backtrack_factor) {
      const double ft = f(y - eta * g);
      const bool armijo = ft <= f(y) - cfg.armijo_c * eta * g.squaredNorm();
      if (best_eta > 0.0 && (!armijo || ft >= best_f)) break;
      if (armijo) {
        best_eta = eta;
        best_f = ft;
      }
    }
    if (best_eta < 0.0) break;
    y = y - best_eta * g;
    out.history.push_back(y);
  }
  out.point = y;
  return out;
}

}  // namespace

TEST(RgdConfig, Validation) {
  EXPECT_NO_THROW(RgdConfig{}.validate());
  RgdConfig c;
  c.max_iters = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.armijo_c = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.backtrack_factor = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.init_step = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.grad_tol = -1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Minimize, SingleAnchorSphere) {
  Rng rng(1);
  const auto tag = ManifoldTag::sphere(3);
  for (int k = 0; k < 10; ++k) {
    const Ambient z = random_point(tag, rng);
    const Ambient y0 = random_point(tag, rng);
    const std::vector<double> a{1.0};
    const RgdResult r = minimize(tag, {z}, a, y0, RgdConfig{});
    EXPECT_LE(dist(tag, r.point, z), 1e-6);
    EXPECT_TRUE(r.trace.converged);
  }
}

TEST(Minimize, SingleAnchorSpd) {
  Rng rng(2);
  const auto tag = ManifoldTag::spd(3);
  for (int k = 0; k < 10; ++k) {
    const Ambient z = test::random_spd(3, rng);
    const Ambient y0 = test::random_spd(3, rng);
    const std::vector<double> a{1.0};
    const RgdResult r = minimize(tag, {z}, a, y0, RgdConfig{});
    EXPECT_LE(dist(tag, r.point, z), 1e-6);
  }
}

TEST(Minimize, SingleAnchorSimplex) {
  Rng rng(3);
  const auto tag = ManifoldTag::simplex(4, 1e-3);
  for (int k = 0; k < 10; ++k) {
    const Ambient z = random_point(tag, rng);
    const Ambient y0 = random_point(tag, rng);
    const std::vector<double> a{1.0};
    const RgdResult r = minimize(tag, {z}, a, y0, RgdConfig{});
    EXPECT_LE(dist(tag, r.point, z), 1e-6);
  }
}

TEST(Minimize, SphereMidpointMatchesGrid) {
  const auto tag = ManifoldTag::sphere(3);
  const std::vector<Ambient> zs{e(3, 0), e(3, 1)};
  const std::vector<double> a{1.0, 1.0};
  const RgdResult r = minimize(tag, zs, a, e(3, 0), RgdConfig{});

  const int n = 100000;
  double best_f = 1e300;
  Ambient best;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    const Ambient y = Eigen::Vector3d(std::cos(t), std::sin(t), 0.0);
    const double f = weighted_objective(tag, y, zs, a);
    if (f < best_f) {
      best_f = f;
      best = y;
    }
  }
  EXPECT_LE((r.point - best).norm(), 1e-4);
  EXPECT_LE((r.point - (e(3, 0) + e(3, 1)) / std::sqrt(2.0)).norm(), 1e-5);
}

TEST(Minimize, ZeroWeightsReturnStart) {
  Rng rng(4);
  const auto tag = ManifoldTag::spd(2);
  const Ambient y0 = test::random_spd(2, rng);
  const std::vector<double> a{0.0, 0.0};
  const RgdResult r =
      minimize(tag, {test::random_spd(2, rng), test::random_spd(2, rng)}, a, y0, RgdConfig{});
  EXPECT_EQ(r.point, y0);
  EXPECT_TRUE(r.trace.converged);
  EXPECT_EQ(r.trace.iterations_run, 0);
  EXPECT_EQ(r.trace.objective_history.size(), 1u);
}

TEST(Minimize, MonotoneAndFeasibleOnMixedWeights) {
  Rng rng(5);
  std::uniform_real_distribution<double> ua(-1.0, 1.0);
  const std::vector<ManifoldTag> tags{ManifoldTag::sphere(3), ManifoldTag::spd(3),
                                      ManifoldTag::simplex(5, 1e-3), ManifoldTag::euclidean(2)};
  RgdConfig cfg;
  cfg.max_iters = 100;
  for (const auto& tag : tags) {
    const auto m = make_manifold(tag);
    for (int k = 0; k < 20; ++k) {
      std::vector<Ambient> zs;
      std::vector<double> a;
      for (int i = 0; i < 5; ++i) {
        zs.push_back(m->random_point(rng));
        a.push_back(ua(rng));
      }
      // Keep total weight positive so the objective is bounded below on the Euclidean space.
      a[0] = std::abs(a[0]) + 2.0;
      const Ambient y0 = m->random_point(rng);
      const RgdResult r = minimize(*m, m->prepare(zs), a, y0, cfg, &rng);
      const auto& h = r.trace.objective_history;
      for (std::size_t t = 1; t < h.size(); ++t) EXPECT_LE(h[t], h[t - 1]) << tag.name();
      EXPECT_TRUE(m->contains(r.point)) << tag.name();
      EXPECT_LE(h.back(), m->objective(y0, m->prepare(zs), a) + 1e-12) << tag.name();
    }
  }
}

TEST(Minimize, EuclideanMatchesPlainGradientDescent) {
  Rng rng(6);
  std::uniform_real_distribution<double> ua(0.1, 1.0);
  const auto tag = ManifoldTag::euclidean(4);
  RgdConfig cfg;
  cfg.init_step = 0.9;  // avoid exact one-step convergence so several iterates are compared
  for (int k = 0; k < 10; ++k) {
    std::vector<Ambient> zs;
    std::vector<Eigen::VectorXd> zv;
    std::vector<double> a;
    for (int i = 0; i < 4; ++i) {
      zv.push_back(gaussian_matrix(4, 1, rng));
      zs.push_back(zv.back());
      a.push_back(ua(rng));
    }
    const Eigen::VectorXd y0 = gaussian_matrix(4, 1, rng);
    const RgdResult r = minimize(tag, zs, a, y0, cfg);
    const PlainGd p = plain_gd(zv, a, y0, cfg);
    ASSERT_EQ(r.trace.objective_history.size(), p.history.size());
    for (std::size_t t = 0; t < p.history.size(); ++t) {
      double f = 0.0;
      for (std::size_t i = 0; i < zv.size(); ++i) f += a[i] * (p.history[t] - zv[i]).squaredNorm();
      EXPECT_NEAR(r.trace.objective_history[t], f, 1e-12 * std::max(1.0, std::abs(f)));
    }
    EXPECT_LE((r.point - p.point).norm(), 1e-12);
  }
}

TEST(Minimize, Deterministic) {
  Rng rng(7);
  const auto tag = ManifoldTag::spd(3);
  std::vector<Ambient> zs;
  for (int i = 0; i < 4; ++i) zs.push_back(test::random_spd(3, rng));
  const std::vector<double> a{0.5, 0.4, -0.1, 0.3};
  const Ambient y0 = zs[0];
  const RgdResult r1 = minimize(tag, zs, a, y0, RgdConfig{});
  const RgdResult r2 = minimize(tag, zs, a, y0, RgdConfig{});
  EXPECT_EQ(r1.point, r2.point);
  EXPECT_EQ(r1.trace.objective_history, r2.trace.objective_history);
}

TEST(Minimize, IterationCap) {
  const auto tag = ManifoldTag::sphere(3);
  RgdConfig cfg;
  cfg.max_iters = 2;
  cfg.init_step = 0.01;
  const std::vector<double> a{1.0};
  const RgdResult r = minimize(tag, {e(3, 1)}, a, e(3, 0), cfg);
  EXPECT_EQ(r.trace.iterations_run, 2);
  EXPECT_FALSE(r.trace.converged);
}

TEST(Minimize, RestartFromCutLocusOfStart) {
  const auto tag = ManifoldTag::sphere(3);
  const std::vector<Ambient> zs{-e(3, 0), e(3, 1)};
  const std::vector<double> a{1.0, 0.5};
  EXPECT_THROW(minimize(tag, zs, a, e(3, 0), RgdConfig{}), SingularConfiguration);
  Rng rng(8);
  const RgdResult r = minimize(tag, zs, a, e(3, 0), RgdConfig{}, &rng);
  EXPECT_EQ(r.trace.restarts, 1);
  EXPECT_TRUE(make_manifold(tag)->contains(r.point));
  EXPECT_TRUE(r.trace.converged);
}

TEST(Minimize, StopsAtCuspOfNegativeAnchor) {
  // F = theta(y, e1)^2 - 0.5 theta(y, -e1)^2 has a cusp minimum at e1, which is
  // the cut locus of the negatively weighted anchor.
  const auto tag = ManifoldTag::sphere(3);
  const std::vector<Ambient> zs{e(3, 0), -e(3, 0)};
  const std::vector<double> a{1.0, -0.5};
  const Ambient y0 = Eigen::Vector3d(0.6, 0.8, 0.0);
  const RgdResult r = minimize(tag, zs, a, y0, RgdConfig{});
  EXPECT_TRUE(make_manifold(tag)->contains(r.point));
  EXPECT_LE(dist(tag, r.point, e(3, 0)), 1e-3);
  EXPECT_TRUE(r.trace.cut_locus_stop || r.trace.line_search_failed);
}

TEST(Minimize, RejectsInvalidStart) {
  const auto tag = ManifoldTag::sphere(3);
  const std::vector<double> a{1.0};
  EXPECT_THROW(minimize(tag, {e(3, 0)}, a, Eigen::Vector3d(1.0, 1.0, 0.0), RgdConfig{}),
               ConfigError);
  const std::vector<double> a2{1.0, 2.0};
  EXPECT_THROW(minimize(tag, {e(3, 0)}, a2, e(3, 1), RgdConfig{}), DimensionMismatch);
}

TEST(Minimize, UnboundedObjectiveStaysFinite) {
  const auto tag = ManifoldTag::euclidean(2);
  const std::vector<double> a{-1.0};
  RgdConfig cfg;
  cfg.max_iters = 40;
  const RgdResult r = minimize(tag, {Ambient(Eigen::Vector2d::Zero())}, a,
                               Ambient(Eigen::Vector2d(1.0, 0.0)), cfg);
  EXPECT_TRUE(r.point.allFinite());
  const auto& h = r.trace.objective_history;
  for (std::size_t t = 1; t < h.size(); ++t) EXPECT_LT(h[t], h[t - 1]);
}
