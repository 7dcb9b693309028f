#pragma once

#include <span>
#include <vector>

#include "msp/manifolds.hpp"

namespace msp {

struct RgdConfig {
  int max_iters = 500;
  double grad_tol = 1e-8;  // on the ambient norm of the gradient
  double init_step = 1.0;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 30;

  /// Throws ConfigError when a field is out of range.
  void validate() const;

  friend bool operator==(const RgdConfig&, const RgdConfig&) = default;
};

struct RgdTrace {
  int iterations_run = 0;
  double final_grad_norm = 0.0;
  std::vector<double> objective_history;
  bool converged = false;
  /// Backtracking exhausted; the last accepted iterate was returned.
  bool line_search_failed = false;
  /// Stopped at a cusp minimum on the cut locus of a negatively weighted anchor.
  bool cut_locus_stop = false;
  /// Number of restarts from a perturbed initial point.
  int restarts = 0;
};

struct RgdResult {
  Ambient point;
  RgdTrace trace;
};

/// Riemannian gradient descent on F(y) = sum_i alpha_i loss(y, anchor_i):
/// y_{t+1} = R_{y_t}(-eta_t grad F(y_t)) with backtracking Armijo steps
/// F(y_{t+1}) <= F(y_t) - c eta_t |grad F(y_t)|_y^2. eta_t is taken from the
/// grid init_step * backtrack_factor^k: the first step satisfying the Armijo
/// condition, then further halvings while F keeps decreasing.
///
/// Trial points on the cut locus of a positively weighted anchor are rejected
/// by the line search. Accepting a point on the cut locus of a negatively
/// weighted anchor ends the descent there (RgdTrace::cut_locus_stop).
/// A SingularConfiguration at y0 triggers one restart from
/// retract(y0, 1e-3 v) with v a random unit tangent drawn from `rng`; without
/// an rng, or on a second failure, the error propagates.
RgdResult minimize(const Manifold& manifold, const AnchorSet& anchors,
                   std::span<const double> alpha, const Ambient& y0,
                   const RgdConfig& cfg, Rng* rng = nullptr);

RgdResult minimize(const ManifoldTag& tag, const std::vector<Ambient>& anchors,
                   std::span<const double> alpha, const Ambient& y0,
                   const RgdConfig& cfg, Rng* rng = nullptr);

}  // namespace msp
