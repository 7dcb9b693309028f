#include "msp/rgd.hpp"

#include <cmath>
#include <optional>

#include "msp/errors.hpp"

namespace msp {

void RgdConfig::validate() const {
  if (max_iters < 1) throw ConfigError("max_iters must be positive");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol must be nonnegative");
  if (!(init_step > 0.0)) throw ConfigError("init_step must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw ConfigError("armijo_c must lie in (0, 1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw ConfigError("backtrack_factor must lie in (0, 1)");
  }
  if (max_backtracks < 1) throw ConfigError("max_backtracks must be positive");
}

namespace {

RgdResult descend(const Manifold& manifold, const AnchorSet& anchors,
                  std::span<const double> alpha, const Ambient& y0, const RgdConfig& cfg) {
  RgdResult out;
  Ambient y = y0;
  double f = manifold.objective(y, anchors, alpha);
  out.trace.objective_history.push_back(f);
  Ambient g = manifold.gradient(y, anchors, alpha);

  for (int t = 0;; ++t) {
    const double gnorm = g.norm();
    out.trace.final_grad_norm = gnorm;
    if (gnorm <= cfg.grad_tol) {
      out.trace.converged = true;
      break;
    }
    if (t == cfg.max_iters) {
      break;
    }
    const double g2 = manifold.inner(y, g, g);

    // Backtrack to the first step meeting the Armijo condition, then keep
    // halving while the objective still improves. Plain first-acceptance
    // bounces across the minimizer of a squared distance (eta = 1 mirrors the
    // iterate) and crawls on curved manifolds where the mirror is slightly closer.
    Ambient trial;
    Ambient g_trial;
    double f_trial = 0.0;
    bool accepted = false;
    int b = 0;
    double eta = cfg.init_step;
    while (!accepted && b < cfg.max_backtracks) {
      std::optional<Ambient> best;
      double f_best = 0.0;
      int b_best = -1;
      double eta_best = 0.0;
      for (; b < cfg.max_backtracks; ++b, eta *= cfg.backtrack_factor) {
        Ambient cand;
        double f_cand = 0.0;
        try {
          cand = manifold.retract(y, -eta * g);
          f_cand = manifold.objective(cand, anchors, alpha);
        } catch (const NumericalError&) {
          // Overlong steps can leave the domain of the matrix functions.
          if (best) break;
          continue;
        }
        const bool armijo = std::isfinite(f_cand) && f_cand <= f - cfg.armijo_c * eta * g2;
        if (!armijo || (best && f_cand >= f_best)) {
          if (best) break;
          continue;
        }
        best = std::move(cand);
        f_best = f_cand;
        b_best = b;
        eta_best = eta;
      }
      if (!best) break;
      // Resume below the chosen step if its gradient turns out to be undefined.
      b = b_best + 1;
      eta = eta_best * cfg.backtrack_factor;
      try {
        g_trial = manifold.gradient(*best, anchors, alpha);
      } catch (const SingularConfiguration& e) {
        if (alpha[e.anchor_index()] >= 0.0) {
          continue;
        }
        // Cut locus of a negatively weighted anchor: a cusp minimum of F, since
        // every direction increases that term at first order.
        out.trace.cut_locus_stop = true;
      }
      trial = std::move(*best);
      f_trial = f_best;
      accepted = true;
    }
    if (!accepted) {
      out.trace.line_search_failed = true;
      break;
    }
    y = std::move(trial);
    f = f_trial;
    out.trace.objective_history.push_back(f);
    ++out.trace.iterations_run;
    if (out.trace.cut_locus_stop) {
      break;
    }
    g = std::move(g_trial);
  }
  out.point = std::move(y);
  return out;
}

}  // namespace

RgdResult minimize(const Manifold& manifold, const AnchorSet& anchors,
                   std::span<const double> alpha, const Ambient& y0,
                   const RgdConfig& cfg, Rng* rng) {
  cfg.validate();
  if (alpha.size() != anchors.size()) {
    throw DimensionMismatch("alpha length differs from anchor count");
  }
  manifold.check_point(y0);
  try {
    return descend(manifold, anchors, alpha, y0, cfg);
  } catch (const SingularConfiguration&) {
    if (rng == nullptr) throw;
  }
  Ambient v = manifold.random_tangent(y0, *rng);
  const double n = manifold.norm(y0, v);
  if (n > 0.0) v /= n;
  const Ambient perturbed = manifold.retract(y0, 1e-3 * v);
  RgdResult out = descend(manifold, anchors, alpha, perturbed, cfg);
  out.trace.restarts = 1;
  return out;
}

RgdResult minimize(const ManifoldTag& tag, const std::vector<Ambient>& anchors,
                   std::span<const double> alpha, const Ambient& y0,
                   const RgdConfig& cfg, Rng* rng) {
  const auto manifold = make_manifold(tag);
  return minimize(*manifold, manifold->prepare(anchors), alpha, y0, cfg, rng);
}

}  // namespace msp
