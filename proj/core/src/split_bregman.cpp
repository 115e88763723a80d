#include <cmath>
#include <optional>

#include "solver_kernels.hpp"
#include "varistore/error.hpp"
#include "varistore/regularizers.hpp"
#include "varistore/solvers.hpp"

namespace varistore {

namespace detail {

namespace {

FidelityWeight scaled(const FidelityWeight& w, double s) {
  if (w.is_scalar()) return FidelityWeight(s * w.scalar());
  ImageGrid f = w.field();
  for (double& v : f.values()) v *= s;
  return FidelityWeight(std::move(f));
}

FidelityWeight current_lambda(const SolverConfig& cfg, const ImageGrid& u) {
  const LambdaPolicy& pol = cfg.lambda_policy;
  if (!pol.is_adaptive()) return FidelityWeight(pol.value);
  return scaled(FidelityWeight(adaptive_lambda(u, pol.epsilon_sq, pol.normalize)),
                pol.value);
}

}  // namespace

SolveReport run_splitting(const ImageGrid& u0, const ImageGrid& W,
                          const SolverConfig& cfg, const RegularizerSpec& spec,
                          const SolveOptions& opts, double penalty_scale) {
  cfg.validate();
  if (!spec.convex()) {
    throw InvalidArgument("splitting solvers require a convex penalty");
  }
  if (!(cfg.lambda_policy.value > 0.0)) {
    throw InvalidArgument("splitting solvers require lambda > 0");
  }
  Objective obj{spec, W, FidelityWeight(1.0), opts.form};
  obj.validate(u0);

  const auto stencils = obj.stencils();
  const double omega = obj.stencil_weight();
  const double h = u0.spacing();
  const std::size_t n = u0.size();

  SolveReport report;
  TraceRecorder recorder(report, u0, cfg, opts);

  ImageGrid u = u0;
  std::vector<VectorField> d(stencils.size(), VectorField(u0.width(), u0.height()));
  std::vector<VectorField> e = d;
  std::vector<VectorField> b = d;

  FidelityWeight penalty;
  std::optional<EdgeSystem> system;
  auto update_weights = [&] {
    const FidelityWeight lam = current_lambda(cfg, u);
    obj.lambda = (cfg.mu && !cfg.lambda_policy.is_adaptive())
                     ? FidelityWeight(*cfg.mu)
                     : lam;
    penalty = scaled(lam, penalty_scale);
    system.emplace(obj.lambda, penalty, stencils, u0.width(), u0.height(), h);
  };
  update_weights();

  bool converged = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (cfg.lambda_policy.is_adaptive() && it > 1) update_weights();

    ImageGrid rhs(u0.width(), u0.height(), h);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = obj.lambda.at(i) * u0[i];
    for (std::size_t s = 0; s < stencils.size(); ++s) {
      VectorField q(u0.width(), u0.height());
      auto qx = q.x();
      auto qy = q.y();
      const auto dx = d[s].x(), dy = d[s].y(), ex = e[s].x(), ey = e[s].y();
      for (std::size_t i = 0; i < n; ++i) {
        qx[i] = penalty.at(i) * (dx[i] - ex[i]);
        qy[i] = penalty.at(i) * (dy[i] - ey[i]);
      }
      const ImageGrid kt = apply_stencil_adjoint(stencils[s], q, h);
      for (std::size_t i = 0; i < n; ++i) rhs[i] += kt[i];
    }
    system->gauss_seidel(u, rhs, cfg.inner_gs_sweeps);
    require_finite(u, it);

    for (std::size_t s = 0; s < stencils.size(); ++s) {
      const VectorField ku = apply_stencil(stencils[s], u);
      auto dx = d[s].x(), dy = d[s].y(), ex = e[s].x(), ey = e[s].y();
      auto bx = b[s].x(), by = b[s].y();
      const auto kx = ku.x(), ky = ku.y();
      for (std::size_t i = 0; i < n; ++i) {
        const double zx = kx[i] + ex[i];
        const double zy = ky[i] + ey[i];
        const double m = std::hypot(zx, zy);
        const double r = penalty.at(i);
        const double scale =
            m > 0.0 ? proximal_radius(spec, m, omega * W[i] / r) / m : 0.0;
        dx[i] = scale * zx;
        dy[i] = scale * zy;
        ex[i] = zx - dx[i];
        ey[i] = zy - dy[i];
        bx[i] = r * ex[i];
        by[i] = r * ey[i];
      }
    }

    if (opts.on_splitting_iteration) {
      opts.on_splitting_iteration(SplittingState{it, &u, d, e});
    }
    if (recorder.record(it, obj, u, b)) {
      converged = true;
      break;
    }
  }
  recorder.finish(u, std::move(b), converged);
  return report;
}

}  // namespace detail

SolveReport split_bregman(const ImageGrid& u0, const ImageGrid& W,
                          const SolverConfig& cfg, const RegularizerSpec& spec,
                          const SolveOptions& opts) {
  return detail::run_splitting(u0, W, cfg, spec, opts, 1.0);
}

}  // namespace varistore
