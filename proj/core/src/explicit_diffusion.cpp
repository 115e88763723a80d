#include <algorithm>
#include <cmath>
#include <string>

#include "solver_kernels.hpp"
#include "varistore/error.hpp"
#include "varistore/solvers.hpp"

namespace varistore {

namespace {

double default_time_step(const RegularizerSpec& spec, double h) {
  const double gmax = spec.kind == RegularizerKind::AdaptiveS ? spec.a : 1.0;
  return h * h / (5.0 * std::max(1.0, gmax));
}

double range_of(const ImageGrid& u) { return u.max() - u.min(); }

}  // namespace

SolveReport explicit_diffusion(const ImageGrid& u0, const ImageGrid& W,
                               const SolverConfig& cfg,
                               const RegularizerSpec& spec,
                               const SolveOptions& opts) {
  cfg.validate();
  spec.validate();
  const double h = u0.spacing();
  const double dt = cfg.time_step > 0.0 ? cfg.time_step : default_time_step(spec, h);
  if (dt > h * h / 4.0) {
    throw InvalidArgument("explicit diffusion: time step exceeds h^2 / 4");
  }
  const LambdaPolicy& pol = cfg.lambda_policy;
  if (!(pol.value >= 0.0)) {
    throw InvalidArgument("explicit diffusion: lambda must be >= 0");
  }
  Objective obj{spec, W, FidelityWeight(pol.value), opts.form};
  obj.validate(u0);

  const auto stencils = obj.stencils();
  const double omega = obj.stencil_weight();
  const std::size_t n = u0.size();
  const double limit = 10.0 * range_of(u0);
  const bool has_dual = spec.convex() && pol.value > 0.0;

  SolveReport report;
  detail::TraceRecorder recorder(report, u0, cfg, opts);

  ImageGrid u = u0;
  ImageGrid update(u0.width(), u0.height(), h);
  std::vector<VectorField> dual;

  bool converged = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    if (pol.is_adaptive()) {
      ImageGrid lam = adaptive_lambda(u, pol.epsilon_sq, pol.normalize);
      for (double& v : lam.values()) v *= pol.value;
      obj.lambda = FidelityWeight(std::move(lam));
    }
    for (std::size_t i = 0; i < n; ++i) {
      update[i] = 0.5 * obj.lambda.at(i) * (u[i] - u0[i]);
    }
    for (GradientStencil s : stencils) {
      VectorField flux = apply_stencil(s, u);
      auto fx = flux.x(), fy = flux.y();
      for (std::size_t i = 0; i < n; ++i) {
        const double g =
            omega * W[i] * diffusivity(spec, std::hypot(fx[i], fy[i]));
        fx[i] *= g;
        fy[i] *= g;
      }
      const ImageGrid kt = apply_stencil_adjoint(s, flux, h);
      for (std::size_t i = 0; i < n; ++i) update[i] += kt[i];
    }
    for (std::size_t i = 0; i < n; ++i) u[i] -= dt * update[i];

    detail::require_finite(u, it);
    if (range_of(u) > limit + 1e-12) {
      throw NumericalError("explicit diffusion unstable at iteration " +
                               std::to_string(it),
                           it);
    }
    if (has_dual) dual = dual_from_primal(obj, u);
    if (recorder.record(it, obj, u, dual)) {
      converged = true;
      break;
    }
  }
  recorder.finish(u, std::move(dual), converged);
  return report;
}

}  // namespace varistore
