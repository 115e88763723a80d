#include <cmath>

#include "solver_kernels.hpp"
#include "varistore/grid_ops.hpp"
#include "varistore/solvers.hpp"

namespace varistore {

SolveReport pdhg(const ImageGrid& u0, const ImageGrid& W,
                 const SolverConfig& cfg, const SolveOptions& opts) {
  cfg.validate();
  const double lambda = detail::fixed_lambda(cfg, "pdhg");
  const Objective obj = weighted_tv_objective(W, lambda);
  obj.validate(u0);

  const double h = u0.spacing();
  // ||grad||^2 <= 8 / h^2, so tau sigma ||grad||^2 = 0.98.
  const double tau = 0.99 * h / std::sqrt(8.0);
  const double sigma = tau;
  const std::size_t n = u0.size();

  SolveReport report;
  detail::TraceRecorder recorder(report, u0, cfg, opts);

  ImageGrid u = u0;
  ImageGrid ubar = u0;
  std::vector<VectorField> b(1, VectorField(u0.width(), u0.height()));

  bool converged = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const VectorField g = forward_gradient(ubar);
    auto bx = b[0].x(), by = b[0].y();
    for (std::size_t i = 0; i < n; ++i) {
      bx[i] += sigma * g.x()[i];
      by[i] += sigma * g.y()[i];
    }
    project_dual(obj, b);

    const ImageGrid div = divergence(b[0], h);
    for (std::size_t i = 0; i < n; ++i) {
      const double next =
          (u[i] + tau * div[i] + tau * lambda * u0[i]) / (1.0 + tau * lambda);
      ubar[i] = 2.0 * next - u[i];
      u[i] = next;
    }
    if (recorder.record(it, obj, u, b)) {
      converged = true;
      break;
    }
  }
  recorder.finish(u, std::move(b), converged);
  return report;
}

}  // namespace varistore
