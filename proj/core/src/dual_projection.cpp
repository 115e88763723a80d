#include <cmath>

#include "solver_kernels.hpp"
#include "varistore/grid_ops.hpp"
#include "varistore/solvers.hpp"

namespace varistore {

namespace {

// Gradient projection on the dual D(b) = -<u0, div b> - |div b|^2 / (2 lambda),
// whose gradient is grad(u0 + div b / lambda) with Lipschitz constant
// 8 / (h^2 lambda).
SolveReport dual_gradient_projection(const ImageGrid& u0, const ImageGrid& W,
                                     const SolverConfig& cfg,
                                     const SolveOptions& opts, bool momentum,
                                     std::string_view name) {
  cfg.validate();
  const double lambda = detail::fixed_lambda(cfg, name);
  const Objective obj = weighted_tv_objective(W, lambda);
  obj.validate(u0);

  const double h = u0.spacing();
  const double step = h * h * lambda / 8.0;
  const std::size_t n = u0.size();

  SolveReport report;
  detail::TraceRecorder recorder(report, u0, cfg, opts);

  std::vector<VectorField> b(1, VectorField(u0.width(), u0.height()));
  VectorField c = b[0];
  double t = 1.0;
  ImageGrid u = u0;

  bool converged = false;
  for (int it = 1; it <= cfg.max_iters; ++it) {
    const ImageGrid uc = primal_from_dual(obj, std::span(&c, 1), u0);
    const VectorField g = forward_gradient(uc);
    VectorField next = c;
    auto nx = next.x(), ny = next.y();
    for (std::size_t i = 0; i < n; ++i) {
      nx[i] += step * g.x()[i];
      ny[i] += step * g.y()[i];
    }
    project_dual(obj, std::span(&next, 1));

    if (momentum) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      const double beta = (t - 1.0) / t_next;
      auto cx = c.x(), cy = c.y();
      const auto px = b[0].x(), py = b[0].y();
      for (std::size_t i = 0; i < n; ++i) {
        cx[i] = nx[i] + beta * (nx[i] - px[i]);
        cy[i] = ny[i] + beta * (ny[i] - py[i]);
      }
      t = t_next;
    } else {
      c = next;
    }
    b[0] = std::move(next);

    u = primal_from_dual(obj, b, u0);
    if (recorder.record(it, obj, u, b)) {
      converged = true;
      break;
    }
  }
  recorder.finish(u, std::move(b), converged);
  return report;
}

}  // namespace

SolveReport proj_grad(const ImageGrid& u0, const ImageGrid& W,
                      const SolverConfig& cfg, const SolveOptions& opts) {
  return dual_gradient_projection(u0, W, cfg, opts, false, "proj_grad");
}

SolveReport fgp(const ImageGrid& u0, const ImageGrid& W,
                const SolverConfig& cfg, const SolveOptions& opts) {
  return dual_gradient_projection(u0, W, cfg, opts, true, "fgp");
}

}  // namespace varistore
