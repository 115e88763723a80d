#include "solver_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "varistore/error.hpp"
#include "varistore/metrics.hpp"

namespace varistore::detail {

EdgeSystem::EdgeSystem(const FidelityWeight& mu, const FidelityWeight& r,
                       std::span<const GradientStencil> stencils,
                       std::size_t width, std::size_t height, double spacing)
    : width_(width),
      height_(height),
      wx_(width * height, 0.0),
      wy_(width * height, 0.0),
      diag_(width * height, 0.0) {
  const bool fwd = std::ranges::find(stencils, GradientStencil::Forward) !=
                   stencils.end();
  const bool bwd = std::ranges::find(stencils, GradientStencil::Backward) !=
                   stencils.end();
  const double inv_h2 = 1.0 / (spacing * spacing);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t p = y * width + x;
      if (x + 1 < width) {
        wx_[p] = ((fwd ? r.at(p) : 0.0) + (bwd ? r.at(p + 1) : 0.0)) * inv_h2;
      }
      if (y + 1 < height) {
        wy_[p] =
            ((fwd ? r.at(p) : 0.0) + (bwd ? r.at(p + width) : 0.0)) * inv_h2;
      }
    }
  }
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const std::size_t p = y * width + x;
      double d = mu.at(p) + wx_[p] + wy_[p];
      if (x > 0) d += wx_[p - 1];
      if (y > 0) d += wy_[p - width];
      diag_[p] = d;
    }
  }
}

void EdgeSystem::gauss_seidel(ImageGrid& u, const ImageGrid& rhs,
                              int sweeps) const {
  const std::size_t w = width_;
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t y = 0; y < height_; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const std::size_t p = y * w + x;
        double acc = rhs[p];
        if (x + 1 < w) acc += wx_[p] * u[p + 1];
        if (x > 0) acc += wx_[p - 1] * u[p - 1];
        if (y + 1 < height_) acc += wy_[p] * u[p + w];
        if (y > 0) acc += wy_[p - w] * u[p - w];
        u[p] = acc / diag_[p];
      }
    }
  }
}

void require_finite(const ImageGrid& u, int iteration) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i])) {
      throw NumericalError(
          "non-finite value at iteration " + std::to_string(iteration),
          iteration);
    }
  }
}

ImageGrid clamp01(const ImageGrid& u) {
  ImageGrid out = u;
  for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

TraceRecorder::TraceRecorder(SolveReport& report, const ImageGrid& u0,
                             const SolverConfig& cfg, const SolveOptions& opts)
    : report_(report),
      u0_(u0),
      cfg_(cfg),
      opts_(opts),
      previous_(u0),
      start_(std::chrono::steady_clock::now()) {
  if (opts.reference != nullptr) {
    require_same_shape(*opts.reference, u0, "solver reference");
  }
}

bool TraceRecorder::record(int iteration, const Objective& obj,
                           const ImageGrid& u,
                           std::span<const VectorField> dual) {
  require_finite(u, iteration);
  const EnergyBreakdown e = evaluate_energy(obj, u, u0_);
  GapValue gap{std::numeric_limits<double>::infinity(), true};
  if (obj.spec.convex() && !dual.empty()) {
    gap = relative_gap(e.total, evaluate_dual(obj, dual, u0_));
  }
  report_.energy_trace.push_back(e);
  report_.gap_trace.push_back(gap.value);
  report_.gap_absolute.push_back(gap.absolute);
  if (opts_.reference != nullptr) {
    report_.me_trace.push_back(mean_error(u, *opts_.reference));
  } else {
    report_.me_trace.push_back(mean_error(u, previous_));
    previous_ = u;
  }
  report_.iterations = iteration;
  return gap.value <= cfg_.gap_tol;
}

void TraceRecorder::finish(const ImageGrid& u, std::vector<VectorField> dual,
                           bool converged) {
  report_.unclamped = u;
  report_.restored = clamp01(u);
  report_.dual = std::move(dual);
  report_.terminated_by = converged ? Termination::GapTol : Termination::MaxIters;
  report_.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
          .count();
}

double fixed_lambda(const SolverConfig& cfg, std::string_view solver) {
  if (cfg.lambda_policy.is_adaptive()) {
    throw InvalidArgument(std::string(solver) +
                          " supports a scalar lambda only");
  }
  return cfg.lambda_policy.value;
}

}  // namespace varistore::detail
