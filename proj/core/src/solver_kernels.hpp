#pragma once

#include <chrono>
#include <span>
#include <vector>

#include "varistore/energy.hpp"
#include "varistore/image_grid.hpp"
#include "varistore/solvers.hpp"

namespace varistore::detail {

/// Edge-weighted operator mu + sum_s K_s^T r K_s on the pixel lattice,
/// stored as one weight per horizontal and vertical edge.
class EdgeSystem {
 public:
  EdgeSystem(const FidelityWeight& mu, const FidelityWeight& r,
             std::span<const GradientStencil> stencils, std::size_t width,
             std::size_t height, double spacing);

  /// Lexicographic Gauss-Seidel sweeps on A u = rhs.
  void gauss_seidel(ImageGrid& u, const ImageGrid& rhs, int sweeps) const;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<double> wx_;
  std::vector<double> wy_;
  std::vector<double> diag_;
};

/// Throws NumericalError naming `iteration` if u holds a non-finite value.
void require_finite(const ImageGrid& u, int iteration);

ImageGrid clamp01(const ImageGrid& u);

/// Appends energy, gap and ME rows to a report and decides termination.
class TraceRecorder {
 public:
  TraceRecorder(SolveReport& report, const ImageGrid& u0,
                const SolverConfig& cfg, const SolveOptions& opts);

  /// Records iteration `iteration` (1-based). Returns true when the gap
  /// reached cfg.gap_tol.
  bool record(int iteration, const Objective& obj, const ImageGrid& u,
              std::span<const VectorField> dual);

  /// Stores the final iterate, dual and timing.
  void finish(const ImageGrid& u, std::vector<VectorField> dual,
              bool converged);

 private:
  SolveReport& report_;
  const ImageGrid& u0_;
  const SolverConfig& cfg_;
  const SolveOptions& opts_;
  ImageGrid previous_;
  std::chrono::steady_clock::time_point start_;
};

/// Shared body of Split Bregman and ADMM: penalty = penalty_scale * lambda.
SolveReport run_splitting(const ImageGrid& u0, const ImageGrid& W,
                          const SolverConfig& cfg, const RegularizerSpec& spec,
                          const SolveOptions& opts, double penalty_scale);

/// Scalar lambda of a dual-based solver; rejects the adaptive policy.
double fixed_lambda(const SolverConfig& cfg, std::string_view solver);

}  // namespace varistore::detail
