#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "varistore/energy.hpp"
#include "varistore/image_grid.hpp"
#include "varistore/regularizers.hpp"

namespace varistore {

enum class SolverKind { SplitBregman, PDHG, ProjGrad, FGP, ADMM, ExplicitDiffusion };

std::string_view to_string(SolverKind kind);
/// Accepts split_bregman (or sb), pdhg, proj_grad, fgp, admm, diffusion.
SolverKind parse_solver_kind(std::string_view name);

/// Fidelity weight policy. Fixed uses `value` everywhere. Adaptive recomputes
/// value * adaptive_lambda(u_prev, epsilon_sq, normalize) once per outer
/// iteration from the previous iterate.
struct LambdaPolicy {
  enum class Mode { Fixed, Adaptive };
  Mode mode = Mode::Fixed;
  double value = 10.0;
  double epsilon_sq = 1e-6;
  bool normalize = true;

  static LambdaPolicy fixed(double v) { return {Mode::Fixed, v}; }
  static LambdaPolicy adaptive(double scale = 1.0, double eps_sq = 1e-6,
                               bool normalize = true) {
    return {Mode::Adaptive, scale, eps_sq, normalize};
  }
  bool is_adaptive() const noexcept { return mode == Mode::Adaptive; }
};

struct SolverConfig {
  SolverKind solver = SolverKind::SplitBregman;
  LambdaPolicy lambda_policy;
  /// Fidelity weight of the splitting solvers under a fixed policy. When
  /// unset it equals lambda; lambda always sets the splitting penalty.
  std::optional<double> mu;
  double gap_tol = 1e-4;
  int max_iters = 1000;
  int inner_gs_sweeps = 1;
  /// Explicit diffusion step; 0 selects h^2 / (5 max(1, a)).
  double time_step = 0.0;
  /// ADMM penalty as a multiple of lambda; 1 reproduces Split Bregman.
  double admm_penalty_scale = 2.0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument on a broken invariant.
  void validate() const;
};

enum class Termination { GapTol, MaxIters };

struct SolveReport {
  /// Final iterate clamped to [0, 1].
  ImageGrid restored;
  /// Final iterate before clamping.
  ImageGrid unclamped;
  int iterations = 0;
  std::vector<EnergyBreakdown> energy_trace;
  std::vector<double> gap_trace;
  /// Set where the gap is an absolute difference (dual value near zero).
  std::vector<bool> gap_absolute;
  std::vector<double> me_trace;
  /// Final dual fields, one per stencil of the objective.
  std::vector<VectorField> dual;
  double wall_seconds = 0.0;
  Termination terminated_by = Termination::MaxIters;
};

/// Internal state of the splitting solvers after each Bregman update.
struct SplittingState {
  int iteration = 0;
  const ImageGrid* u = nullptr;
  std::span<const VectorField> d;
  std::span<const VectorField> e;
};

struct SolveOptions {
  ObjectiveForm form = ObjectiveForm::Symmetric;
  /// When set, me_trace is measured against it; otherwise against the
  /// previous iterate.
  const ImageGrid* reference = nullptr;
  std::function<void(const SplittingState&)> on_splitting_iteration;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

/// x / |x| * max(|x| - gamma, 0), with shrink(0, gamma) = 0.
/// Throws InvalidArgument for gamma < 0.
Vec2 shrink(Vec2 x, double gamma);

/// Split Bregman for W phi over the stencils of opts.form. Per iteration:
/// Gauss-Seidel sweeps on (mu - div lambda grad) u = mu u0 - grad^T(lambda (d - e)),
/// a proximal d-update (shrinkage for TV) with threshold omega W / lambda,
/// and e <- e + grad u - d. Rejects the Tukey penalty.
SolveReport split_bregman(const ImageGrid& u0, const ImageGrid& W,
                          const SolverConfig& cfg, const RegularizerSpec& spec,
                          const SolveOptions& opts = {});

/// ADMM in scaled form with penalty cfg.admm_penalty_scale * lambda.
SolveReport admm(const ImageGrid& u0, const ImageGrid& W,
                 const SolverConfig& cfg, const RegularizerSpec& spec,
                 const SolveOptions& opts = {});

/// Chambolle-Pock primal-dual iteration on the forward weighted-TV
/// objective with tau = sigma = 0.99 h / sqrt(8).
SolveReport pdhg(const ImageGrid& u0, const ImageGrid& W,
                 const SolverConfig& cfg, const SolveOptions& opts = {});

/// Projected gradient ascent on the weighted-TV dual, step h^2 lambda / 8.
SolveReport proj_grad(const ImageGrid& u0, const ImageGrid& W,
                      const SolverConfig& cfg, const SolveOptions& opts = {});

/// FGP: projected gradient on the dual with Nesterov momentum.
SolveReport fgp(const ImageGrid& u0, const ImageGrid& W,
                const SolverConfig& cfg, const SolveOptions& opts = {});

/// Forward Euler on u_t = -sum_s K_s^T(omega W g(|K_s u|) K_s u) - lambda/2 (u - u0),
/// the gradient flow of the discrete energy at half speed. Throws
/// NumericalError if the range of u exceeds ten times the input range.
SolveReport explicit_diffusion(const ImageGrid& u0, const ImageGrid& W,
                               const SolverConfig& cfg,
                               const RegularizerSpec& spec,
                               const SolveOptions& opts = {});

/// Dispatches on cfg.solver. The dual-based solvers (PDHG, ProjGrad, FGP)
/// require a TV spec and a fixed lambda, and always use the forward-only
/// form regardless of opts.form.
SolveReport solve(const ImageGrid& u0, const ImageGrid& W,
                  const SolverConfig& cfg, const RegularizerSpec& spec,
                  const SolveOptions& opts = {});

}  // namespace varistore
