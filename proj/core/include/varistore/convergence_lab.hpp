#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "varistore/grid_ops.hpp"
#include "varistore/image_grid.hpp"
#include "varistore/regularizers.hpp"
#include "varistore/solvers.hpp"

namespace varistore {

/// Analytic test images on the unit square.
///  - Step: 0.25 for x < 1/2, 0.75 otherwise.
///  - Ramp: x.
///  - SmoothBump: 0.2 + 0.6 exp(-|p - (1/2, 1/2)|^2 / (2 * 0.15^2)).
enum class TestImageKind { Step, Ramp, SmoothBump };

std::string_view to_string(TestImageKind kind);
/// Accepts step, ramp, bump (or smoothbump).
TestImageKind parse_test_image_kind(std::string_view name);

ContinuousField test_image_function(TestImageKind kind);

/// Cell averages of the analytic image on an N x N lattice of the unit
/// square (spacing 1 / N). Throws InvalidArgument for N < 8.
ImageGrid synthesize_test_image(TestImageKind kind, std::size_t N);

/// Block average of a fine grid onto an N x N lattice of the same domain.
/// The fine size must be a multiple of N.
ImageGrid cell_average_down(const ImageGrid& fine, std::size_t N);

/// Least-squares slope of log(y) against log(x).
double fit_log_log_slope(std::span<const double> x, std::span<const double> y);

struct RefinementLevel {
  double h = 0.0;
  std::size_t N = 0;
};

struct RefinementStudy {
  std::vector<RefinementLevel> levels;
  std::vector<double> errors_l2;
  std::vector<double> energies;
  std::vector<int> iterations;
  double fitted_rate = 0.0;
  /// Clear when some error fails to decrease from one level to the next.
  bool errors_monotone = true;
  std::size_t reference_N = 0;
  /// Threshold used on every level.
  double k = 0.0;
};

struct RefinementOptions {
  /// Reference lattice size as a multiple of the finest study level.
  std::size_t reference_factor = 4;
  double reference_gap_tol = 1e-8;
  int reference_max_iters = 20000;
  /// Split Bregman penalty per level as q mu h^2, where mu is the fidelity
  /// weight (cfg.mu, or the lambda value when unset). This keeps the
  /// pixel-scale conditioning of the u-subproblem independent of h. Zero
  /// keeps cfg as given, with penalty equal to lambda on every level.
  double penalty_ratio = 25.0;
  /// Threads used for the independent per-level solves.
  unsigned threads = 1;
};

/// Runs Split Bregman with W = 1 on every level of the unit square, using
/// one noise field drawn on the reference lattice and cell-averaged to each
/// level, and measures the L2 distance of each interpolated solution to the
/// interpolated reference solve. With spec.auto_k, k is the MAD threshold
/// of the reference-lattice input and is shared by every level.
RefinementStudy refinement_study(TestImageKind kind, double noise_sigma_255,
                                 std::uint64_t seed,
                                 std::span<const std::size_t> levels,
                                 const RegularizerSpec& spec,
                                 const SolverConfig& cfg,
                                 const RefinementOptions& options = {});

/// CSV with header h,N,error_l2,energy, one row per level, and a footer
/// row fitted_rate,<value>.
void write_study_csv(std::ostream& out, const RefinementStudy& study);

}  // namespace varistore
