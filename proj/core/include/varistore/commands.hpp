#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "varistore/image_grid.hpp"
#include "varistore/image_io.hpp"
#include "varistore/run_config.hpp"
#include "varistore/solvers.hpp"

namespace varistore {

inline constexpr std::array<double, 3> kCompareTolerances{1e-2, 1e-4, 1e-6};
inline constexpr std::array<SolverKind, 5> kCompareSolvers{
    SolverKind::SplitBregman, SolverKind::PDHG, SolverKind::FGP,
    SolverKind::ADMM, SolverKind::ProjGrad};

struct CompareRow {
  SolverKind solver = SolverKind::SplitBregman;
  /// First iteration whose gap is within each of kCompareTolerances, or -1.
  std::array<int, 3> iterations_to_tol{-1, -1, -1};
  int iterations = 0;
  double final_gap = 0.0;
  /// Against the reference; NaN without one.
  double psnr_db = 0.0;
  double mean_error = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  std::vector<SolveReport> reports;
};

/// Runs the five convex solvers on the weighted-TV objective until the gap
/// reaches the smallest tolerance or max_iters. Runs use up to `threads`
/// worker threads; results are ordered as kCompareSolvers.
CompareResult compare_solvers(const ImageGrid& u0, const ImageGrid& W,
                              double lambda, int max_iters,
                              const ImageGrid* reference, unsigned threads);

/// Number of compare workers from VARISTORE_THREADS (default 1).
unsigned threads_from_env();

/// First 1-based index with trace[i] <= tol, or -1.
int first_iteration_within(const std::vector<double>& trace, double tol);

/// Input image (file or synthetic), with noise added per channel when
/// configured (channel c uses seed + c) and spacing applied. When the input
/// is synthetic and no reference path is given, `clean` receives the
/// noise-free image.
Image load_input(const RunConfig& config, Image* clean = nullptr);

// Subcommands. Each writes only the paths named in the config and prints a
// summary to `log`. Errors propagate as varistore::Error subclasses.
void run_denoise(const RunConfig& config, std::ostream& log);
void run_compare(const RunConfig& config, std::ostream& log);
void run_convergence(const RunConfig& config, std::ostream& log);
void run_addnoise(const RunConfig& config, std::ostream& log);

}  // namespace varistore
