#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "varistore/convergence_lab.hpp"
#include "varistore/energy.hpp"
#include "varistore/noise.hpp"
#include "varistore/regularizers.hpp"
#include "varistore/solvers.hpp"

namespace varistore {

inline constexpr double kDefaultSpacing = 0.2;
/// Fidelity weight for images on the h = 0.2 lattice.
inline constexpr double kDefaultLambda = 10.0;
/// Fidelity weight for the unit-square refinement study: kDefaultLambda
/// rescaled from a 64-pixel, h = 0.2 domain (side 12.8) to side 1.
inline constexpr double kDefaultStudyLambda = 128.0;

/// Settings shared by the subcommands. Unset optionals fall back to the
/// subcommand's default.
struct RunConfig {
  std::filesystem::path input_path;
  std::filesystem::path output_path;
  std::filesystem::path trace_path;
  std::filesystem::path reference_path;
  std::filesystem::path out_dir;

  /// Analytic test image used instead of input_path.
  std::optional<TestImageKind> synthetic;
  std::size_t synthetic_size = 64;

  RegularizerSpec spec = [] {
    RegularizerSpec s = RegularizerSpec::adaptive(1.0, 0.05, 1.0);
    s.auto_k = true;
    return s;
  }();
  EdgeWeightParams edge;
  bool edge_weight = true;
  std::optional<ObjectiveForm> form;

  SolverConfig cfg;
  std::optional<double> lambda;
  std::optional<double> tol;
  std::optional<int> max_iters;

  std::optional<NoiseModel> noise;
  double spacing = kDefaultSpacing;

  TestImageKind study_kind = TestImageKind::SmoothBump;
  std::vector<std::size_t> levels{16, 32, 64, 128};
  double penalty_ratio = 25.0;
};

/// Applies one key=value setting. Keys:
///   kind (or reg), k, auto_k, a, b, K, rho, edge_weight, form, solver,
///   lambda, adaptive_lambda, epsilon_sq, normalize_lambda, mu, tol,
///   max_iters, gs_sweeps, time_step, admm_penalty_scale, seed, sigma,
///   spacing, synthetic, size, study_kind, levels, penalty_ratio.
/// Throws InvalidArgument for unknown keys or malformed values.
void apply_config_entry(RunConfig& config, std::string_view key,
                        std::string_view value);

/// Applies every non-empty, non-comment (#) line of key=value text.
void apply_config_text(RunConfig& config, std::string_view text);

/// Throws IoError when the file cannot be read.
void load_config_file(RunConfig& config, const std::filesystem::path& path);

/// Parses on/off, true/false, yes/no, 1/0.
bool parse_switch(std::string_view value);

}  // namespace varistore
