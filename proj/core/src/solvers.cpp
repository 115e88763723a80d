#include "varistore/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "varistore/error.hpp"

namespace varistore {

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::SplitBregman: return "split_bregman";
    case SolverKind::PDHG: return "pdhg";
    case SolverKind::ProjGrad: return "proj_grad";
    case SolverKind::FGP: return "fgp";
    case SolverKind::ADMM: return "admm";
    case SolverKind::ExplicitDiffusion: return "diffusion";
  }
  return "unknown";
}

SolverKind parse_solver_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::tolower(c));
  });
  if (s == "split_bregman" || s == "sb" || s == "splitbregman") {
    return SolverKind::SplitBregman;
  }
  if (s == "pdhg") return SolverKind::PDHG;
  if (s == "proj_grad" || s == "projgrad") return SolverKind::ProjGrad;
  if (s == "fgp") return SolverKind::FGP;
  if (s == "admm") return SolverKind::ADMM;
  if (s == "diffusion" || s == "explicit_diffusion") {
    return SolverKind::ExplicitDiffusion;
  }
  throw InvalidArgument("unknown solver '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  if (!(gap_tol > 0.0)) throw InvalidArgument("solver: gap_tol must be > 0");
  if (max_iters < 1) throw InvalidArgument("solver: max_iters must be >= 1");
  if (inner_gs_sweeps < 1) {
    throw InvalidArgument("solver: inner_gs_sweeps must be >= 1");
  }
  if (!(time_step >= 0.0) || !std::isfinite(time_step)) {
    throw InvalidArgument("solver: time_step must be >= 0");
  }
  if (!(admm_penalty_scale > 0.0)) {
    throw InvalidArgument("solver: ADMM penalty scale must be > 0");
  }
  if (!(lambda_policy.value >= 0.0) || !std::isfinite(lambda_policy.value)) {
    throw InvalidArgument("solver: lambda must be finite and >= 0");
  }
  if (!(lambda_policy.epsilon_sq > 0.0)) {
    throw InvalidArgument("solver: epsilon^2 must be > 0");
  }
  if (mu && !(*mu > 0.0)) throw InvalidArgument("solver: mu must be > 0");
}

Vec2 shrink(Vec2 x, double gamma) {
  if (!(gamma >= 0.0)) throw InvalidArgument("shrink: gamma must be >= 0");
  const double m = std::hypot(x.x, x.y);
  if (m <= gamma) return {};
  const double s = (m - gamma) / m;
  return {s * x.x, s * x.y};
}

SolveReport solve(const ImageGrid& u0, const ImageGrid& W,
                  const SolverConfig& cfg, const RegularizerSpec& spec,
                  const SolveOptions& opts) {
  const auto require_tv = [&] {
    if (spec.kind != RegularizerKind::TV) {
      throw InvalidArgument(std::string(to_string(cfg.solver)) +
                            " solves the weighted-TV objective only");
    }
  };
  switch (cfg.solver) {
    case SolverKind::SplitBregman: return split_bregman(u0, W, cfg, spec, opts);
    case SolverKind::ADMM: return admm(u0, W, cfg, spec, opts);
    case SolverKind::ExplicitDiffusion:
      return explicit_diffusion(u0, W, cfg, spec, opts);
    case SolverKind::PDHG: require_tv(); return pdhg(u0, W, cfg, opts);
    case SolverKind::ProjGrad: require_tv(); return proj_grad(u0, W, cfg, opts);
    case SolverKind::FGP: require_tv(); return fgp(u0, W, cfg, opts);
  }
  throw InvalidArgument("unknown solver");
}

}  // namespace varistore
