#include "solver_kernels.hpp"
#include "varistore/solvers.hpp"

namespace varistore {

// Scaled-form ADMM on d = K u: the u-step, the d-step and the multiplier
// step coincide with the Bregman iteration once the penalty equals lambda.
SolveReport admm(const ImageGrid& u0, const ImageGrid& W,
                 const SolverConfig& cfg, const RegularizerSpec& spec,
                 const SolveOptions& opts) {
  return detail::run_splitting(u0, W, cfg, spec, opts, cfg.admm_penalty_scale);
}

}  // namespace varistore
