#pragma once

#include <span>
#include <variant>
#include <vector>

#include "varistore/image_grid.hpp"
#include "varistore/regularizers.hpp"

namespace varistore {

/// Fidelity weight lambda: a scalar or one value per pixel.
class FidelityWeight {
 public:
  FidelityWeight(double scalar = 1.0) : value_(scalar) {}  // NOLINT
  FidelityWeight(ImageGrid field) : value_(std::move(field)) {}  // NOLINT

  bool is_scalar() const noexcept {
    return std::holds_alternative<double>(value_);
  }
  double scalar() const { return std::get<double>(value_); }
  const ImageGrid& field() const { return std::get<ImageGrid>(value_); }

  double at(std::size_t i) const noexcept {
    return is_scalar() ? std::get<double>(value_)
                       : std::get<ImageGrid>(value_)[i];
  }
  double min() const;

 private:
  std::variant<double, ImageGrid> value_;
};

enum class GradientStencil { Forward, Backward };

/// Which difference stencils enter the regulariser.
///  - Symmetric: W h^2 / 2 * (phi(|grad+ u|) + phi(|grad- u|)) per pixel.
///  - ForwardOnly: W h^2 * phi(|grad+ u|) per pixel.
enum class ObjectiveForm { Symmetric, ForwardOnly };

/// E(u) = sum_s sum_p omega W_p phi(|K_s u|_p) h^2
///        + h^2 / 2 sum_p lambda_p (u_p - u0_p)^2,
/// with omega = 1/2 for the symmetric form and 1 for the forward-only form.
struct Objective {
  RegularizerSpec spec;
  ImageGrid weight;
  FidelityWeight lambda;
  ObjectiveForm form = ObjectiveForm::Symmetric;

  std::span<const GradientStencil> stencils() const noexcept;
  double stencil_weight() const noexcept {
    return form == ObjectiveForm::Symmetric ? 0.5 : 1.0;
  }

  /// Checks the spec, positivity of W and lambda, and shapes against u0.
  void validate(const ImageGrid& u0) const;
};

VectorField apply_stencil(GradientStencil s, const ImageGrid& u);
/// K^T q, i.e. the negated matching divergence.
ImageGrid apply_stencil_adjoint(GradientStencil s, const VectorField& q,
                                double spacing);

struct EnergyBreakdown {
  double regularization_term = 0.0;
  double fidelity_term = 0.0;
  double total = 0.0;
};

EnergyBreakdown evaluate_energy(const Objective& obj, const ImageGrid& u,
                                const ImageGrid& u0);

/// Radial projection of each dual field onto dom(phi*) scaled by omega W.
/// A no-op for penalties with unbounded conjugate domain.
void project_dual(const Objective& obj, std::span<VectorField> duals);

/// Fenchel dual objective
///   D(b) = h^2 [ -sum omega W phi*(|b| / (omega W)) - <u0, v> - sum v^2 / (2 lambda) ]
/// with v = -sum_s K_s^T b_s. Violations of the conjugate domain up to a
/// relative 1e-6 are projected away; larger ones throw NumericalError.
double evaluate_dual(const Objective& obj, std::span<const VectorField> duals,
                     const ImageGrid& u0);

/// The primal point paired with a dual: u = u0 + v / lambda.
ImageGrid primal_from_dual(const Objective& obj,
                           std::span<const VectorField> duals,
                           const ImageGrid& u0);

/// b_s = omega W phi'(|K_s u|) K_s u / |K_s u|, projected onto the dual
/// domain. Throws NumericalError for Tukey.
std::vector<VectorField> dual_from_primal(const Objective& obj,
                                          const ImageGrid& u);

/// Symmetric-form energy of the given penalty, lambda scalar or per pixel.
EnergyBreakdown discrete_energy(const ImageGrid& u, const ImageGrid& u0,
                                const ImageGrid& W, const RegularizerSpec& spec,
                                const FidelityWeight& lambda);

/// Weighted-TV objective shared by every solver in the comparison protocol:
/// h^2 sum W |grad+ u| + lambda / 2 h^2 sum (u - u0)^2.
Objective weighted_tv_objective(const ImageGrid& W, double lambda);
double primal_energy(const ImageGrid& u, const ImageGrid& u0,
                     const ImageGrid& W, double lambda);
double dual_energy(const VectorField& b, const ImageGrid& u0,
                   const ImageGrid& W, double lambda);

/// Both sides of ||u~ - u*||^2 <= (2 / lambda) |E(u~) - E(u*)|, with the
/// lattice-weighted norm h^2 sum and E the symmetric-form energy.
struct Lemma1Sides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

Lemma1Sides lemma1_sides(const ImageGrid& u_tilde, const ImageGrid& u_star,
                         const ImageGrid& u0, const ImageGrid& W,
                         const RegularizerSpec& spec, double lambda);

bool lemma1_check(const ImageGrid& u_tilde, const ImageGrid& u_star,
                  const ImageGrid& u0, const ImageGrid& W,
                  const RegularizerSpec& spec, double lambda);

}  // namespace varistore
