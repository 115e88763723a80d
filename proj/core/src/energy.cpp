#include "varistore/energy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "varistore/error.hpp"
#include "varistore/grid_ops.hpp"

namespace varistore {

namespace {

constexpr std::array<GradientStencil, 2> kSymmetric{GradientStencil::Forward,
                                                    GradientStencil::Backward};
constexpr std::array<GradientStencil, 1> kForward{GradientStencil::Forward};

constexpr double kDualTolerance = 1e-6;

void require_dual_count(const Objective& obj,
                        std::span<const VectorField> duals) {
  if (duals.size() != obj.stencils().size()) {
    throw InvalidArgument("dual: expected one field per stencil");
  }
}

// v = -sum_s K_s^T b_s
ImageGrid dual_image(const Objective& obj, std::span<const VectorField> duals,
                     double spacing) {
  ImageGrid v;
  for (std::size_t s = 0; s < duals.size(); ++s) {
    ImageGrid kt = apply_stencil_adjoint(obj.stencils()[s], duals[s], spacing);
    if (v.empty()) {
      v = ImageGrid(kt.width(), kt.height(), spacing);
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= kt[i];
  }
  return v;
}

}  // namespace

double FidelityWeight::min() const {
  return is_scalar() ? scalar() : field().min();
}

std::span<const GradientStencil> Objective::stencils() const noexcept {
  if (form == ObjectiveForm::Symmetric) return kSymmetric;
  return kForward;
}

void Objective::validate(const ImageGrid& u0) const {
  spec.validate();
  require_same_shape(weight, u0, "objective weight");
  if (!(weight.min() > 0.0)) {
    throw InvalidArgument("objective: edge weights must be positive");
  }
  if (!lambda.is_scalar()) require_same_shape(lambda.field(), u0, "lambda");
  if (!(lambda.min() >= 0.0)) {
    throw InvalidArgument("objective: lambda must be nonnegative");
  }
}

VectorField apply_stencil(GradientStencil s, const ImageGrid& u) {
  return s == GradientStencil::Forward ? forward_gradient(u)
                                       : backward_gradient(u);
}

ImageGrid apply_stencil_adjoint(GradientStencil s, const VectorField& q,
                                double spacing) {
  ImageGrid d = s == GradientStencil::Forward
                    ? divergence(q, spacing)
                    : backward_divergence(q, spacing);
  for (double& v : d.values()) v = -v;
  return d;
}

EnergyBreakdown evaluate_energy(const Objective& obj, const ImageGrid& u,
                                const ImageGrid& u0) {
  require_same_shape(u, u0, "energy");
  require_same_shape(obj.weight, u, "energy weight");
  const double h2 = u.spacing() * u.spacing();
  const double omega = obj.stencil_weight();

  EnergyBreakdown e;
  for (GradientStencil s : obj.stencils()) {
    const VectorField g = apply_stencil(s, u);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      acc += obj.weight[i] * phi(obj.spec, g.magnitude(i));
    }
    e.regularization_term += omega * h2 * acc;
  }
  double fid = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u[i] - u0[i];
    fid += obj.lambda.at(i) * r * r;
  }
  e.fidelity_term = 0.5 * h2 * fid;
  e.total = e.regularization_term + e.fidelity_term;
  return e;
}

void project_dual(const Objective& obj, std::span<VectorField> duals) {
  const double radius = conjugate_domain_radius(obj.spec);
  if (!std::isfinite(radius)) return;
  const double omega = obj.stencil_weight();
  for (VectorField& b : duals) {
    auto bx = b.x();
    auto by = b.y();
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double cap = omega * obj.weight[i] * radius;
      const double m = std::hypot(bx[i], by[i]);
      if (m > cap) {
        const double scale = cap / m;
        bx[i] *= scale;
        by[i] *= scale;
      }
    }
  }
}

double evaluate_dual(const Objective& obj, std::span<const VectorField> duals,
                     const ImageGrid& u0) {
  require_dual_count(obj, duals);
  const double h = u0.spacing();
  const double omega = obj.stencil_weight();
  const double radius = conjugate_domain_radius(obj.spec);

  std::vector<VectorField> b(duals.begin(), duals.end());
  if (std::isfinite(radius)) {
    for (const VectorField& f : b) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double cap = omega * obj.weight[i] * radius;
        if (f.magnitude(i) > cap * (1.0 + kDualTolerance) + 1e-15) {
          throw NumericalError("dual field violates its constraint at pixel " +
                               std::to_string(i));
        }
      }
    }
    project_dual(obj, b);
  }

  double conj = 0.0;
  if (obj.spec.kind != RegularizerKind::TV &&
      obj.spec.kind != RegularizerKind::Huber) {
    for (const VectorField& f : b) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double scale = omega * obj.weight[i];
        conj += scale * phi_conjugate(obj.spec, f.magnitude(i) / scale);
      }
    }
  } else if (obj.spec.kind == RegularizerKind::Huber) {
    for (const VectorField& f : b) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double scale = omega * obj.weight[i];
        const double t = std::min(f.magnitude(i) / scale, obj.spec.k);
        conj += scale * phi_conjugate(obj.spec, t);
      }
    }
  }

  const ImageGrid v = dual_image(obj, b, h);
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    lin += u0[i] * v[i];
    const double lam = obj.lambda.at(i);
    if (v[i] != 0.0) {
      if (!(lam > 0.0)) return -std::numeric_limits<double>::infinity();
      quad += v[i] * v[i] / (2.0 * lam);
    }
  }
  return h * h * (-conj - lin - quad);
}

ImageGrid primal_from_dual(const Objective& obj,
                           std::span<const VectorField> duals,
                           const ImageGrid& u0) {
  require_dual_count(obj, duals);
  ImageGrid u = dual_image(obj, duals, u0.spacing());
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = u0[i] + u[i] / obj.lambda.at(i);
  }
  return u;
}

std::vector<VectorField> dual_from_primal(const Objective& obj,
                                          const ImageGrid& u) {
  if (!obj.spec.convex()) {
    throw NumericalError("Tukey penalty is non-convex; no dual objective");
  }
  const double omega = obj.stencil_weight();
  std::vector<VectorField> duals;
  for (GradientStencil s : obj.stencils()) {
    VectorField g = apply_stencil(s, u);
    auto gx = g.x();
    auto gy = g.y();
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double m = std::hypot(gx[i], gy[i]);
      // phi'(m) / m = 2 g(m); finite at m = 0 for every convex kind.
      const double scale = omega * obj.weight[i] * 2.0 * diffusivity(obj.spec, m);
      gx[i] *= scale;
      gy[i] *= scale;
    }
    duals.push_back(std::move(g));
  }
  project_dual(obj, duals);
  return duals;
}

EnergyBreakdown discrete_energy(const ImageGrid& u, const ImageGrid& u0,
                                const ImageGrid& W, const RegularizerSpec& spec,
                                const FidelityWeight& lambda) {
  require_same_shape(u, u0, "discrete_energy");
  require_same_shape(W, u0, "discrete_energy weight");
  if (!lambda.is_scalar()) {
    require_same_shape(lambda.field(), u0, "discrete_energy lambda");
  }
  const Objective obj{spec, W, lambda, ObjectiveForm::Symmetric};
  return evaluate_energy(obj, u, u0);
}

Objective weighted_tv_objective(const ImageGrid& W, double lambda) {
  return Objective{RegularizerSpec::tv(), W, FidelityWeight(lambda),
                   ObjectiveForm::ForwardOnly};
}

double primal_energy(const ImageGrid& u, const ImageGrid& u0,
                     const ImageGrid& W, double lambda) {
  return evaluate_energy(weighted_tv_objective(W, lambda), u, u0).total;
}

double dual_energy(const VectorField& b, const ImageGrid& u0,
                   const ImageGrid& W, double lambda) {
  if (!b.same_shape(u0)) throw InvalidArgument("dual_energy: shape mismatch");
  require_same_shape(W, u0, "dual_energy weight");
  const Objective obj = weighted_tv_objective(W, lambda);
  return evaluate_dual(obj, std::span<const VectorField>(&b, 1), u0);
}

Lemma1Sides lemma1_sides(const ImageGrid& u_tilde, const ImageGrid& u_star,
                         const ImageGrid& u0, const ImageGrid& W,
                         const RegularizerSpec& spec, double lambda) {
  require_same_shape(u_tilde, u_star, "lemma1_check");
  if (!(lambda > 0.0)) throw InvalidArgument("lemma1_check: lambda must be > 0");
  const double h2 = u_tilde.spacing() * u_tilde.spacing();
  double norm_sq = 0.0;
  for (std::size_t i = 0; i < u_tilde.size(); ++i) {
    const double d = u_tilde[i] - u_star[i];
    norm_sq += d * d;
  }
  Lemma1Sides sides;
  sides.lhs = h2 * norm_sq;
  const double e_tilde = discrete_energy(u_tilde, u0, W, spec, lambda).total;
  const double e_star = discrete_energy(u_star, u0, W, spec, lambda).total;
  sides.rhs = 2.0 / lambda * std::abs(e_tilde - e_star);
  // Round-off allowance so that u* = u~ reports 0 <= 0.
  sides.holds = sides.lhs <= sides.rhs + 1e-14 * (1.0 + std::abs(e_tilde));
  return sides;
}

bool lemma1_check(const ImageGrid& u_tilde, const ImageGrid& u_star,
                  const ImageGrid& u0, const ImageGrid& W,
                  const RegularizerSpec& spec, double lambda) {
  return lemma1_sides(u_tilde, u_star, u0, W, spec, lambda).holds;
}

}  // namespace varistore
