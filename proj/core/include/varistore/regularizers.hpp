#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "varistore/image_grid.hpp"

namespace varistore {

enum class RegularizerKind { Tikhonov, TV, Huber, Tukey, AdaptiveS };

std::string_view to_string(RegularizerKind kind);
/// Accepts tikhonov, tv, huber, tukey, adaptive (case-insensitive).
RegularizerKind parse_regularizer_kind(std::string_view name);

/// Penalty phi(s) on the gradient magnitude, with its parameters.
///
/// AdaptiveS is a s^2 below the threshold k and b s^2 + c |s| + d above it.
/// The linear coefficient and the offset are derived rather than free:
/// c = 2 (a - b) k and d = -(a - b) k^2 are the unique values that make phi
/// continuously differentiable at |s| = k.
struct RegularizerSpec {
  RegularizerKind kind = RegularizerKind::AdaptiveS;
  double k = 1.0;
  double a = 1.0;
  double b = 0.05;
  /// When set, k is replaced by the MAD estimate of the input image.
  bool auto_k = false;

  static RegularizerSpec tikhonov() { return {RegularizerKind::Tikhonov}; }
  static RegularizerSpec tv() { return {RegularizerKind::TV}; }
  static RegularizerSpec huber(double k) {
    return {RegularizerKind::Huber, k};
  }
  static RegularizerSpec tukey(double k) {
    return {RegularizerKind::Tukey, k};
  }
  static RegularizerSpec adaptive(double a, double b, double k) {
    return {RegularizerKind::AdaptiveS, k, a, b};
  }

  double c() const noexcept { return 2.0 * (a - b) * k; }
  double d() const noexcept { return -(a - b) * k * k; }

  bool convex() const noexcept { return kind != RegularizerKind::Tukey; }

  /// Throws InvalidArgument when the parameters break the kind's invariants.
  void validate() const;
};

double phi(const RegularizerSpec& spec, double s);
double phi_prime(const RegularizerSpec& spec, double s);

/// g(s) = phi'(s) / (2 s), with its limit at s = 0. TV uses the smoothed
/// magnitude sqrt(s^2 + 1e-12), which caps g(0) at 5e5.
double diffusivity(const RegularizerSpec& spec, double s);

/// Convex conjugate phi*(t) for t >= 0; +infinity outside the domain.
/// Throws NumericalError for the non-convex Tukey penalty.
double phi_conjugate(const RegularizerSpec& spec, double t);

/// Radius of dom(phi*): 1 for TV, k for Huber, +infinity otherwise.
double conjugate_domain_radius(const RegularizerSpec& spec);

/// argmin over rho >= 0 of weight * phi(rho) + (rho - r)^2 / 2, for r >= 0.
/// With TV this is soft thresholding by `weight`.
double proximal_radius(const RegularizerSpec& spec, double r, double weight);

/// Contrast sensitivity K and pre-smoothing width rho (pixels) of the edge
/// indicator.
struct EdgeWeightParams {
  double K = 10.0;
  double rho = 2.0;

  void validate() const;
};

/// 1 / (1 + K m^2) for a smoothed gradient magnitude m.
double edge_weight_from_magnitude(double K, double smoothed_magnitude);

/// W = 1 / (1 + K |G_rho * grad u0|^2), each gradient component smoothed
/// separately. Values lie in (0, 1].
ImageGrid edge_indicator(const ImageGrid& u0, const EdgeWeightParams& params);

/// Lower bound returned for images without gradient spread.
inline constexpr double kMadFloor = 1e-3;

/// 1.4826 * median(| m - median(m) |) of the given magnitudes, floored at
/// kMadFloor. Medians of even-length samples average the two middle values.
double mad_threshold_of(std::span<const double> magnitudes);

/// MAD threshold of the forward-gradient magnitudes of u.
double mad_threshold(const ImageGrid& u);

/// 1 / (eps^2 + |forward difference of u|) per pixel, using raw (unscaled)
/// neighbour differences with Neumann closure. With `normalize`, the field
/// is multiplied by eps^2 so that it lies in (0, 1].
ImageGrid adaptive_lambda(const ImageGrid& u_prev, double epsilon_sq = 1e-6,
                          bool normalize = false);

}  // namespace varistore
