#include "varistore/regularizers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "varistore/error.hpp"
#include "varistore/grid_ops.hpp"

namespace varistore {

namespace {

constexpr double kTvSmoothingSq = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double sign(double s) { return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0); }

double median_in_place(std::vector<double>& v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

std::string_view to_string(RegularizerKind kind) {
  switch (kind) {
    case RegularizerKind::Tikhonov: return "tikhonov";
    case RegularizerKind::TV: return "tv";
    case RegularizerKind::Huber: return "huber";
    case RegularizerKind::Tukey: return "tukey";
    case RegularizerKind::AdaptiveS: return "adaptive";
  }
  return "unknown";
}

RegularizerKind parse_regularizer_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "tikhonov") return RegularizerKind::Tikhonov;
  if (lower == "tv") return RegularizerKind::TV;
  if (lower == "huber") return RegularizerKind::Huber;
  if (lower == "tukey") return RegularizerKind::Tukey;
  if (lower == "adaptive" || lower == "adaptives" || lower == "adaptive_s") {
    return RegularizerKind::AdaptiveS;
  }
  throw InvalidArgument("unknown regularizer '" + std::string(name) + "'");
}

void RegularizerSpec::validate() const {
  switch (kind) {
    case RegularizerKind::Tikhonov:
    case RegularizerKind::TV:
      return;
    case RegularizerKind::Huber:
    case RegularizerKind::Tukey:
      if (!(k > 0.0)) throw InvalidArgument("regularizer: k must be > 0");
      return;
    case RegularizerKind::AdaptiveS:
      if (!(k > 0.0)) throw InvalidArgument("regularizer: k must be > 0");
      if (!(b > 0.0 && b < 1.0)) {
        throw InvalidArgument("regularizer: adaptive b must lie in (0, 1)");
      }
      if (!(a > b)) {
        throw InvalidArgument("regularizer: adaptive a must exceed b");
      }
      return;
  }
}

double phi(const RegularizerSpec& spec, double s) {
  const double m = std::abs(s);
  const double k = spec.k;
  switch (spec.kind) {
    case RegularizerKind::Tikhonov:
      return m * m;
    case RegularizerKind::TV:
      return m;
    case RegularizerKind::Huber:
      return m < k ? 0.5 * m * m : k * (m - 0.5 * k);
    case RegularizerKind::Tukey: {
      if (m >= k) return k * k / 6.0;
      const double r = 1.0 - m * m / (k * k);
      return k * k / 6.0 * (1.0 - r * r * r);
    }
    case RegularizerKind::AdaptiveS:
      return m < k ? spec.a * m * m : spec.b * m * m + spec.c() * m + spec.d();
  }
  return 0.0;
}

double phi_prime(const RegularizerSpec& spec, double s) {
  const double m = std::abs(s);
  const double k = spec.k;
  switch (spec.kind) {
    case RegularizerKind::Tikhonov:
      return 2.0 * s;
    case RegularizerKind::TV:
      return sign(s);
    case RegularizerKind::Huber:
      return m < k ? s : k * sign(s);
    case RegularizerKind::Tukey: {
      if (m >= k) return 0.0;
      const double r = 1.0 - m * m / (k * k);
      return s * r * r;
    }
    case RegularizerKind::AdaptiveS:
      return m < k ? 2.0 * spec.a * s : 2.0 * spec.b * s + spec.c() * sign(s);
  }
  return 0.0;
}

double diffusivity(const RegularizerSpec& spec, double s) {
  const double m = std::abs(s);
  const double k = spec.k;
  switch (spec.kind) {
    case RegularizerKind::Tikhonov:
      return 1.0;
    case RegularizerKind::TV:
      return 0.5 / std::sqrt(m * m + kTvSmoothingSq);
    case RegularizerKind::Huber:
      return m < k ? 0.5 : 0.5 * k / m;
    case RegularizerKind::Tukey: {
      if (m >= k) return 0.0;
      const double r = 1.0 - m * m / (k * k);
      return 0.5 * r * r;
    }
    case RegularizerKind::AdaptiveS:
      return m < k ? spec.a : spec.b + 0.5 * spec.c() / m;
  }
  return 0.0;
}

double phi_conjugate(const RegularizerSpec& spec, double t) {
  t = std::abs(t);
  switch (spec.kind) {
    case RegularizerKind::Tikhonov:
      return 0.25 * t * t;
    case RegularizerKind::TV:
      return t <= 1.0 ? 0.0 : kInf;
    case RegularizerKind::Huber:
      return t <= spec.k ? 0.5 * t * t : kInf;
    case RegularizerKind::Tukey:
      throw NumericalError("Tukey penalty is non-convex; no dual objective");
    case RegularizerKind::AdaptiveS: {
      const double knee = 2.0 * spec.a * spec.k;
      if (t < knee) return 0.25 * t * t / spec.a;
      const double shifted = t - spec.c();
      return 0.25 * shifted * shifted / spec.b - spec.d();
    }
  }
  return kInf;
}

double conjugate_domain_radius(const RegularizerSpec& spec) {
  switch (spec.kind) {
    case RegularizerKind::TV: return 1.0;
    case RegularizerKind::Huber: return spec.k;
    default: return kInf;
  }
}

double proximal_radius(const RegularizerSpec& spec, double r, double weight) {
  const double k = spec.k;
  switch (spec.kind) {
    case RegularizerKind::Tikhonov:
      return r / (1.0 + 2.0 * weight);
    case RegularizerKind::TV:
      return std::max(r - weight, 0.0);
    case RegularizerKind::Huber: {
      const double inner = r / (1.0 + weight);
      return inner < k ? inner : r - weight * k;
    }
    case RegularizerKind::Tukey:
      throw NumericalError("Tukey penalty is non-convex; no proximal map");
    case RegularizerKind::AdaptiveS: {
      const double inner = r / (1.0 + 2.0 * spec.a * weight);
      if (inner < k) return inner;
      return std::max(0.0, (r - weight * spec.c()) / (1.0 + 2.0 * spec.b * weight));
    }
  }
  return r;
}

void EdgeWeightParams::validate() const {
  if (!(K > 0.0)) throw InvalidArgument("edge indicator: K must be > 0");
  if (!(rho > 0.0)) throw InvalidArgument("edge indicator: rho must be > 0");
}

double edge_weight_from_magnitude(double K, double smoothed_magnitude) {
  return 1.0 / (1.0 + K * smoothed_magnitude * smoothed_magnitude);
}

ImageGrid edge_indicator(const ImageGrid& u0, const EdgeWeightParams& params) {
  params.validate();
  const VectorField g = forward_gradient(u0);
  const double h = u0.spacing();
  const ImageGrid gx = gaussian_convolve(
      ImageGrid(u0.width(), u0.height(), h,
                std::vector<double>(g.x().begin(), g.x().end())),
      params.rho);
  const ImageGrid gy = gaussian_convolve(
      ImageGrid(u0.width(), u0.height(), h,
                std::vector<double>(g.y().begin(), g.y().end())),
      params.rho);
  ImageGrid w(u0.width(), u0.height(), h);
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = edge_weight_from_magnitude(params.K, std::hypot(gx[i], gy[i]));
  }
  return w;
}

double mad_threshold_of(std::span<const double> magnitudes) {
  if (magnitudes.empty()) return kMadFloor;
  std::vector<double> v(magnitudes.begin(), magnitudes.end());
  const double med = median_in_place(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = std::abs(magnitudes[i] - med);
  }
  const double mad = median_in_place(v);
  return std::max(1.4826 * mad, kMadFloor);
}

double mad_threshold(const ImageGrid& u) {
  const VectorField g = forward_gradient(u);
  std::vector<double> mags(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) mags[i] = g.magnitude(i);
  return mad_threshold_of(mags);
}

ImageGrid adaptive_lambda(const ImageGrid& u_prev, double epsilon_sq,
                          bool normalize) {
  if (u_prev.empty()) throw InvalidArgument("adaptive_lambda: empty grid");
  if (!(epsilon_sq > 0.0)) {
    throw InvalidArgument("adaptive_lambda: epsilon^2 must be > 0");
  }
  const std::size_t w = u_prev.width(), hgt = u_prev.height();
  ImageGrid lam(w, hgt, u_prev.spacing());
  for (std::size_t y = 0; y < hgt; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double dx = x + 1 < w ? u_prev(x + 1, y) - u_prev(x, y) : 0.0;
      const double dy = y + 1 < hgt ? u_prev(x, y + 1) - u_prev(x, y) : 0.0;
      const double value = 1.0 / (epsilon_sq + std::hypot(dx, dy));
      lam(x, y) = normalize ? epsilon_sq * value : value;
    }
  }
  return lam;
}

}  // namespace varistore
