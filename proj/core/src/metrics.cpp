#include "varistore/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "varistore/energy.hpp"

namespace varistore {

namespace {

constexpr double kDualFloor = 1e-12;

}  // namespace

double psnr(const ImageGrid& u, const ImageGrid& reference) {
  require_same_shape(u, reference, "psnr");
  double sq = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = 255.0 * (u[i] - reference[i]);
    sq += d * d;
  }
  const double rmse = std::sqrt(sq / static_cast<double>(u.size()));
  if (rmse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 20.0 * std::log10(255.0 / rmse));
}

double mean_error(const ImageGrid& u, const ImageGrid& reference) {
  require_same_shape(u, reference, "mean_error");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += std::abs(u[i] - reference[i]);
  }
  return acc / static_cast<double>(u.size());
}

GapValue relative_gap(double primal, double dual) {
  if (dual <= kDualFloor) return {primal - dual, true};
  return {(primal - dual) / dual, false};
}

GapValue relative_duality_gap(const ImageGrid& u, const VectorField& b,
                              const ImageGrid& u0, const ImageGrid& W,
                              double lambda) {
  return relative_gap(primal_energy(u, u0, W, lambda),
                      dual_energy(b, u0, W, lambda));
}

}  // namespace varistore
