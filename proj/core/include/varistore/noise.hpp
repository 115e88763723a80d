#pragma once

#include <cstdint>

#include "varistore/image_grid.hpp"

namespace varistore {

/// Additive i.i.d. Gaussian noise, with sigma and mean on the 0-255 scale.
struct NoiseModel {
  double sigma_255 = 0.0;
  double mean_255 = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// u + n with n ~ N(mean / 255, (sigma / 255)^2) drawn from a seeded
/// mt19937_64 in pixel order. The result is not clamped.
ImageGrid add_noise(const ImageGrid& u, const NoiseModel& model);

}  // namespace varistore
