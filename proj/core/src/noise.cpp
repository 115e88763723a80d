#include "varistore/noise.hpp"

#include <cmath>
#include <random>

#include "varistore/error.hpp"

namespace varistore {

void NoiseModel::validate() const {
  if (!(sigma_255 >= 0.0) || !std::isfinite(sigma_255)) {
    throw InvalidArgument("noise: sigma must be finite and >= 0");
  }
  if (!std::isfinite(mean_255)) throw InvalidArgument("noise: mean must be finite");
}

ImageGrid add_noise(const ImageGrid& u, const NoiseModel& model) {
  model.validate();
  ImageGrid out = u;
  if (model.sigma_255 == 0.0) {
    for (double& v : out.values()) v += model.mean_255 / 255.0;
    return out;
  }
  std::mt19937_64 rng(model.seed);
  std::normal_distribution<double> dist(model.mean_255 / 255.0,
                                        model.sigma_255 / 255.0);
  for (double& v : out.values()) v += dist(rng);
  return out;
}

}  // namespace varistore
