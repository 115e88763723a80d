#pragma once

#include <cstdint>
#include <random>

#include "varistore/convergence_lab.hpp"
#include "varistore/image_grid.hpp"
#include "varistore/noise.hpp"
#include "varistore/regularizers.hpp"

namespace fixtures {

using varistore::ImageGrid;
using varistore::VectorField;

inline ImageGrid random_grid(std::mt19937_64& rng, std::size_t w, std::size_t h,
                             double spacing = 1.0, double lo = 0.0,
                             double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  ImageGrid g(w, h, spacing);
  for (double& v : g.values()) v = dist(rng);
  return g;
}

inline VectorField random_field(std::mt19937_64& rng, std::size_t w,
                                std::size_t h, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  VectorField f(w, h);
  for (double& v : f.x()) v = dist(rng);
  for (double& v : f.y()) v = dist(rng);
  return f;
}

/// Noisy step on an N x N lattice with spacing h, plus its edge indicator.
struct StepFixture {
  ImageGrid clean;
  ImageGrid noisy;
  ImageGrid W;
};

inline StepFixture step_fixture(std::size_t N = 64, double sigma_255 = 20.0,
                                std::uint64_t seed = 7, double h = 0.2) {
  StepFixture f;
  f.clean = varistore::synthesize_test_image(varistore::TestImageKind::Step, N);
  f.clean.set_spacing(h);
  f.noisy = varistore::add_noise(f.clean, {sigma_255, 0.0, seed});
  f.W = varistore::edge_indicator(f.noisy, {});
  return f;
}

inline ImageGrid ones_like(const ImageGrid& u) {
  return ImageGrid(u.width(), u.height(), u.spacing(), 1.0);
}

}  // namespace fixtures
