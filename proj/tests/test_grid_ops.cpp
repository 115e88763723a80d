#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "varistore/error.hpp"
#include "varistore/grid_ops.hpp"

using namespace varistore;

namespace {

// Independent reference: explicit 5-point stencil with mirrored neighbours.
double stencil_laplacian(const ImageGrid& u, std::size_t x, std::size_t y) {
  const std::size_t w = u.width(), h = u.height();
  const double c = u(x, y);
  const double l = x > 0 ? u(x - 1, y) : c;
  const double r = x + 1 < w ? u(x + 1, y) : c;
  const double d = y > 0 ? u(x, y - 1) : c;
  const double t = y + 1 < h ? u(x, y + 1) : c;
  return (l + r + d + t - 4.0 * c) / (u.spacing() * u.spacing());
}

}  // namespace

TEST_CASE("forward and backward differences on a small grid") {
  ImageGrid u(3, 2, 0.5, std::vector<double>{0, 1, 3, 2, 2, 2});
  const VectorField gp = forward_gradient(u);
  CHECK(gp.x()[0] == doctest::Approx(2.0));
  CHECK(gp.x()[1] == doctest::Approx(4.0));
  CHECK(gp.x()[2] == 0.0);
  CHECK(gp.y()[0] == doctest::Approx(4.0));
  CHECK(gp.y()[2] == doctest::Approx(-2.0));
  CHECK(gp.y()[3] == 0.0);
  const VectorField gm = backward_gradient(u);
  CHECK(gm.x()[0] == 0.0);
  CHECK(gm.x()[1] == doctest::Approx(2.0));
  CHECK(gm.y()[0] == 0.0);
  CHECK(gm.y()[5] == doctest::Approx(-2.0));
}

TEST_CASE("gradient of a constant vanishes") {
  const ImageGrid u(7, 5, 0.3, 0.42);
  const VectorField g = forward_gradient(u);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.magnitude(i) == 0.0);
}

TEST_CASE("divergence is the negative adjoint of both gradients") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> size(1, 32);
  std::uniform_real_distribution<double> hs(0.1, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t w = size(rng), h = size(rng);
    const double sp = hs(rng);
    const ImageGrid u = fixtures::random_grid(rng, w, h, sp, -1, 1);
    const VectorField p = fixtures::random_field(rng, w, h);
    const double lhs = inner_product(forward_gradient(u), p);
    const double rhs = -inner_product(u, divergence(p, sp));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
    const double lhs_b = inner_product(backward_gradient(u), p);
    const double rhs_b = -inner_product(u, backward_divergence(p, sp));
    CHECK(std::abs(lhs_b - rhs_b) <= 1e-12 * std::max(1.0, std::abs(lhs_b)));
  }
}

TEST_CASE("laplacian matches div(grad) and the explicit stencil") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const ImageGrid u = fixtures::random_grid(rng, 9 + trial, 4 + trial, 0.25);
    const ImageGrid a = laplacian(u);
    const ImageGrid b = divergence(forward_gradient(u), u.spacing());
    const ImageGrid c = backward_divergence(backward_gradient(u), u.spacing());
    for (std::size_t y = 0; y < u.height(); ++y) {
      for (std::size_t x = 0; x < u.width(); ++x) {
        CHECK(a(x, y) == doctest::Approx(stencil_laplacian(u, x, y)).epsilon(1e-12));
        CHECK(std::abs(a(x, y) - b(x, y)) <= 1e-12);
        CHECK(std::abs(a(x, y) - c(x, y)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("gaussian kernel is normalised, symmetric and of radius ceil(3 rho)") {
  for (double rho : {0.3, 1.0, 2.0, 2.5}) {
    const auto k = gaussian_kernel(rho);
    CHECK(k.size() == 2 * static_cast<std::size_t>(std::ceil(3 * rho)) + 1);
    CHECK(std::accumulate(k.begin(), k.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 0; i < k.size(); ++i) CHECK(k[i] == k[k.size() - 1 - i]);
  }
  CHECK_THROWS_AS(gaussian_kernel(0.0), InvalidArgument);
}

TEST_CASE("gaussian smoothing preserves constants and the mean") {
  std::mt19937_64 rng(3);
  const ImageGrid c(10, 6, 1.0, 0.7);
  const ImageGrid sc = gaussian_convolve(c, 2.0);
  for (double v : sc.values()) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));
  // Kernel wider than the image exercises repeated reflection.
  const ImageGrid u = fixtures::random_grid(rng, 5, 4);
  CHECK(gaussian_convolve(u, 3.0).mean() == doctest::Approx(u.mean()).epsilon(1e-13));
  const ImageGrid v = fixtures::random_grid(rng, 40, 30);
  CHECK(gaussian_convolve(v, 2.0).mean() == doctest::Approx(v.mean()).epsilon(1e-13));
}

TEST_CASE("piecewise-linear interpolant") {
  std::mt19937_64 rng(9);
  const ImageGrid u = fixtures::random_grid(rng, 6, 5, 0.5);
  const auto P = interpolate(u);
  CHECK(P.extent_x() == doctest::Approx(3.0));
  CHECK(P.extent_y() == doctest::Approx(2.5));
  SUBCASE("reproduces vertex values") {
    for (std::size_t y = 0; y < 5; ++y) {
      for (std::size_t x = 0; x < 6; ++x) {
        CHECK(P((x + 0.5) * 0.5, (y + 0.5) * 0.5) == doctest::Approx(u(x, y)));
      }
    }
  }
  SUBCASE("is exact for affine data inside the hull") {
    ImageGrid lin(6, 5, 0.5);
    const auto f = [](double x, double y) { return 0.3 + 2.0 * x - 1.5 * y; };
    for (std::size_t y = 0; y < 5; ++y) {
      for (std::size_t x = 0; x < 6; ++x) lin(x, y) = f((x + 0.5) * 0.5, (y + 0.5) * 0.5);
    }
    const auto L = interpolate(lin);
    std::uniform_real_distribution<double> px(0.25, 2.75), py(0.25, 2.25);
    for (int i = 0; i < 200; ++i) {
      const double x = px(rng), y = py(rng);
      CHECK(L(x, y) == doctest::Approx(f(x, y)).epsilon(1e-12));
    }
  }
  SUBCASE("uses the main-diagonal split") {
    ImageGrid q(2, 2, 1.0, std::vector<double>{0, 0, 0, 1});
    const auto Q = interpolate(q);
    // Point (tx, ty) = (0.75, 0.25) lies in the lower triangle: value ty.
    CHECK(Q(1.25, 0.75) == doctest::Approx(0.25));
    CHECK(Q(0.75, 1.25) == doctest::Approx(0.25));
  }
  SUBCASE("clamps in the boundary strip and rejects outside points") {
    CHECK(P(0.0, 0.0) == doctest::Approx(u(0, 0)));
    CHECK(P(3.0, 2.5) == doctest::Approx(u(5, 4)));
    CHECK_THROWS_AS(P(-0.1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(P(1.0, 2.6), InvalidArgument);
  }
}

TEST_CASE("cell averages") {
  const ImageGrid c = sample_cell_average([](double, double) { return 2.5; }, 4);
  for (double v : c.values()) CHECK(v == doctest::Approx(2.5));
  CHECK(c.spacing() == doctest::Approx(0.25));
  // Bilinear functions are integrated exactly by the tensor rule.
  const auto f = [](double x, double y) { return x * y + x; };
  const ImageGrid g = sample_cell_average(f, 4, 2.0, 2);
  const double cx = 1.25, cy = 0.75;  // centre of cell (2, 1), h = 0.5
  CHECK(g(2, 1) == doctest::Approx(cx * cy + cx));
  // A jump through the cell centre averages to one half.
  const ImageGrid s = sample_cell_average([](double x, double) { return x < 0.5 ? 0.0 : 1.0; }, 1);
  CHECK(s(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("L2 distances") {
  const double d = l2_distance([](double, double) { return 1.0; },
                               [](double, double) { return 0.0; }, 2.0, 0.5, 8, 8);
  CHECK(d == doctest::Approx(1.0));
  const ImageGrid a(8, 8, 0.125, 0.2), b(16, 16, 0.0625, 0.5);
  CHECK(l2_distance(interpolate(a), interpolate(b)) == doctest::Approx(0.3));
  CHECK(l2_norm(interpolate(b)) == doctest::Approx(0.5));
}

TEST_CASE("modulus of continuity") {
  const ImageGrid c(16, 16, 1.0 / 16, 0.3);
  CHECK(modulus_of_continuity(c, 0.25) == 0.0);
  // Vertical stripe pattern: one-pixel horizontal shift changes every pixel by 1.
  ImageGrid s(8, 8, 0.125);
  for (std::size_t y = 0; y < 8; ++y) {
    for (std::size_t x = 0; x < 8; ++x) s(x, y) = x % 2;
  }
  // 7 x 8 overlapping pairs, each differing by 1.
  CHECK(modulus_of_continuity(s, 0.125) == doctest::Approx(std::sqrt(56.0) * 0.125));
  CHECK(modulus_of_continuity(s, 0.1) == 0.0);
  CHECK_THROWS_AS(modulus_of_continuity(s, 0.0), InvalidArgument);
}
