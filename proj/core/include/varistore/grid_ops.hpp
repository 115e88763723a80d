#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "varistore/image_grid.hpp"

namespace varistore {

// Finite-difference operators. All use homogeneous Neumann closure: the
// forward difference vanishes on the last column/row, the backward difference
// on the first one.

VectorField forward_gradient(const ImageGrid& u);
VectorField backward_gradient(const ImageGrid& u);

/// Negative adjoint of forward_gradient: <grad+ u, p> = -<u, div p>.
ImageGrid divergence(const VectorField& p, double spacing);

/// Negative adjoint of backward_gradient: <grad- u, q> = -<u, div- q>.
ImageGrid backward_divergence(const VectorField& q, double spacing);

/// 5-point Laplacian; identical to divergence(forward_gradient(u)).
ImageGrid laplacian(const ImageGrid& u);

/// Sampled Gaussian of standard deviation rho (in pixels), truncated at
/// ceil(3 rho) and renormalised to unit sum.
std::vector<double> gaussian_kernel(double rho);

/// Separable convolution with gaussian_kernel(rho) under half-sample
/// symmetric extension. The operator is symmetric with unit row sums, so
/// the image mean is preserved.
ImageGrid gaussian_convolve(const ImageGrid& u, double rho);

/// A function on the continuous rectangle [0, extent_x] x [0, extent_y].
using ContinuousField = std::function<double(double, double)>;

/// Continuous piecewise-linear interpolant of a grid whose vertices sit at
/// the cell centres ((i + 1/2) h, (j + 1/2) h). Each square between four
/// vertices is split along its main diagonal into two linear triangles; the
/// half-cell boundary strip takes the value at the nearest point of the
/// vertex hull.
class PiecewiseLinearInterpolant {
 public:
  explicit PiecewiseLinearInterpolant(ImageGrid grid);

  /// Throws InvalidArgument outside the closed domain.
  double operator()(double x, double y) const;

  double extent_x() const noexcept;
  double extent_y() const noexcept;
  const ImageGrid& grid() const noexcept { return grid_; }

 private:
  ImageGrid grid_;
};

PiecewiseLinearInterpolant interpolate(const ImageGrid& grid);

/// Cell averages of f over an n x n partition of [0, extent]^2, each computed
/// with a points_per_axis^2 tensor Gauss-Legendre rule.
ImageGrid sample_cell_average(const ContinuousField& f, std::size_t n,
                              double extent = 1.0,
                              std::size_t points_per_axis = 4);

/// L2 norm of f - g over [0, extent_x] x [0, extent_y] by the midpoint rule
/// on a samples_x x samples_y partition.
double l2_distance(const ContinuousField& f, const ContinuousField& g,
                   double extent_x, double extent_y, std::size_t samples_x,
                   std::size_t samples_y);

/// L2 distance between two interpolants over their common domain, on a
/// partition 4x finer than the finer of the two lattices.
double l2_distance(const PiecewiseLinearInterpolant& a,
                   const PiecewiseLinearInterpolant& b);

double l2_norm(const PiecewiseLinearInterpolant& a);

/// Discrete L2 modulus of continuity: the largest lattice-L2 norm of
/// u(. + s) - u(.) over the overlap, taken over integer shift vectors s with
/// |s| h <= t.
double modulus_of_continuity(const ImageGrid& u, double t);

}  // namespace varistore
