#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace varistore {

/// Scalar field on a width x height lattice with uniform spacing h.
/// Storage is row-major: index = y * width + x. The x axis runs along a row.
class ImageGrid {
 public:
  ImageGrid() = default;
  ImageGrid(std::size_t width, std::size_t height, double spacing = 1.0,
            double fill = 0.0);
  ImageGrid(std::size_t width, std::size_t height, double spacing,
            std::vector<double> data);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  double spacing() const noexcept { return spacing_; }
  void set_spacing(double h);

  double& operator()(std::size_t x, std::size_t y) noexcept {
    return data_[y * width_ + x];
  }
  double operator()(std::size_t x, std::size_t y) const noexcept {
    return data_[y * width_ + x];
  }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  double min() const;
  double max() const;
  double mean() const;
  double sum() const;

  bool same_shape(const ImageGrid& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  ImageGrid transposed() const;

  bool operator==(const ImageGrid&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  double spacing_ = 1.0;
  std::vector<double> data_;
};

/// Per-pixel 2-vector field, stored as two component planes.
class VectorField {
 public:
  VectorField() = default;
  VectorField(std::size_t width, std::size_t height);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return x_.size(); }

  std::span<double> x() noexcept { return x_; }
  std::span<const double> x() const noexcept { return x_; }
  std::span<double> y() noexcept { return y_; }
  std::span<const double> y() const noexcept { return y_; }

  double magnitude(std::size_t i) const noexcept;

  bool same_shape(const ImageGrid& g) const noexcept {
    return width_ == g.width() && height_ == g.height();
  }

  bool operator==(const VectorField&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> x_;
  std::vector<double> y_;
};

/// Plain Euclidean sums, without lattice-area weighting.
double inner_product(const ImageGrid& a, const ImageGrid& b);
double inner_product(const VectorField& a, const VectorField& b);

/// Throws InvalidArgument when the two grids differ in width or height.
void require_same_shape(const ImageGrid& a, const ImageGrid& b,
                        const char* context);

}  // namespace varistore
