#include "varistore/image_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "varistore/error.hpp"

namespace varistore {

ImageGrid::ImageGrid(std::size_t width, std::size_t height, double spacing,
                     double fill)
    : width_(width), height_(height), spacing_(spacing),
      data_(width * height, fill) {
  if (width == 0 || height == 0) {
    throw InvalidArgument("ImageGrid: width and height must be positive");
  }
  set_spacing(spacing);
}

ImageGrid::ImageGrid(std::size_t width, std::size_t height, double spacing,
                     std::vector<double> data)
    : width_(width), height_(height), spacing_(spacing),
      data_(std::move(data)) {
  if (width == 0 || height == 0) {
    throw InvalidArgument("ImageGrid: width and height must be positive");
  }
  if (data_.size() != width * height) {
    throw InvalidArgument("ImageGrid: data length " +
                          std::to_string(data_.size()) +
                          " does not match " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  set_spacing(spacing);
}

void ImageGrid::set_spacing(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidArgument("ImageGrid: spacing must be positive and finite");
  }
  spacing_ = h;
}

double ImageGrid::min() const {
  return *std::min_element(data_.begin(), data_.end());
}

double ImageGrid::max() const {
  return *std::max_element(data_.begin(), data_.end());
}

double ImageGrid::sum() const {
  return std::accumulate(data_.begin(), data_.end(), 0.0);
}

double ImageGrid::mean() const {
  return sum() / static_cast<double>(data_.size());
}

ImageGrid ImageGrid::transposed() const {
  ImageGrid t(height_, width_, spacing_);
  for (std::size_t y = 0; y < height_; ++y) {
    for (std::size_t x = 0; x < width_; ++x) t(y, x) = (*this)(x, y);
  }
  return t;
}

VectorField::VectorField(std::size_t width, std::size_t height)
    : width_(width), height_(height), x_(width * height, 0.0),
      y_(width * height, 0.0) {}

double VectorField::magnitude(std::size_t i) const noexcept {
  return std::hypot(x_[i], y_[i]);
}

double inner_product(const ImageGrid& a, const ImageGrid& b) {
  require_same_shape(a, b, "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inner_product(const VectorField& a, const VectorField& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument("inner_product: vector field shapes differ");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a.x()[i] * b.x()[i] + a.y()[i] * b.y()[i];
  }
  return s;
}

void require_same_shape(const ImageGrid& a, const ImageGrid& b,
                        const char* context) {
  if (!a.same_shape(b)) {
    throw InvalidArgument(std::string(context) + ": dimension mismatch (" +
                          std::to_string(a.width()) + "x" +
                          std::to_string(a.height()) + " vs " +
                          std::to_string(b.width()) + "x" +
                          std::to_string(b.height()) + ")");
  }
}

}  // namespace varistore
