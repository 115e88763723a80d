#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "varistore/image_grid.hpp"

namespace varistore {

/// One grid for grayscale, three (R, G, B) for colour, all the same shape.
struct Image {
  std::vector<ImageGrid> channels;

  bool is_color() const noexcept { return channels.size() == 3; }
  std::size_t width() const { return channels.at(0).width(); }
  std::size_t height() const { return channels.at(0).height(); }
};

/// Reads P2/P5 (grey) or P3/P6 (colour) with maxval 255. Intensities are
/// divided by 255. Throws IoError on malformed or truncated input.
Image read_image(std::istream& in);
Image read_image(const std::filesystem::path& path);

/// Writes binary P5 (1 channel) or P6 (3 channels). Values are clamped to
/// [0, 1] and rounded to the nearest of 256 levels.
void write_image(std::ostream& out, const Image& image);
void write_image(const std::filesystem::path& path, const Image& image);

}  // namespace varistore
