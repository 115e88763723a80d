#include "varistore/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "varistore/error.hpp"

namespace varistore {

namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    const int c = in.peek();
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

std::size_t read_header_number(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  std::string token;
  while (std::isdigit(in.peek())) token.push_back(static_cast<char>(in.get()));
  if (token.empty() || token.size() > 9) {
    throw IoError(std::string("image header: bad ") + what);
  }
  return std::stoul(token);
}

}  // namespace

Image read_image(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2) || magic[0] != 'P') {
    throw IoError("image header: missing P2/P3/P5/P6 magic");
  }
  const bool ascii = magic[1] == '2' || magic[1] == '3';
  const bool binary = magic[1] == '5' || magic[1] == '6';
  if (!ascii && !binary) {
    throw IoError(std::string("image header: unsupported magic P") + magic[1]);
  }
  const std::size_t nchan = (magic[1] == '3' || magic[1] == '6') ? 3 : 1;
  const std::size_t width = read_header_number(in, "width");
  const std::size_t height = read_header_number(in, "height");
  const std::size_t maxval = read_header_number(in, "maxval");
  if (width == 0 || height == 0) throw IoError("image header: zero dimension");
  if (maxval != 255) {
    throw IoError("image header: maxval " + std::to_string(maxval) +
                  " unsupported (only 255)");
  }

  Image img;
  img.channels.assign(nchan, ImageGrid(width, height));
  const std::size_t count = width * height * nchan;
  if (binary) {
    if (!std::isspace(in.get())) {
      throw IoError("image header: expected whitespace after maxval");
    }
    std::string bytes(count, '\0');
    if (!in.read(bytes.data(), static_cast<std::streamsize>(count))) {
      throw IoError("image payload truncated");
    }
    for (std::size_t i = 0; i < count; ++i) {
      img.channels[i % nchan][i / nchan] =
          static_cast<unsigned char>(bytes[i]) / 255.0;
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      skip_space_and_comments(in);
      long v = -1;
      if (!(in >> v)) throw IoError("image payload truncated");
      if (v < 0 || v > 255) throw IoError("image payload value out of range");
      img.channels[i % nchan][i / nchan] = static_cast<double>(v) / 255.0;
    }
  }
  return img;
}

Image read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_image(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_image(std::ostream& out, const Image& image) {
  const std::size_t nchan = image.channels.size();
  if (nchan != 1 && nchan != 3) {
    throw InvalidArgument("write_image: expected 1 or 3 channels");
  }
  for (const ImageGrid& c : image.channels) {
    require_same_shape(c, image.channels[0], "write_image");
  }
  const std::size_t w = image.width(), h = image.height();
  out << (nchan == 3 ? "P6" : "P5") << '\n' << w << ' ' << h << "\n255\n";
  std::string bytes(w * h * nchan, '\0');
  for (std::size_t i = 0; i < w * h; ++i) {
    for (std::size_t c = 0; c < nchan; ++c) {
      const double raw = image.channels[c][i];
      if (std::isnan(raw)) throw InvalidArgument("write_image: NaN pixel");
      const double v = std::clamp(raw, 0.0, 1.0);
      bytes[i * nchan + c] = static_cast<char>(
          static_cast<unsigned char>(std::lround(v * 255.0)));
    }
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("image write failed");
}

void write_image(const std::filesystem::path& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_image(out, image);
}

}  // namespace varistore
