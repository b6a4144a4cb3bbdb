#pragma once

// Minimal RGB8 image buffer plus PNG load/save via libpng's simplified API.
// Maps are tiny (a few thousand pixels), so nothing here tries to be clever.

#include <png.h>

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace wardsim {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Packs to 0xRRGGBB; handy as a map key and for hex formatting.
inline std::uint32_t pack_rgb(Rgb c) {
  return (std::uint32_t{c.r} << 16) | (std::uint32_t{c.g} << 8) | c.b;
}

inline std::string hex_rgb(Rgb c) {
  static const char* digits = "0123456789abcdef";
  std::uint32_t p = pack_rgb(c);
  std::string s = "#......";
  for (int i = 0; i < 6; ++i) s[6 - i] = digits[(p >> (4 * i)) & 0xF];
  return s;
}

class ImageRgb8 {
 public:
  ImageRgb8() = default;
  ImageRgb8(int width, int height, Rgb fill = {0, 0, 0})
      : width_(width), height_(height),
        pixels_(static_cast<std::size_t>(width) * height * 3) {
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) set(x, y, fill);
  }

  int width() const { return width_; }
  int height() const { return height_; }

  Rgb at(int x, int y) const {
    const std::uint8_t* p = pixels_.data() + offset(x, y);
    return {p[0], p[1], p[2]};
  }

  void set(int x, int y, Rgb c) {
    std::uint8_t* p = pixels_.data() + offset(x, y);
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  const std::uint8_t* data() const { return pixels_.data(); }
  std::uint8_t* data() { return pixels_.data(); }

 private:
  std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * width_ + x) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

inline ImageRgb8 read_png_rgb8(const std::string& path) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str()))
    throw std::runtime_error("cannot read PNG '" + path + "': " + img.message);
  img.format = PNG_FORMAT_RGB;
  ImageRgb8 out(static_cast<int>(img.width), static_cast<int>(img.height));
  if (!png_image_finish_read(&img, nullptr, out.data(), 0, nullptr)) {
    std::string msg = img.message;
    png_image_free(&img);
    throw std::runtime_error("cannot decode PNG '" + path + "': " + msg);
  }
  return out;
}

inline void write_png_rgb8(const std::string& path, const ImageRgb8& image) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width());
  img.height = static_cast<png_uint_32>(image.height());
  img.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.data(), 0, nullptr))
    throw std::runtime_error("cannot write PNG '" + path + "': " + img.message);
}

}  // namespace wardsim
