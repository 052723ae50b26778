#include "posekit/png_io.hpp"

#include <png.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include "posekit/error.hpp"

namespace posekit {

namespace {

using FilePtr = std::unique_ptr<std::FILE, int (*)(std::FILE*)>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  std::FILE* f = std::fopen(path.string().c_str(), mode);
  if (!f) {
    throw IoError("cannot open " + path.string() + " (" + std::strerror(errno) + ")");
  }
  return {f, &std::fclose};
}

// libpng reports fatal errors through longjmp; keep all C++ objects
// constructed before the setjmp point.
struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

// Decodes any PNG to one byte per pixel if want_16 is false, else requires a
// 16-bit grayscale file and returns two big-endian bytes per pixel.
std::vector<unsigned char> read_png(const std::filesystem::path& path, bool want_16,
                                    int& width, int& height) {
  FilePtr file = open_file(path, "rb");
  PngReader ctx;
  if (!ctx.png || !ctx.info) throw IoError("libpng initialization failed");

  std::vector<unsigned char> data;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(ctx.png))) {
    throw IoError("failed to decode PNG " + path.string());
  }
  png_init_io(ctx.png, file.get());
  png_read_info(ctx.png, ctx.info);

  const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
  const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const int color_type = png_get_color_type(ctx.png, ctx.info);
  if (w == 0 || h == 0 || w > (1u << 20) || h > (1u << 20)) {
    throw IoError("unreasonable PNG dimensions in " + path.string());
  }

  if (want_16) {
    if (bit_depth != 16 || color_type != PNG_COLOR_TYPE_GRAY) {
      throw IoError(path.string() + ": expected 16-bit grayscale, got " +
                    std::to_string(bit_depth) + "-bit color type " + std::to_string(color_type));
    }
  } else {
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(ctx.png);
    }
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(ctx.png);
    if (bit_depth == 16) png_set_strip_16(ctx.png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
    if (color_type == PNG_COLOR_TYPE_RGB || color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
        color_type == PNG_COLOR_TYPE_PALETTE) {
      png_set_rgb_to_gray_fixed(ctx.png, 1, -1, -1);
    }
  }
  png_read_update_info(ctx.png, ctx.info);

  const std::size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
  const std::size_t expect = static_cast<std::size_t>(w) * (want_16 ? 2 : 1);
  if (row_bytes != expect) {
    throw IoError(path.string() + ": unexpected row layout after decode");
  }

  data.resize(row_bytes * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = data.data() + y * row_bytes;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  width = static_cast<int>(w);
  height = static_cast<int>(h);
  return data;
}

void write_png(const std::filesystem::path& path, const unsigned char* data, int width,
               int height, int bit_depth) {
  if (!path.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  FilePtr file = open_file(path, "wb");
  PngWriter ctx;
  if (!ctx.png || !ctx.info) throw IoError("libpng initialization failed");

  const std::size_t row_bytes = static_cast<std::size_t>(width) * (bit_depth == 16 ? 2 : 1);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(data + y * row_bytes);
  }

  if (setjmp(png_jmpbuf(ctx.png))) {
    throw IoError("failed to encode PNG " + path.string());
  }
  png_init_io(ctx.png, file.get());
  png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
}

}  // namespace

GrayImage load_gray_png(const std::filesystem::path& path) {
  int w = 0, h = 0;
  const auto bytes = read_png(path, false, w, h);
  GrayImage img(w, h);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    img.pixels[i] = bytes[i] / 255.0;
  }
  return img;
}

void save_gray_png(const std::filesystem::path& path, const GrayImage& img) {
  img.validate();
  std::vector<unsigned char> bytes(img.pixels.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<unsigned char>(std::lround(img.pixels[i] * 255.0));
  }
  write_png(path, bytes.data(), img.width, img.height, 8);
}

BinaryMask load_mask_png(const std::filesystem::path& path) {
  int w = 0, h = 0;
  const auto bytes = read_png(path, false, w, h);
  BinaryMask mask(w, h);
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    mask.bits[i] = bytes[i] != 0 ? 1 : 0;
  }
  return mask;
}

void save_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<unsigned char> bytes(mask.bits.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = mask.bits[i] != 0 ? 255 : 0;
  }
  write_png(path, bytes.data(), mask.width, mask.height, 8);
}

DepthMap load_depth_png(const std::filesystem::path& path, double scale_mm_per_unit) {
  if (!(scale_mm_per_unit > 0.0) || !std::isfinite(scale_mm_per_unit)) {
    throw ValidationError("depth PNG scale must be > 0");
  }
  int w = 0, h = 0;
  const auto bytes = read_png(path, true, w, h);
  DepthMap depth(w, h);
  for (std::size_t i = 0; i < depth.value.size(); ++i) {
    const unsigned v = (static_cast<unsigned>(bytes[2 * i]) << 8) | bytes[2 * i + 1];
    if (v == 0) continue;  // invalid
    depth.value[i] = v * scale_mm_per_unit;
    depth.valid[i] = 1;
  }
  return depth;
}

void save_depth_png(const std::filesystem::path& path, const DepthMap& depth,
                    double scale_mm_per_unit) {
  if (!(scale_mm_per_unit > 0.0) || !std::isfinite(scale_mm_per_unit)) {
    throw ValidationError("depth PNG scale must be > 0");
  }
  depth.validate();
  std::vector<unsigned char> bytes(depth.value.size() * 2, 0);
  for (std::size_t i = 0; i < depth.value.size(); ++i) {
    if (!depth.valid[i]) continue;
    long q = std::lround(depth.value[i] / scale_mm_per_unit);
    if (q < 1) q = 1;          // 0 is the invalid sentinel
    if (q > 65535) q = 65535;  // saturate
    bytes[2 * i] = static_cast<unsigned char>((q >> 8) & 0xff);
    bytes[2 * i + 1] = static_cast<unsigned char>(q & 0xff);
  }
  write_png(path, bytes.data(), depth.width, depth.height, 16);
}

}  // namespace posekit
