#include "rriqa/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "rriqa/error.hpp"

namespace rriqa {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

ColorImage from_rgb8(int width, int height, const std::uint8_t* data) {
  ColorImage img(width, height, ColorSpace::rgb);
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) img.planes[c][i] = data[3 * i + c] / 255.0;
  }
  return img;
}

ColorImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw DecodeError(std::string("PNG: ") + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw DecodeError("PNG: " + msg);
  }
  return from_rgb8(static_cast<int>(image.width), static_cast<int>(image.height), buffer.data());
}

ColorImage decode_bmp(std::span<const std::uint8_t> b) {
  if (b.size() < 54) throw DecodeError("BMP: truncated header");
  const std::uint32_t pixel_offset = read_u32(b, 10);
  const std::uint32_t dib_size = read_u32(b, 14);
  if (dib_size < 40) throw DecodeError("BMP: unsupported DIB header (OS/2 bitmaps)");
  const auto width = static_cast<std::int32_t>(read_u32(b, 18));
  const auto raw_height = static_cast<std::int32_t>(read_u32(b, 22));
  const std::uint16_t bpp = read_u16(b, 28);
  const std::uint32_t compression = read_u32(b, 30);
  std::uint32_t palette_size = read_u32(b, 46);
  if (width <= 0 || raw_height == 0 || width > (1 << 16) || std::abs(raw_height) > (1 << 16)) {
    throw DecodeError("BMP: invalid dimensions");
  }
  if (compression != 0 && !(compression == 3 && bpp == 32)) {
    throw DecodeError("BMP: compressed bitmaps are not supported");
  }
  if (bpp != 8 && bpp != 24 && bpp != 32) {
    throw DecodeError("BMP: unsupported bit depth " + std::to_string(bpp));
  }
  const bool top_down = raw_height < 0;
  const int height = std::abs(raw_height);
  const std::size_t stride = ((static_cast<std::size_t>(width) * bpp + 31) / 32) * 4;
  if (pixel_offset > b.size() || b.size() - pixel_offset < stride * height) {
    throw DecodeError("BMP: truncated pixel data");
  }

  std::vector<std::uint8_t> palette;
  if (bpp == 8) {
    if (palette_size == 0) palette_size = 256;
    const std::size_t pal_off = 14 + dib_size;
    if (palette_size > 256 || pal_off + 4 * palette_size > pixel_offset) {
      throw DecodeError("BMP: invalid palette");
    }
    palette.assign(b.begin() + pal_off, b.begin() + pal_off + 4 * palette_size);
  }

  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
  for (int y = 0; y < height; ++y) {
    const int src_row = top_down ? y : height - 1 - y;
    const std::uint8_t* row = b.data() + pixel_offset + stride * src_row;
    for (int x = 0; x < width; ++x) {
      std::uint8_t* dst = &rgb[(static_cast<std::size_t>(y) * width + x) * 3];
      if (bpp == 8) {
        const std::uint8_t idx = row[x];
        if (idx >= palette_size) throw DecodeError("BMP: palette index out of range");
        dst[0] = palette[4 * idx + 2];
        dst[1] = palette[4 * idx + 1];
        dst[2] = palette[4 * idx + 0];
      } else {
        const std::uint8_t* px = row + x * (bpp / 8);
        dst[0] = px[2];
        dst[1] = px[1];
        dst[2] = px[0];
      }
    }
  }
  return from_rgb8(width, height, rgb.data());
}

std::vector<std::uint8_t> to_rgb8(const ColorImage& img) {
  if (img.space != ColorSpace::rgb) throw ContractError("image encoding expects RGB input");
  img.validate();
  std::vector<std::uint8_t> out(img.pixel_count() * 3);
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    for (int c = 0; c < 3; ++c) out[3 * i + c] = to_byte(img.planes[c][i]);
  }
  return out;
}

}  // namespace

ColorImage decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature),
                                      bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') return decode_bmp(bytes);
  throw DecodeError("unrecognized image container (expected PNG or BMP)");
}

ColorImage read_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  try {
    return decode_image(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_png(const ColorImage& rgb) {
  const std::vector<std::uint8_t> pixels = to_rgb8(rgb);
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(rgb.width());
  image.height = static_cast<png_uint_32>(rgb.height());
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, pixels.data(), 0, nullptr)) {
    throw Error(std::string("PNG encode: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, pixels.data(), 0, nullptr)) {
    throw Error(std::string("PNG encode: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> encode_bmp(const ColorImage& rgb) {
  const std::vector<std::uint8_t> pixels = to_rgb8(rgb);
  const auto width = static_cast<std::uint32_t>(rgb.width());
  const auto height = static_cast<std::uint32_t>(rgb.height());
  const std::uint32_t stride = ((width * 24 + 31) / 32) * 4;
  const std::uint32_t data_size = stride * height;
  std::vector<std::uint8_t> out;
  out.reserve(54 + data_size);
  out.push_back('B');
  out.push_back('M');
  put_u32(out, 54 + data_size);
  put_u32(out, 0);
  put_u32(out, 54);
  put_u32(out, 40);
  put_u32(out, width);
  put_u32(out, height);
  put_u16(out, 1);
  put_u16(out, 24);
  put_u32(out, 0);
  put_u32(out, data_size);
  put_u32(out, 2835);
  put_u32(out, 2835);
  put_u32(out, 0);
  put_u32(out, 0);
  for (std::uint32_t row = 0; row < height; ++row) {
    const std::uint32_t y = height - 1 - row;
    for (std::uint32_t x = 0; x < width; ++x) {
      const std::uint8_t* px = &pixels[(static_cast<std::size_t>(y) * width + x) * 3];
      out.push_back(px[2]);
      out.push_back(px[1]);
      out.push_back(px[0]);
    }
    for (std::uint32_t pad = width * 3; pad < stride; ++pad) out.push_back(0);
  }
  return out;
}

void write_image(const std::filesystem::path& path, const ColorImage& rgb) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".png") {
    write_file(path, encode_png(rgb));
  } else if (ext == ".bmp") {
    write_file(path, encode_bmp(rgb));
  } else {
    throw ContractError("write_image: unsupported extension '" + ext + "'");
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

}  // namespace rriqa
