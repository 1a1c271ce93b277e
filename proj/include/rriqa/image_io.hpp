#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "rriqa/color.hpp"

namespace rriqa {

/// Decodes an 8-bit PNG or BMP (24/32-bit, or 8-bit palette/grayscale).
/// Planes are normalized to [0,1]; grayscale is replicated to three planes.
/// Throws DecodeError on unsupported or corrupt data.
ColorImage decode_image(std::span<const std::uint8_t> bytes);
ColorImage read_image(const std::filesystem::path& path);

/// Encodes an RGB image as 8-bit-per-channel PNG or 24-bit BMP.
std::vector<std::uint8_t> encode_png(const ColorImage& rgb);
std::vector<std::uint8_t> encode_bmp(const ColorImage& rgb);

/// Writes PNG or BMP according to the file extension.
void write_image(const std::filesystem::path& path, const ColorImage& rgb);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace rriqa
