#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ctedit/field.hpp"

namespace ctedit {

struct BinaryMask;

/// Reads PNG (any bit depth / color type; 16-bit is scaled to 8-bit, alpha is
/// dropped) or PPM (P3 ASCII, P6 binary).
ImageRGB load_image(const std::filesystem::path& path);
ImageRGB decode_image(std::span<const std::uint8_t> bytes);

/// 8-bit RGB PNG.
void save_image(const ImageRGB& image, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const ImageRGB& image);

/// 1-bit grayscale PNG, white where the mask is set.
std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask);
void save_mask(const BinaryMask& mask, const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace ctedit
