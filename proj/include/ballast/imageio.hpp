#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ballast/image.hpp"

namespace ballast {

enum class ImageFormat { Png, Jpeg, Unknown };

/// Sniffs the magic bytes; does not validate the rest of the stream.
ImageFormat detect_format(std::span<const std::uint8_t> bytes);

/// Decodes a PNG or JPEG file into normalized [0,1] channels.
/// Throws FileNotFound, UnsupportedFormat or CorruptImage; the message carries the path.
RgbImage load_image(const std::filesystem::path& path);

/// Same as load_image, from an in-memory buffer. `name` only labels errors.
RgbImage decode_image(std::span<const std::uint8_t> bytes, const std::string& name = "<memory>");

/// 8-bit quantization used at every output boundary: round(v * 255) clamped.
std::uint8_t quantize8(double v) noexcept;

std::vector<std::uint8_t> encode_png(const RgbImage& img);
std::vector<std::uint8_t> encode_png(const GrayImage& img);
std::vector<std::uint8_t> encode_png(const BinaryMask& mask);

void save_png(const RgbImage& img, const std::filesystem::path& path);
void save_png(const GrayImage& img, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace ballast
