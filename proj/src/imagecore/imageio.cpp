#include "ballast/imageio.hpp"

#include <png.h>

// jpeglib.h needs size_t and FILE declared first.
#include <cstdio>
#include <jpeglib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

namespace ballast {

ImageFormat detect_format(std::span<const std::uint8_t> bytes) {
  static constexpr std::uint8_t kPng[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() >= 8 && std::equal(std::begin(kPng), std::end(kPng), bytes.begin())) {
    return ImageFormat::Png;
  }
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
    return ImageFormat::Jpeg;
  }
  return ImageFormat::Unknown;
}

std::uint8_t quantize8(double v) noexcept {
  const double scaled = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
  return static_cast<std::uint8_t>(scaled);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, path.string() + ": no such file");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, path.string() + ": cannot open for reading");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoError, path.string() + ": cannot open for writing");
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::IoError, path.string() + ": write failed");
  }
}

namespace {

RgbImage decode_png(std::span<const std::uint8_t> bytes, const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::CorruptImage, name + ": " + image.message);
  }
  image.format = PNG_FORMAT_RGB;
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw Error(ErrorCode::CorruptImage, name + ": empty image");
  }
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error(ErrorCode::CorruptImage, name + ": " + msg);
  }
  RgbImage out(static_cast<int>(image.width), static_cast<int>(image.height));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {buffer[3 * i] / 255.0, buffer[3 * i + 1] / 255.0, buffer[3 * i + 2] / 255.0};
  }
  return out;
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Kept free of C++ objects with non-trivial destructors between setjmp and
// longjmp; the caller owns the output buffer.
bool decode_jpeg_raw(std::span<const std::uint8_t> bytes, std::vector<std::uint8_t>& buffer, int& width,
                     int& height, std::string& error) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  if (setjmp(jerr.jump)) {
    jpeg_destroy_decompress(&cinfo);
    error = jerr.message;
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  buffer.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = buffer.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

RgbImage decode_jpeg(std::span<const std::uint8_t> bytes, const std::string& name) {
  std::vector<std::uint8_t> buffer;
  int width = 0;
  int height = 0;
  std::string error;
  if (!decode_jpeg_raw(bytes, buffer, width, height, error)) {
    throw Error(ErrorCode::CorruptImage, name + ": " + error);
  }
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::CorruptImage, name + ": empty image");
  }
  RgbImage out(width, height);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {buffer[3 * i] / 255.0, buffer[3 * i + 1] / 255.0, buffer[3 * i + 2] / 255.0};
  }
  return out;
}

std::vector<std::uint8_t> encode_raw(const std::uint8_t* data, int width, int height, png_uint_32 format) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = format;
  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, data, 0, nullptr)) {
    throw Error(ErrorCode::IoError, std::string("png encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, data, 0, nullptr)) {
    throw Error(ErrorCode::IoError, std::string("png encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

}  // namespace

RgbImage decode_image(std::span<const std::uint8_t> bytes, const std::string& name) {
  switch (detect_format(bytes)) {
    case ImageFormat::Png: return decode_png(bytes, name);
    case ImageFormat::Jpeg: return decode_jpeg(bytes, name);
    case ImageFormat::Unknown: break;
  }
  // A file named .png/.jpg whose content is neither is corrupt; anything else
  // is simply not a format we read.
  const auto ext = std::filesystem::path(name).extension().string();
  std::string lower(ext);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == ".png" || lower == ".jpg" || lower == ".jpeg") {
    throw Error(ErrorCode::CorruptImage, name + ": content is not a valid " + ext.substr(1) + " stream");
  }
  throw Error(ErrorCode::UnsupportedFormat, name + ": not a PNG or JPEG file");
}

RgbImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return decode_image(bytes, path.string());
}

std::vector<std::uint8_t> encode_png(const RgbImage& img) {
  std::vector<std::uint8_t> raw(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    raw[3 * i] = quantize8(img[i].r);
    raw[3 * i + 1] = quantize8(img[i].g);
    raw[3 * i + 2] = quantize8(img[i].b);
  }
  return encode_raw(raw.data(), img.width(), img.height(), PNG_FORMAT_RGB);
}

std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  std::vector<std::uint8_t> raw(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    raw[i] = quantize8(img[i]);
  }
  return encode_raw(raw.data(), img.width(), img.height(), PNG_FORMAT_GRAY);
}

std::vector<std::uint8_t> encode_png(const BinaryMask& mask) {
  std::vector<std::uint8_t> raw(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    raw[i] = mask[i] ? 255 : 0;
  }
  return encode_raw(raw.data(), mask.width(), mask.height(), PNG_FORMAT_GRAY);
}

void save_png(const RgbImage& img, const std::filesystem::path& path) { write_file(path, encode_png(img)); }

void save_png(const GrayImage& img, const std::filesystem::path& path) { write_file(path, encode_png(img)); }

}  // namespace ballast
