#include "ctedit/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "ctedit/errors.hpp"
#include "ctedit/features.hpp"

namespace ctedit {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t count) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + count > cursor->bytes.size()) {
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(out, cursor->bytes.data() + cursor->offset, count);
  cursor->offset += count;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t count) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

[[noreturn]] void png_throw_error(png_structp png, png_const_charp message) {
  auto* slot = static_cast<std::string*>(png_get_error_ptr(png));
  if (slot != nullptr) *slot = message;
  png_longjmp(png, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

ImageRGB decode_png(std::span<const std::uint8_t> bytes) {
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error,
                                           png_throw_error, png_ignore_warning);
  if (png == nullptr) throw Error(ErrorCode::IoError, "cannot allocate PNG reader");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::IoError, "cannot allocate PNG info");
  }

  ReadCursor cursor{bytes, 0};
  // Everything allocated before setjmp; nothing with a destructor lives
  // between here and the longjmp targets.
  std::vector<std::uint8_t> rows;
  std::vector<png_bytep> row_ptrs;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::CorruptImage, "corrupt PNG: " + error);
  }

  png_set_read_fn(png, &cursor, png_read_from_span);
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);

  if (bit_depth == 16) png_set_scale_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  const png_size_t stride = png_get_rowbytes(png, info);
  if (stride != static_cast<png_size_t>(width) * 3) {
    png_error(png, "unexpected row layout after transforms");
  }
  rows.resize(stride * height);
  row_ptrs.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = rows.data() + y * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  ImageRGB image(static_cast<int>(width), static_cast<int>(height));
  for (std::size_t i = 0; i < image.size(); ++i) {
    image[i] = Rgb{rows[3 * i], rows[3 * i + 1], rows[3 * i + 2]};
  }
  return image;
}

class PnmTokenizer {
 public:
  explicit PnmTokenizer(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  long next_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorCode::CorruptImage, "malformed PPM: expected integer");
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1L << 30)) throw Error(ErrorCode::CorruptImage, "malformed PPM: integer overflow");
      ++pos_;
    }
    return value;
  }

  std::size_t pos() const { return pos_; }
  void skip_one() { ++pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 2;  // past magic
};

ImageRGB decode_ppm(std::span<const std::uint8_t> bytes) {
  const bool ascii = bytes[1] == '3';
  PnmTokenizer tok(bytes);
  const long width = tok.next_int();
  const long height = tok.next_int();
  const long maxval = tok.next_int();
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) {
    throw Error(ErrorCode::CorruptImage, "malformed PPM header");
  }
  auto scale = [maxval](long v) -> std::uint8_t {
    if (v > maxval) throw Error(ErrorCode::CorruptImage, "PPM sample exceeds maxval");
    if (maxval == 255) return static_cast<std::uint8_t>(v);
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  };

  ImageRGB image(static_cast<int>(width), static_cast<int>(height));
  if (ascii) {
    for (std::size_t i = 0; i < image.size(); ++i) {
      const auto r = scale(tok.next_int());
      const auto g = scale(tok.next_int());
      const auto b = scale(tok.next_int());
      image[i] = Rgb{r, g, b};
    }
    return image;
  }

  tok.skip_one();  // single whitespace after maxval
  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
  std::size_t pos = tok.pos();
  if (pos + image.size() * 3 * sample_bytes > bytes.size()) {
    throw Error(ErrorCode::CorruptImage, "truncated PPM raster");
  }
  auto read_sample = [&]() -> long {
    long v = bytes[pos++];
    if (sample_bytes == 2) v = (v << 8) | bytes[pos++];
    return v;
  };
  for (std::size_t i = 0; i < image.size(); ++i) {
    const auto r = scale(read_sample());
    const auto g = scale(read_sample());
    const auto b = scale(read_sample());
    image[i] = Rgb{r, g, b};
  }
  return image;
}

std::vector<std::uint8_t> encode_png_rows(int width, int height, int bit_depth,
                                          int color_type,
                                          const std::vector<std::uint8_t>& rows,
                                          std::size_t stride) {
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error,
                                            png_throw_error, png_ignore_warning);
  if (png == nullptr) throw Error(ErrorCode::IoError, "cannot allocate PNG writer");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::IoError, "cannot allocate PNG info");
  }
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> row_ptrs(height);
  for (int y = 0; y < height; ++y) {
    row_ptrs[y] = const_cast<png_bytep>(rows.data() + y * stride);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "PNG encode failed: " + error);
  }
  png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
  png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

ImageRGB decode_image(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '3' || bytes[1] == '6')) {
    return decode_ppm(bytes);
  }
  if (bytes.size() >= 4 && std::equal(bytes.begin(), bytes.begin() + 4, kPngSignature)) {
    if (bytes.size() < 8 || !std::equal(bytes.begin(), bytes.begin() + 8, kPngSignature)) {
      throw Error(ErrorCode::CorruptImage, "truncated PNG signature");
    }
    return decode_png(bytes);
  }
  throw Error(ErrorCode::UnsupportedFormat, "not a PNG or PPM (P3/P6) image");
}

ImageRGB load_image(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, "no such image file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_image(bytes);
}

std::vector<std::uint8_t> encode_png(const ImageRGB& image) {
  const std::size_t stride = static_cast<std::size_t>(image.width()) * 3;
  std::vector<std::uint8_t> rows(stride * image.height());
  for (std::size_t i = 0; i < image.size(); ++i) {
    rows[3 * i] = image[i].r;
    rows[3 * i + 1] = image[i].g;
    rows[3 * i + 2] = image[i].b;
  }
  return encode_png_rows(image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB, rows, stride);
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
  const std::size_t stride = (static_cast<std::size_t>(mask.width) + 7) / 8;
  std::vector<std::uint8_t> rows(stride * mask.height, 0);
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (mask.bits[static_cast<std::size_t>(y) * mask.width + x]) {
        rows[y * stride + x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
      }
    }
  }
  return encode_png_rows(mask.width, mask.height, 1, PNG_COLOR_TYPE_GRAY, rows, stride);
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

void save_image(const ImageRGB& image, const std::filesystem::path& path) {
  write_file(path, encode_png(image));
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  write_file(path, encode_mask_png(mask));
}

}  // namespace ctedit
