#include "stereocorr/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#ifdef STEREOCORR_HAVE_PNG
#include <png.h>

#include <csetjmp>
#include <cstdio>
#endif

namespace stereocorr {
namespace {

using Kind = ImageError::Kind;

std::vector<unsigned char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageError(Kind::unreadable, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw ImageError(Kind::unreadable, "read error on " + path.string());
  return bytes;
}

class PnmReader {
 public:
  PnmReader(const std::vector<unsigned char>& bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  RawImage read() {
    if (bytes_.size() < 2 || bytes_[0] != 'P') fail(Kind::unsupported_format, "not a PNM file");
    const char kind = static_cast<char>(bytes_[1]);
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6')
      fail(Kind::unsupported_format, std::string("unsupported PNM variant P") + kind);
    pos_ = 2;

    RawImage raw;
    raw.channels = (kind == '3' || kind == '6') ? 3 : 1;
    raw.width = static_cast<int>(header_int());
    raw.height = static_cast<int>(header_int());
    const long maxval = header_int();
    if (raw.width < 1 || raw.height < 1) fail(Kind::malformed, "non-positive dimensions");
    if (maxval < 1 || maxval > 65535) fail(Kind::malformed, "maxval out of range");
    raw.maxval = static_cast<std::uint32_t>(maxval);

    const std::size_t count =
        static_cast<std::size_t>(raw.width) * static_cast<std::size_t>(raw.height) * raw.channels;
    raw.samples.resize(count);

    if (kind == '2' || kind == '3') {
      for (std::size_t i = 0; i < count; ++i) {
        skip_space_and_comments();
        if (pos_ >= bytes_.size())
          fail(Kind::size_mismatch, "payload has " + std::to_string(i) + " samples, header declares " +
                                        std::to_string(count));
        raw.samples[i] = checked_sample(number(), raw.maxval);
      }
      skip_space_and_comments();
      if (pos_ != bytes_.size()) fail(Kind::size_mismatch, "trailing data after payload");
    } else {
      // exactly one whitespace byte separates maxval from the raster
      if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail(Kind::malformed, "missing raster separator");
      ++pos_;
      const std::size_t width = raw.maxval > 255 ? 2 : 1;
      const std::size_t available = bytes_.size() - pos_;
      if (available != count * width)
        fail(Kind::size_mismatch, "payload has " + std::to_string(available) + " bytes, header declares " +
                                      std::to_string(count * width));
      for (std::size_t i = 0; i < count; ++i) {
        std::uint32_t v = bytes_[pos_ + i * width];
        if (width == 2) v = (v << 8) | bytes_[pos_ + i * width + 1];
        raw.samples[i] = checked_sample(v, raw.maxval);
      }
    }
    return raw;
  }

 private:
  [[noreturn]] void fail(Kind kind, const std::string& msg) const {
    throw ImageError(kind, name_ + ": " + msg);
  }

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

  std::uint32_t number() {
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail(Kind::malformed, "expected a number");
    std::uint64_t v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 0xffffffffu) fail(Kind::malformed, "number too large");
    }
    return static_cast<std::uint32_t>(v);
  }

  long header_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) fail(Kind::malformed, "truncated header");
    return static_cast<long>(number());
  }

  std::uint16_t checked_sample(std::uint32_t v, std::uint32_t maxval) const {
    if (v > maxval) fail(Kind::malformed, "sample exceeds maxval");
    return static_cast<std::uint16_t>(v);
  }

  const std::vector<unsigned char>& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

#ifdef STEREOCORR_HAVE_PNG
bool is_png(const std::vector<unsigned char>& bytes) {
  return bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0;
}

struct PngSource {
  const std::vector<unsigned char>* bytes;
  std::size_t pos;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->pos + length > src->bytes->size()) png_error(png, "truncated PNG stream");
  std::copy_n(src->bytes->data() + src->pos, length, out);
  src->pos += length;
}

// libpng reports errors through longjmp, so nothing with a destructor may be
// created between setjmp and the end of decoding.
bool decode_png(const std::vector<unsigned char>& bytes, RawImage& raw, std::vector<unsigned char>& pixels,
                char* error) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  PngSource src{&bytes, 0};
  if (setjmp(png_jmpbuf(png))) {
    std::snprintf(error, 128, "corrupt PNG stream");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &src, png_read_from_memory);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int channels = png_get_channels(png, info);
  const int out_depth = png_get_bit_depth(png, info);
  const png_size_t rowbytes = png_get_rowbytes(png, info);
  if (channels != 1 && channels != 3) {
    std::snprintf(error, 128, "unsupported PNG channel layout");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  raw.width = static_cast<int>(width);
  raw.height = static_cast<int>(height);
  raw.channels = channels;
  raw.maxval = out_depth == 16 ? 65535u : 255u;
  if (pixels.size() < rowbytes * height) {
    std::snprintf(error, 128, "PNG too large for decode buffer");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  for (png_uint_32 y = 0; y < height; ++y) png_read_row(png, pixels.data() + y * rowbytes, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

RawImage read_png(const std::vector<unsigned char>& bytes, const std::string& name) {
  // width/height from IHDR so the decode buffer can be sized before setjmp
  if (bytes.size() < 24) throw ImageError(Kind::size_mismatch, name + ": truncated PNG header");
  auto be32 = [&](std::size_t at) {
    return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
           (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
  };
  const std::size_t width = be32(16);
  const std::size_t height = be32(20);
  if (width == 0 || height == 0 || width * height > (std::size_t{1} << 28))
    throw ImageError(Kind::malformed, name + ": bad PNG dimensions");

  RawImage raw;
  std::vector<unsigned char> pixels(width * height * 3 * 2);
  char error[128] = "libpng initialization failed";
  if (!decode_png(bytes, raw, pixels, error)) throw ImageError(Kind::size_mismatch, name + ": " + error);

  const std::size_t count = width * height * raw.channels;
  raw.samples.resize(count);
  if (raw.maxval > 255) {
    for (std::size_t i = 0; i < count; ++i)
      raw.samples[i] = static_cast<std::uint16_t>((pixels[2 * i] << 8) | pixels[2 * i + 1]);
  } else {
    std::copy_n(pixels.begin(), count, raw.samples.begin());
  }
  return raw;
}
#endif

}  // namespace

RawImage read_raw(const std::filesystem::path& path) {
  const auto bytes = slurp(path);
#ifdef STEREOCORR_HAVE_PNG
  if (is_png(bytes)) return read_png(bytes, path.string());
#endif
  return PnmReader(bytes, path.string()).read();
}

Image to_gray(const RawImage& raw) {
  Image img(raw.height, raw.width);
  const double maxval = raw.maxval;
  const std::size_t n = static_cast<std::size_t>(raw.width) * raw.height;
  double* out = img.data();
  if (raw.channels == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = raw.samples[i] / maxval;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double lum = 0.299 * raw.samples[3 * i] + 0.587 * raw.samples[3 * i + 1] +
                         0.114 * raw.samples[3 * i + 2];
      out[i] = std::clamp(lum / maxval, 0.0, 1.0);
    }
  }
  return img;
}

Image load_gray(const std::filesystem::path& path) { return to_gray(read_raw(path)); }

GroundTruthDisparity load_ground_truth(const std::filesystem::path& path, double scale,
                                       std::uint32_t unknown_code) {
  if (!(scale > 0)) throw std::invalid_argument("ground-truth scale must be positive");
  const RawImage raw = read_raw(path);
  if (raw.channels != 1)
    throw ImageError(Kind::unsupported_format, path.string() + ": ground truth must be single-channel");

  GroundTruthDisparity truth;
  truth.disparity.resize(raw.height, raw.width);
  truth.valid.resize(raw.height, raw.width);
  for (int y = 0; y < raw.height; ++y) {
    for (int x = 0; x < raw.width; ++x) {
      const std::uint16_t v = raw.samples[static_cast<std::size_t>(y) * raw.width + x];
      truth.disparity(y, x) = v / scale;
      truth.valid(y, x) = v != unknown_code;
    }
  }
  return truth;
}

void save_gray(const std::filesystem::path& path, const Image& img, std::uint32_t maxval,
               PnmEncoding encoding) {
  if (maxval < 1 || maxval > 65535) throw std::invalid_argument("maxval must be in [1, 65535]");
  std::ostringstream out;
  out << (encoding == PnmEncoding::ascii ? "P2" : "P5") << '\n'
      << img.cols() << ' ' << img.rows() << '\n'
      << maxval << '\n';
  for (Eigen::Index y = 0; y < img.rows(); ++y) {
    for (Eigen::Index x = 0; x < img.cols(); ++x) {
      const auto q = static_cast<std::uint32_t>(std::lround(std::clamp(img(y, x), 0.0, 1.0) * maxval));
      if (encoding == PnmEncoding::ascii) {
        out << q << (x + 1 == img.cols() ? '\n' : ' ');
      } else if (maxval > 255) {
        out.put(static_cast<char>(q >> 8)).put(static_cast<char>(q & 0xff));
      } else {
        out.put(static_cast<char>(q));
      }
    }
  }
  std::ofstream file(path, std::ios::binary);
  file << out.str();
  if (!file) throw ImageError(Kind::write_failed, "cannot write " + path.string());
}

void save_rgb(const std::filesystem::path& path, const Image& red, const Image& green, const Image& blue) {
  if (red.rows() != green.rows() || red.rows() != blue.rows() || red.cols() != green.cols() ||
      red.cols() != blue.cols())
    throw std::invalid_argument("save_rgb: plane shapes differ");
  std::ostringstream out;
  out << "P6\n" << red.cols() << ' ' << red.rows() << "\n255\n";
  auto q = [](double v) { return static_cast<char>(std::lround(std::clamp(v, 0.0, 1.0) * 255)); };
  for (Eigen::Index y = 0; y < red.rows(); ++y)
    for (Eigen::Index x = 0; x < red.cols(); ++x)
      out.put(q(red(y, x))).put(q(green(y, x))).put(q(blue(y, x)));
  std::ofstream file(path, std::ios::binary);
  file << out.str();
  if (!file) throw ImageError(Kind::write_failed, "cannot write " + path.string());
}

}  // namespace stereocorr
