#pragma once

#include "stereocorr/image.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace stereocorr {

class ImageError : public std::runtime_error {
 public:
  enum class Kind { unreadable, unsupported_format, malformed, size_mismatch, write_failed };

  ImageError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Samples exactly as stored in the container, before any normalization.
struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 (gray) or 3 (RGB)
  std::uint32_t maxval = 255;
  std::vector<std::uint16_t> samples;  // row-major, channel-interleaved
};

/// Reads PGM/PPM (P2, P3, P5, P6; maxval up to 65535) and, when built with
/// libpng, 8/16-bit PNG. Alpha channels are dropped; palettes are expanded.
RawImage read_raw(const std::filesystem::path& path);

/// Luminance of the raw samples (0.299 R + 0.587 G + 0.114 B for color)
/// divided by the container maxval.
Image to_gray(const RawImage& raw);

Image load_gray(const std::filesystem::path& path);

/// disparity = raw / scale; pixels whose raw value equals unknown_code are invalid.
GroundTruthDisparity load_ground_truth(const std::filesystem::path& path, double scale = 3.0,
                                       std::uint32_t unknown_code = 0);

enum class PnmEncoding { ascii, binary };

/// Quantizes round(v * maxval) after clamping to [0, 1].
void save_gray(const std::filesystem::path& path, const Image& img, std::uint32_t maxval = 255,
               PnmEncoding encoding = PnmEncoding::binary);

/// 8-bit P6 from three equally sized [0, 1] planes.
void save_rgb(const std::filesystem::path& path, const Image& red, const Image& green,
              const Image& blue);

}  // namespace stereocorr
