#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stereocorr {

enum class Variant { full_ncc, diagonal_ncc, sad };

std::string_view to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);

/// Similarity-numerator work: one multiply (NCC) or absolute difference (SAD)
/// and one accumulate per block sample, counted for every in-bounds shift.
struct OpCounts {
  std::uint64_t multiplies = 0;
  std::uint64_t adds = 0;
  std::uint64_t abs_diffs = 0;

  OpCounts& operator+=(const OpCounts& o) {
    multiplies += o.multiplies;
    adds += o.adds;
    abs_diffs += o.abs_diffs;
    return *this;
  }
  friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

/// Closed-form counts for `blocks` template blocks, each evaluated at `shifts` shifts.
constexpr OpCounts op_count(Variant variant, std::uint64_t block, std::uint64_t shifts, std::uint64_t blocks) {
  const std::uint64_t per_shift = variant == Variant::diagonal_ncc ? block : block * block;
  const std::uint64_t n = blocks * shifts * per_shift;
  if (variant == Variant::sad) return {0, n, n};
  return {n, n, 0};
}

}  // namespace stereocorr
