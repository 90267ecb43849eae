#include "stereocorr/op_count.hpp"

namespace stereocorr {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::full_ncc: return "full_ncc";
    case Variant::diagonal_ncc: return "diagonal_ncc";
    case Variant::sad: return "sad";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "full_ncc") return Variant::full_ncc;
  if (name == "diagonal_ncc") return Variant::diagonal_ncc;
  if (name == "sad") return Variant::sad;
  return std::nullopt;
}

}  // namespace stereocorr
