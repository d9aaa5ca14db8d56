#ifndef WEBDIR_TYPES_HPP
#define WEBDIR_TYPES_HPP

#include <cstdint>
#include <string>

namespace webdir {

/// Numeric identifier of one category. Identifiers are unique within a
/// directory; the root always carries the smallest one (kRootId).
using CategoryId = std::uint32_t;

inline constexpr CategoryId kNoCategory = 0;
inline constexpr CategoryId kRootId = 1;

/// Opaque identifier of a listed Web resource.
using ResourceId = std::string;

/// Similarity values below this floor are clamped before inversion, so the
/// distance 1/sim stays finite. Distances therefore live in [1, 1/floor].
inline constexpr double kDefaultSimFloor = 1e-6;

} // namespace webdir

#endif
