#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

namespace cudf {

/// Offset of the first byte that does not start a well-formed UTF-8 sequence,
/// or nullopt when the whole input is valid. Overlong forms and surrogates are rejected.
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) noexcept;

inline bool is_valid_utf8(std::string_view bytes) noexcept { return !find_invalid_utf8(bytes); }

}  // namespace cudf
