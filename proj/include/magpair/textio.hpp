#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace magpair::textio {

// Locale-independent scientific form with 17 significant digits, identical
// bytes on every run (std::to_chars).
std::string format_double(double v);

// RFC-4180: quote when the field contains a comma, quote or newline.
std::string csv_field(std::string_view s);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);  // "fnv1a64:<16 hex digits>"

}  // namespace magpair::textio
