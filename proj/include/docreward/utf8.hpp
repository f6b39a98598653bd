#pragma once

#include <string>
#include <string_view>

namespace docreward::utf8 {

// Invalid sequences decode to U+FFFD, one replacement per offending byte.
std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view text);

// Length in Unicode scalar values.
std::size_t length(std::string_view bytes);

// Byte length of the sequence starting at bytes[pos]; 1 for invalid bytes.
std::size_t sequence_length(std::string_view bytes, std::size_t pos);

}  // namespace docreward::utf8
