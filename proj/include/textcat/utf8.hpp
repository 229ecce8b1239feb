#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace textcat::utf8 {

/// True if `s` is well-formed UTF-8 (no overlongs, no surrogates).
bool valid(std::string_view s);

/// Decodes `s` into code points. Precondition: valid(s).
std::u32string decode(std::string_view s);

std::string encode(std::u32string_view cps);
std::string encode(char32_t cp);

/// Byte offsets of every code point boundary, including 0 and s.size().
std::vector<std::size_t> boundaries(std::string_view s);

/// Number of code points.
std::size_t length(std::string_view s);

/// Lowercases ASCII and the Latin-1 / Latin Extended-A capitals.
char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view s);

}  // namespace textcat::utf8
