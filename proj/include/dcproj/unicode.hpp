#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dcproj::unicode {

/// Decodes UTF-8 into code points. Returns nullopt on any malformed sequence
/// (overlong forms, surrogates and truncated sequences included).
std::optional<std::u32string> decode(std::string_view utf8);

/// Byte offset of the first malformed sequence, or nullopt if the text is valid.
std::optional<std::size_t> first_invalid_byte(std::string_view utf8);

std::string encode(std::u32string_view cps);
void append(std::string& out, char32_t cp);

bool is_unicode_punctuation(char32_t cp);  // general categories Pc Pd Ps Pe Pi Pf Po
bool is_space(char32_t cp);
char32_t to_lower(char32_t cp);  // simple one-to-one mapping, accents kept

std::string lowercase(std::string_view utf8);

}  // namespace dcproj::unicode
