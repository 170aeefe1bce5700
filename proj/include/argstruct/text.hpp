#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace argstruct::text {

/// Decodes UTF-8 into Unicode scalar values. Invalid bytes are replaced
/// with U+FFFD, one replacement per rejected byte, so offsets stay stable.
std::vector<char32_t> decode_utf8(std::string_view utf8);

/// Encodes a range of scalar values back to UTF-8.
std::string encode_utf8(const std::vector<char32_t>& cps, std::size_t begin, std::size_t end);
std::string encode_utf8(const std::vector<char32_t>& cps);

bool is_space(char32_t c);
bool is_punct(char32_t c);

std::string lowercase(std::string_view s);

/// Splits on a single-character delimiter; keeps empty fields.
std::vector<std::string> split(std::string_view s, char delim);

std::string strip(std::string_view s);

/// Joins token strings with single spaces.
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with(std::string_view s, std::string_view prefix);

}  // namespace argstruct::text
