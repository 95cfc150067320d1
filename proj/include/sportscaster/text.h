// Unicode and line-format helpers shared by the file readers.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sportscaster::text {

// NFC normalization; invalid UTF-8 is rejected with std::invalid_argument.
std::string normalize_nfc(std::string_view utf8);

// Full Unicode lowercase mapping (root locale).
std::string to_lower(std::string_view utf8);

// NFC, then lowercase when `language` is "en", then whitespace split.
std::vector<std::string> tokenize(std::string_view raw, std::string_view language);

std::vector<std::string> split(std::string_view line, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& words, std::string_view sep = " ");
std::string_view trim(std::string_view s);

// `key = value` lines; blank lines and `#` comments skipped, later keys win.
// Throws std::invalid_argument naming the line on a line without '='.
std::map<std::string, std::string> parse_key_values(std::string_view contents);

// printf("%.12g")
std::string format_real(double x);

}  // namespace sportscaster::text
