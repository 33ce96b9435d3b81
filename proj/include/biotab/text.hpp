#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace biotab::text {

std::string trim(std::string_view s);

/// Case-folds ASCII letters and collapses whitespace runs to one space.
/// This is the comparison key for symptom/sign phrases everywhere.
std::string normalize_phrase(std::string_view s);

std::string to_lower(std::string_view s);

bool iequals(std::string_view a, std::string_view b);

std::size_t count_whitespace_tokens(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

std::vector<std::string> split(std::string_view s, char delim);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Number of UTF-8 code points.
std::size_t char_length(std::string_view s);

/// Appends "." unless the text already ends in terminal punctuation.
std::string terminate_sentence(std::string_view s);

}  // namespace biotab::text
