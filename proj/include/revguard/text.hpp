#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace revguard::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
bool is_blank(std::string_view s);

/// Splits on ASCII whitespace; empty pieces are dropped.
std::vector<std::string> split_words(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s);
/// Last `n` code points of a UTF-8 string.
std::string_view utf8_suffix(std::string_view s, std::size_t n);
/// First code point of a UTF-8 string, or empty.
std::string_view utf8_first(std::string_view s);

bool is_ascii_digits(std::string_view s);
bool has_alnum(std::string_view s);

/// Copies the capitalisation of the first letter of `like` onto `word`.
std::string match_initial_case(std::string_view like, std::string_view word);

/// Replaces `length` bytes at `offset` with `replacement`.
struct Replacement {
    std::size_t offset = 0;
    std::size_t length = 0;
    std::string replacement;
};

/// Applies non-overlapping replacements (any order) to `s`.
std::string apply_replacements(std::string_view s, std::vector<Replacement> replacements);

}  // namespace revguard::text
