#include "revguard/text.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace revguard::text {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_continuation(char c) {
    return (static_cast<unsigned char>(c) & 0xC0) == 0x80;
}

}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

bool is_blank(std::string_view s) {
    return trim(s).empty();
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (char c : s) {
        if (!is_continuation(c)) ++n;
    }
    return n;
}

std::string_view utf8_suffix(std::string_view s, std::size_t n) {
    std::size_t pos = s.size();
    std::size_t seen = 0;
    while (pos > 0 && seen < n) {
        --pos;
        while (pos > 0 && is_continuation(s[pos])) --pos;
        ++seen;
    }
    return s.substr(pos);
}

std::string_view utf8_first(std::string_view s) {
    if (s.empty()) return s;
    std::size_t len = 1;
    while (len < s.size() && is_continuation(s[len])) ++len;
    return s.substr(0, len);
}

bool is_ascii_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

bool has_alnum(std::string_view s) {
    for (char c : s) {
        auto u = static_cast<unsigned char>(c);
        if (u >= 0x80 || std::isalnum(u)) return true;
    }
    return false;
}

std::string match_initial_case(std::string_view like, std::string_view word) {
    std::string out(word);
    if (like.empty() || out.empty()) return out;
    auto first = static_cast<unsigned char>(like.front());
    if (std::isupper(first)) {
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    }
    return out;
}

}  // namespace revguard::text

namespace revguard::text {

std::string apply_replacements(std::string_view s, std::vector<Replacement> replacements) {
    std::sort(replacements.begin(), replacements.end(),
              [](const Replacement& a, const Replacement& b) { return a.offset < b.offset; });
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    for (const auto& r : replacements) {
        if (r.offset < pos || r.offset + r.length > s.size()) {
            throw std::invalid_argument("overlapping or out-of-range replacement");
        }
        out.append(s.substr(pos, r.offset - pos));
        out += r.replacement;
        pos = r.offset + r.length;
    }
    out.append(s.substr(pos));
    return out;
}

}  // namespace revguard::text
