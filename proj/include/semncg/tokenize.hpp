#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace semncg {

namespace detail {

// UTF-8 punctuation that shows up in news text: en/em dash, curly quotes,
// ellipsis. Stripped at token edges like ASCII punctuation.
inline constexpr std::array<std::string_view, 7> utf8_punctuation{
    "\xE2\x80\x93", "\xE2\x80\x94", "\xE2\x80\x98", "\xE2\x80\x99",
    "\xE2\x80\x9C", "\xE2\x80\x9D", "\xE2\x80\xA6"};

inline bool is_ascii_punct(char c) {
    auto u = static_cast<unsigned char>(c);
    return (u >= 33 && u <= 47) || (u >= 58 && u <= 64) || (u >= 91 && u <= 96) ||
           (u >= 123 && u <= 126);
}

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Length of the punctuation mark that starts at `pos`, or 0.
inline std::size_t punct_at(std::string_view s, std::size_t pos) {
    if (is_ascii_punct(s[pos])) return 1;
    for (auto p : utf8_punctuation)
        if (s.substr(pos, p.size()) == p) return p.size();
    return 0;
}

// Length of the punctuation mark that ends just before `end`, or 0.
inline std::size_t punct_before(std::string_view s, std::size_t end) {
    if (is_ascii_punct(s[end - 1])) return 1;
    for (auto p : utf8_punctuation)
        if (end >= p.size() && s.substr(end - p.size(), p.size()) == p) return p.size();
    return 0;
}

inline std::string normalize_token(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size();) {
        // Curly single quotes become ASCII apostrophes so "night’s" and
        // "night's" tokenize identically.
        if (raw.substr(i, 3) == "\xE2\x80\x99" || raw.substr(i, 3) == "\xE2\x80\x98") {
            out.push_back('\'');
            i += 3;
            continue;
        }
        char c = raw[i++];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        out.push_back(c);
    }
    return out;
}

}  // namespace detail

// Lowercases, splits on whitespace and strips punctuation from both ends of
// each token. Internal apostrophes and hyphens survive.
inline std::vector<std::string> tokenize(std::string_view sentence) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < sentence.size()) {
        while (i < sentence.size() && detail::is_space(sentence[i])) ++i;
        std::size_t start = i;
        while (i < sentence.size() && !detail::is_space(sentence[i])) ++i;
        std::string_view tok = sentence.substr(start, i - start);
        while (!tok.empty()) {
            std::size_t n = detail::punct_at(tok, 0);
            if (n == 0) break;
            tok.remove_prefix(n);
        }
        while (!tok.empty()) {
            std::size_t n = detail::punct_before(tok, tok.size());
            if (n == 0) break;
            tok.remove_suffix(n);
        }
        if (!tok.empty()) tokens.push_back(detail::normalize_token(tok));
    }
    return tokens;
}

}  // namespace semncg
