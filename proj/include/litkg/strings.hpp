#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace litkg::str {

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

inline char to_lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

inline std::string lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(to_lower(c));
    return out;
}

inline std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

/// Lowercase, replace punctuation with spaces, collapse whitespace runs
/// to single spaces, trim. ASCII-only; other bytes pass through.
inline std::string normalize_text(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c) || is_punct(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(to_lower(c));
    }
    return out;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

/// Rule-based suffix singularizer applied per token:
///   -ies -> -y (len >= 5), -es dropped after s/x/z/ch/sh, plain -s dropped
///   (guarding -ss, -us, -is endings and short tokens).
inline std::string lemmatize_token(std::string_view t) {
    std::string s(t);
    if (s.size() >= 5 && ends_with(s, "ies")) {
        s.erase(s.size() - 3);
        s.push_back('y');
        return s;
    }
    if (s.size() >= 4 && ends_with(s, "es")) {
        std::string_view stem = std::string_view(s).substr(0, s.size() - 2);
        if (ends_with(stem, "s") || ends_with(stem, "x") || ends_with(stem, "z") ||
            ends_with(stem, "ch") || ends_with(stem, "sh")) {
            s.erase(s.size() - 2);
            return s;
        }
    }
    if (s.size() >= 4 && ends_with(s, "s") && !ends_with(s, "ss") && !ends_with(s, "us") &&
        !ends_with(s, "is")) {
        s.pop_back();
    }
    return s;
}

/// FNV-1a 64-bit. Fixed public hash used by the fallback text encoder.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace litkg::str
