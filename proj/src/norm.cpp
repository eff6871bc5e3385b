#include "acc/norm.hpp"

#include <algorithm>
#include <cstdint>

namespace acc {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Decodes one code point starting at text[pos] and advances pos. Malformed
// sequences decode to U+FFFD one byte at a time.
char32_t next_code_point(std::string_view text, std::size_t& pos) {
    const auto lead = static_cast<unsigned char>(text[pos]);
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    std::size_t extra = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        extra = 1;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        extra = 2;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        extra = 3;
        cp = lead & 0x07;
    } else {
        ++pos;
        return kReplacement;
    }
    if (pos + extra >= text.size()) {
        ++pos;
        return kReplacement;
    }
    for (std::size_t k = 1; k <= extra; ++k) {
        const auto byte = static_cast<unsigned char>(text[pos + k]);
        if ((byte & 0xC0) != 0x80) {
            ++pos;
            return kReplacement;
        }
        cp = (cp << 6) | (byte & 0x3F);
    }
    static constexpr char32_t kMinForLength[] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMinForLength[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++pos;
        return kReplacement;
    }
    pos += extra + 1;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_space(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

struct Range {
    char32_t lo;
    char32_t hi;
};

// Unicode P* categories outside ASCII (abridged to the blocks that occur in
// practice). ASCII uses the full printable-symbol set, as SQuAD-style scorers do.
constexpr Range kPunctuation[] = {
    {0x00A1, 0x00A1}, {0x00A7, 0x00A7}, {0x00AB, 0x00AB}, {0x00B6, 0x00B7},
    {0x00BB, 0x00BB}, {0x00BF, 0x00BF}, {0x037E, 0x037E}, {0x0387, 0x0387},
    {0x055A, 0x055F}, {0x0589, 0x058A}, {0x05BE, 0x05BE}, {0x05C0, 0x05C0},
    {0x05C3, 0x05C3}, {0x05C6, 0x05C6}, {0x05F3, 0x05F4}, {0x0609, 0x060A},
    {0x060C, 0x060D}, {0x061B, 0x061B}, {0x061D, 0x061F}, {0x066A, 0x066D},
    {0x06D4, 0x06D4}, {0x0964, 0x0965}, {0x0970, 0x0970}, {0x0E4F, 0x0E4F},
    {0x0E5A, 0x0E5B}, {0x10FB, 0x10FB}, {0x1360, 0x1368}, {0x166E, 0x166E},
    {0x169B, 0x169C}, {0x16EB, 0x16ED}, {0x2010, 0x2027}, {0x2030, 0x2043},
    {0x2045, 0x2051}, {0x2053, 0x205E}, {0x207D, 0x207E}, {0x208D, 0x208E},
    {0x2308, 0x230B}, {0x2329, 0x232A}, {0x2768, 0x2775}, {0x27C5, 0x27C6},
    {0x27E6, 0x27EF}, {0x2983, 0x2998}, {0x29D8, 0x29DB}, {0x29FC, 0x29FD},
    {0x2CF9, 0x2CFC}, {0x2CFE, 0x2CFF}, {0x2E00, 0x2E2E}, {0x2E30, 0x2E4F},
    {0x3001, 0x3003}, {0x3008, 0x3011}, {0x3014, 0x301F}, {0x3030, 0x3030},
    {0x303D, 0x303D}, {0x30A0, 0x30A0}, {0x30FB, 0x30FB}, {0xFE10, 0xFE19},
    {0xFE30, 0xFE52}, {0xFE54, 0xFE61}, {0xFE63, 0xFE63}, {0xFE68, 0xFE68},
    {0xFE6A, 0xFE6B}, {0xFF01, 0xFF03}, {0xFF05, 0xFF0A}, {0xFF0C, 0xFF0F},
    {0xFF1A, 0xFF1B}, {0xFF1F, 0xFF20}, {0xFF3B, 0xFF3D}, {0xFF3F, 0xFF3F},
    {0xFF5B, 0xFF5B}, {0xFF5D, 0xFF5D}, {0xFF5F, 0xFF65},
};

bool is_punctuation(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    const auto* it = std::upper_bound(std::begin(kPunctuation), std::end(kPunctuation), cp,
                                      [](char32_t v, const Range& r) { return v < r.lo; });
    if (it == std::begin(kPunctuation)) {
        return false;
    }
    --it;
    return cp <= it->hi;
}

// Simple one-to-one lowercase for Latin, Greek and Cyrillic.
char32_t to_lower(char32_t cp) {
    if (cp >= U'A' && cp <= U'Z') {
        return cp + 0x20;
    }
    if (cp < 0xC0) {
        return cp;
    }
    if ((cp >= 0xC0 && cp <= 0xDE) && cp != 0xD7) {
        return cp + 0x20;
    }
    if (cp >= 0x100 && cp <= 0x17F) {
        if (cp == 0x130) {
            return U'i';
        }
        if (cp == 0x178) {
            return 0xFF;
        }
        const bool even_upper = (cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177);
        const bool odd_upper = (cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E);
        if ((even_upper && cp % 2 == 0) || (odd_upper && cp % 2 == 1)) {
            return cp + 1;
        }
        return cp;
    }
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) {
        return cp + 0x20;
    }
    if (cp >= 0x410 && cp <= 0x42F) {
        return cp + 0x20;
    }
    if (cp >= 0x400 && cp <= 0x40F) {
        return cp + 0x50;
    }
    return cp;
}

bool is_article(std::string_view word) {
    return word == "a" || word == "an" || word == "the";
}

template <typename Fn>
void for_each_raw_word(std::string_view text, Fn&& fn) {
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t start = pos;
        const char32_t cp = next_code_point(text, pos);
        if (is_space(cp)) {
            if (!current.empty()) {
                fn(std::move(current));
                current.clear();
            }
        } else if (cp == kReplacement && pos - start == 1 &&
                   static_cast<unsigned char>(text[start]) >= 0x80) {
            append_utf8(current, kReplacement);
        } else {
            current.append(text.substr(start, pos - start));
        }
    }
    if (!current.empty()) {
        fn(std::move(current));
    }
}

// Lowercases and strips punctuation from a single whitespace-free word.
std::string clean_word(std::string_view word) {
    std::string out;
    out.reserve(word.size());
    std::size_t pos = 0;
    while (pos < word.size()) {
        const char32_t cp = next_code_point(word, pos);
        if (!is_punctuation(cp)) {
            append_utf8(out, to_lower(cp));
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    for_each_raw_word(text, [&](std::string w) { words.push_back(std::move(w)); });
    return words;
}

std::vector<std::string> word_tokenize(std::string_view text) {
    std::vector<std::string> words;
    for_each_raw_word(text, [&](std::string w) {
        std::string cleaned = clean_word(w);
        if (!cleaned.empty() && !is_article(cleaned)) {
            words.push_back(std::move(cleaned));
        }
    });
    return words;
}

std::string join_words(std::span<const std::string> words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += w;
    }
    return out;
}

std::string join_words(std::span<const std::string> words, WordSpan span) {
    return join_words(words.subspan(span.first, span.length()));
}

std::string normalize_answer(std::string_view text) {
    return join_words(word_tokenize(text));
}

NormalizedText::NormalizedText(std::string text)
    : raw(std::move(text)), words(word_tokenize(raw)) {
    normalized = join_words(words);
}

std::vector<WordSpan> find_span_occurrences(std::string_view span,
                                            std::span<const std::string> context_words) {
    const auto needle = word_tokenize(span);
    std::vector<WordSpan> hits;
    if (needle.empty()) {
        return hits;
    }

    // Normalized stream of the context, remembering where each word came from.
    std::vector<std::string> stream;
    std::vector<std::size_t> origin;
    for (std::size_t i = 0; i < context_words.size(); ++i) {
        for (auto& w : word_tokenize(context_words[i])) {
            stream.push_back(std::move(w));
            origin.push_back(i);
        }
    }
    if (stream.size() < needle.size()) {
        return hits;
    }
    for (std::size_t s = 0; s + needle.size() <= stream.size(); ++s) {
        if (std::equal(needle.begin(), needle.end(), stream.begin() + static_cast<std::ptrdiff_t>(s))) {
            hits.push_back({origin[s], origin[s + needle.size() - 1]});
        }
    }
    return hits;
}

}  // namespace acc
