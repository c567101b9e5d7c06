#include "abl/corpus.hpp"

#include <cstdint>

#include "abl/error.hpp"

namespace abl {

std::string Sentence::text() const { return text(0, tokens.size()); }

std::string Sentence::text(std::size_t begin, std::size_t end) const {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (i != begin) out += ' ';
        out += tokens[i];
    }
    return out;
}

bool is_valid_utf8(std::string_view text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        const auto c = static_cast<unsigned char>(text[i]);
        std::size_t extra = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + extra >= n) return false;
        for (std::size_t k = 1; k <= extra; ++k) {
            const auto cc = static_cast<unsigned char>(text[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // overlong forms, surrogates, out of range
        static constexpr std::uint32_t kMin[] = {0, 0x80, 0x800, 0x10000};
        if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += extra + 1;
    }
    return true;
}

std::vector<std::string> split_words(std::string_view line) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) words.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return words;
}

PlainCorpus parse_plain_corpus(std::string_view text) {
    if (!is_valid_utf8(text)) throw FormatError(0, "corpus is not valid UTF-8");
    PlainCorpus result;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.empty()) continue;
        auto words = split_words(line);
        if (words.empty()) {
            ++result.skipped_lines;
            continue;
        }
        for (const auto& w : words) {
            if (w.find_first_of("()") != std::string::npos)
                throw FormatError(line_no, "token '" + w + "' contains a parenthesis");
        }
        result.sentences.push_back(Sentence{std::move(words)});
    }
    return result;
}

std::string serialize_plain_corpus(const Corpus& corpus) {
    std::string out;
    for (const auto& s : corpus) {
        out += s.text();
        out += '\n';
    }
    return out;
}

}  // namespace abl
