#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace abl {

// A non-empty list of words. Words never contain whitespace or parentheses.
struct Sentence {
    std::vector<std::string> tokens;

    std::size_t size() const noexcept { return tokens.size(); }
    const std::string& operator[](std::size_t i) const { return tokens[i]; }

    // Words joined by single spaces.
    std::string text() const;
    // Words [begin, end) joined by single spaces.
    std::string text(std::size_t begin, std::size_t end) const;

    friend bool operator==(const Sentence&, const Sentence&) = default;
};

using Corpus = std::vector<Sentence>;

struct PlainCorpus {
    Corpus sentences;
    std::size_t skipped_lines = 0;  // whitespace-only lines
};

// One sentence per non-empty line, tokens separated by runs of blanks.
// Throws FormatError on invalid UTF-8 or tokens containing parentheses.
PlainCorpus parse_plain_corpus(std::string_view text);
std::string serialize_plain_corpus(const Corpus& corpus);

bool is_valid_utf8(std::string_view text);

// Splits on runs of spaces and tabs.
std::vector<std::string> split_words(std::string_view line);

}  // namespace abl
