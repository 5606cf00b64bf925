#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ontoground::text {

/// Locale-independent ASCII lowercase fold; bytes >= 0x80 pass through
/// unchanged so UTF-8 content compares byte-exact.
std::string fold_case(std::string_view s);

/// Token count: number of maximal nonempty runs of non-whitespace characters.
int count_tokens(std::string_view s);

bool is_word_char(char c);

/// A word occurrence inside a larger text, with byte offsets.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last byte
  std::string token;    // original bytes
};

/// Maximal runs of word characters ([A-Za-z0-9_] plus non-ASCII bytes).
std::vector<Span> word_spans(std::string_view s);

/// Unique case-folded word tokens of `s`, sorted.
std::vector<std::string> folded_terms(std::string_view s);

/// True if folded `term` occurs in folded `hay` delimited by non-word
/// characters on both sides. `term` may contain internal spaces.
bool contains_term(std::string_view hay_folded, std::string_view term_folded);

/// Levenshtein distance, early-exiting once it exceeds `limit`.
/// Returns limit+1 when the true distance is larger than `limit`.
int bounded_edit_distance(std::string_view a, std::string_view b, int limit);

/// Split on sentence terminators (. ! ? ; and newline); spans cover the
/// whole input, terminators attached to the preceding sentence.
std::vector<Span> split_sentences(std::string_view s);

/// Parse a decimal number (optional sign and fraction). `end` receives the
/// offset one past the literal. Returns false if `pos` does not start one.
bool parse_number(std::string_view s, std::size_t pos, double& value, std::size_t& end);

}  // namespace ontoground::text
