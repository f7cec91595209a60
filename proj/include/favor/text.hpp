#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace favor::text {

struct Token {
    std::string word;     // original spelling
    std::size_t offset;   // byte offset into the source text
};

// Splits text into word tokens (letters, digits, apostrophes, hyphens).
// Multi-byte UTF-8 sequences are treated as word characters so code points
// are never split.
std::vector<Token> tokenize(std::string_view text);

// Sentence spans as [begin, end) byte ranges. Decimal points and ellipses do
// not end a sentence; newlines do.
std::vector<std::pair<std::size_t, std::size_t>> sentence_spans(std::string_view text);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Strips leading/trailing punctuation (quotes, brackets, periods, commas).
std::string strip_punct(std::string_view s);

// Collapses runs of whitespace to single spaces and trims.
std::string collapse_ws(std::string_view s);

// Maps an inflected English verb form to its base form: irregular table
// first, then -ies/-es/-s, -ing and -ed suffix rules with consonant
// de-doubling and final-e restoration. Idempotent on the forms it produces.
std::string verb_lemma(std::string_view word);

// True when the word is a base form in the built-in verb list.
bool is_known_verb_base(std::string_view lower_word);

// True for a/an/the and possessive determiners, dropped by the lexical
// similarity tokenizer.
bool is_article_or_possessive(std::string_view lower_word);

// FNV-1a, used for cache keys and input digests (not cryptographic).
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

}  // namespace favor::text
