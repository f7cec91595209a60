#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "favor/annotation.hpp"

namespace favor {

// A noun phrase that can own actions: head word, attribute-like modifiers
// (premodifying adjectives, "in black", "wearing a red coat"), and the byte
// offset of its first occurrence.
struct SubjectMention {
    std::string head;
    std::vector<std::string> modifiers;
    std::size_t first_offset = 0;
};

struct ParseAssignment {
    std::string action;
    int subject = -1;      // index into the mention table; -1 for camera
    bool camera = false;
    bool implicit = false;  // action had no resolvable subject
    std::size_t sentence = 0;
    std::size_t offset = 0;
};

// Explains how the extraction decomposed the text: every extracted action
// phrase appears in exactly one assignment.
struct ParseTrace {
    std::vector<std::pair<std::size_t, std::size_t>> sentences;
    std::vector<SubjectMention> mentions;
    std::vector<ParseAssignment> assignments;
    std::vector<std::string> notes;
};

// Rule-based caption-to-structure extractor: sentence segmentation, clause
// splitting, noun-phrase chunking for subjects, verb-phrase chunking for
// actions, a camera lexicon gated by governing nouns, recency-based pronoun
// resolution, and meta-frame unwrapping ("the video shows a man ...").
// Immutable after construction; parse calls are pure and thread-safe.
class CaptionParser {
public:
    struct Lexicons {
        std::vector<std::string> camera_lexicon;    // motion phrases, lemma form
        std::vector<std::string> camera_governors;  // nouns that license camera readings
        std::vector<std::string> stop_verbs;        // never action heads
    };

    CaptionParser();  // built-in lexicons
    explicit CaptionParser(Lexicons lex);

    // Loads overrides from plain-text files (one phrase per line, '#'
    // comments); empty paths keep the built-ins.
    static CaptionParser from_files(const std::string& camera_lexicon_path,
                                    const std::string& stop_verbs_path);

    std::pair<StructuredMotion, ParseTrace> parse(std::string_view text) const;

    // Camera lexicon hits whose clause carries a camera governing noun,
    // case-insensitive with inflection handling, offsets ascending.
    std::vector<std::pair<std::string, std::size_t>> detect_camera_phrases(
        std::string_view text) const;

    static Lexicons builtin_lexicons();

    struct Impl;

private:
    std::shared_ptr<const Impl> impl_;
};

// Lowercases, strips articles and trailing punctuation, lemmatizes the verb
// head. Idempotent.
std::string normalize_action_phrase(std::string_view phrase);

}  // namespace favor
