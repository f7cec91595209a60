#include "favor/parser.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <unordered_set>

#include "favor/errors.hpp"
#include "favor/text.hpp"

namespace favor {

namespace {

using text::Token;

const std::unordered_set<std::string>& determiners() {
    static const std::unordered_set<std::string> s = {
        "a",     "an",    "the",   "this",  "that",   "these", "those", "his",  "her",
        "its",   "their", "my",    "our",   "your",   "some",  "each",  "every", "both",
        "all",   "another", "one", "two",   "three",  "four",  "five",  "several", "few",
        "many",  "no",
    };
    return s;
}

const std::unordered_set<std::string>& subject_pronouns() {
    static const std::unordered_set<std::string> s = {"he",  "she", "it",  "they",
                                                      "we",  "i",   "you", "someone",
                                                      "somebody", "one"};
    return s;
}

const std::unordered_set<std::string>& prepositions() {
    static const std::unordered_set<std::string> s = {
        "in",     "on",      "at",     "with",   "of",      "under",  "over",    "behind",
        "beside", "near",    "from",   "into",   "onto",    "across", "through", "toward",
        "towards", "against", "along",  "past",   "between", "beneath", "above",  "below",
        "inside", "outside", "by",     "upon",   "among",   "amid",   "within",  "without",
    };
    return s;
}

const std::unordered_set<std::string>& discourse_adverbs() {
    static const std::unordered_set<std::string> s = {
        "then",   "next",    "later",     "afterwards", "afterward", "subsequently",
        "meanwhile", "suddenly", "finally", "first",     "second",    "eventually",
        "initially", "immediately", "thereafter", "soon", "now",      "quickly",
        "slowly", "gently",  "carefully", "briefly",
    };
    return s;
}

const std::unordered_set<std::string>& subordinators() {
    static const std::unordered_set<std::string> s = {
        "while", "as", "when", "after", "before", "until", "because",
        "since", "whereas", "although", "though",
    };
    return s;
}

const std::unordered_set<std::string>& media_nouns() {
    static const std::unordered_set<std::string> s = {"video",  "clip",  "footage",
                                                      "scene",  "recording", "image",
                                                      "sequence", "movie", "film"};
    return s;
}

const std::unordered_set<std::string>& media_verbs() {
    static const std::unordered_set<std::string> s = {"show",    "depict", "display", "feature",
                                                      "capture", "present", "begin",  "open",
                                                      "start",   "reveal", "contain", "include"};
    return s;
}

const std::unordered_set<std::string>& perception_verbs() {
    static const std::unordered_set<std::string> s = {"see", "watch", "observe", "notice", "spot"};
    return s;
}

// Particles kept in a camera motion phrase ("zooms in", "pans left").
const std::unordered_set<std::string>& direction_particles() {
    static const std::unordered_set<std::string> s = {
        "in",   "out",  "up",    "down",   "left",   "right",    "away",     "around",
        "forward", "forwards", "backward", "backwards", "closer", "clockwise",
        "counterclockwise", "sideways", "upward", "downward", "back",
    };
    return s;
}

std::vector<std::string> read_phrase_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexicon file: " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        out.push_back(text::to_lower(t));
    }
    return out;
}

struct Word {
    std::string raw;
    std::string lower;
    std::string lemma;
    std::size_t offset = 0;
    bool comma_before = false;  // ',' ';' ':' or a dash separates it from the previous word
};

}  // namespace

struct CaptionParser::Impl {
    std::unordered_set<std::string> camera_single;            // single-word lexicon lemmas
    std::vector<std::pair<std::string, std::string>> camera_bi;  // two-word entries
    std::unordered_set<std::string> governors;
    std::unordered_set<std::string> stop_verbs;  // lemma form

    explicit Impl(const Lexicons& lex) {
        for (const auto& raw : lex.camera_lexicon) {
            auto toks = text::tokenize(raw);
            if (toks.size() == 1) {
                camera_single.insert(text::verb_lemma(toks[0].word));
            } else if (toks.size() >= 2) {
                camera_bi.emplace_back(text::verb_lemma(toks[0].word), text::to_lower(toks[1].word));
            }
        }
        for (const auto& g : lex.camera_governors) governors.insert(text::to_lower(g));
        for (const auto& v : lex.stop_verbs) stop_verbs.insert(text::verb_lemma(v));
    }

    bool in_camera_lexicon(const Word& w, const Word* next) const {
        if (camera_single.count(w.lemma)) return true;
        if (next)
            for (const auto& [a, b] : camera_bi)
                if (w.lemma == a && next->lower == b) return true;
        return false;
    }

    bool is_stop_verb(const std::string& lemma) const { return stop_verbs.count(lemma) > 0; }

    bool is_verb_like(const Word& w, bool np_before) const {
        if (determiners().count(w.lower) || prepositions().count(w.lower) ||
            subject_pronouns().count(w.lower) || discourse_adverbs().count(w.lower) ||
            subordinators().count(w.lower))
            return false;
        if (w.lower == "and" || w.lower == "or" || w.lower == "but") return false;
        if (is_stop_verb(w.lemma)) return true;
        if (text::is_known_verb_base(w.lemma)) return true;
        std::size_t n = w.lower.size();
        if (n > 4 && w.lower.ends_with("ing")) return true;
        if (n > 3 && w.lower.ends_with("ed")) return true;
        // Third-person -s only counts right after a complete noun phrase.
        if (np_before && n > 2 && w.lower.back() == 's' && w.lemma != w.lower) return true;
        return false;
    }
};

CaptionParser::Lexicons CaptionParser::builtin_lexicons() {
    Lexicons lex;
    lex.camera_lexicon = {"pan",      "tilt",    "zoom",    "zoom in",  "zoom out", "dolly",
                          "truck",    "shake",   "static",  "cut",      "focus shift",
                          "focus pull", "shift", "track",   "follow",   "rotate",  "push in",
                          "pull out", "pull back", "move",  "sweep",    "circle",  "drift",
                          "refocus",  "focus"};
    lex.camera_governors = {"camera", "viewpoint", "shot",  "lens",        "view",
                            "focus",  "frame",     "angle", "footage",     "picture",
                            "screen", "perspective", "scene"};
    lex.stop_verbs = {"be",     "have",   "do",      "can",    "could",  "may",     "might",
                      "must",   "shall",  "should",  "will",   "would",  "seem",    "appear",
                      "wear",   "remain", "say",     "show",   "depict", "display", "feature",
                      "contain", "include", "consist", "belong", "resemble"};
    return lex;
}

CaptionParser::CaptionParser() : impl_(std::make_shared<Impl>(builtin_lexicons())) {}

CaptionParser::CaptionParser(Lexicons lex) : impl_(std::make_shared<Impl>(lex)) {}

CaptionParser CaptionParser::from_files(const std::string& camera_lexicon_path,
                                        const std::string& stop_verbs_path) {
    Lexicons lex = builtin_lexicons();
    if (!camera_lexicon_path.empty()) lex.camera_lexicon = read_phrase_file(camera_lexicon_path);
    if (!stop_verbs_path.empty()) lex.stop_verbs = read_phrase_file(stop_verbs_path);
    return CaptionParser(std::move(lex));
}

namespace {

std::vector<Word> make_words(std::string_view sentence, std::size_t base_offset) {
    std::vector<Word> words;
    auto toks = text::tokenize(sentence);
    std::size_t prev_end = 0;
    for (const auto& t : toks) {
        Word w;
        w.raw = t.word;
        w.lower = text::to_lower(t.word);
        w.lemma = text::verb_lemma(w.lower);
        w.offset = base_offset + t.offset;
        for (std::size_t k = prev_end; k < t.offset; ++k) {
            char c = sentence[k];
            if (c == ',' || c == ';' || c == ':' || c == '-' || c == '(' || c == ')') {
                w.comma_before = true;
                break;
            }
        }
        prev_end = t.offset + t.word.size();
        words.push_back(std::move(w));
    }
    return words;
}

bool plural_ish(const std::string& head) {
    static const std::unordered_set<std::string> plurals = {"people", "children", "men",
                                                            "women",  "couple",   "group",
                                                            "pair",   "crowd",    "kids"};
    if (plurals.count(head)) return true;
    return head.size() > 2 && head.back() == 's' && head[head.size() - 2] != 's';
}

// Builder shared by parse() and detect_camera_phrases().
struct ClauseScanner {
    const CaptionParser::Impl& lex;
    bool camera_only;  // detect mode: record lexicon hits only

    StructuredMotion sm;
    ParseTrace trace;
    std::vector<std::pair<std::string, std::size_t>> camera_hits;

    // mention table mirrors sm.subjects indices
    int last_subject = -1;  // most recent non-camera subject

    enum class Owner { None, Subject, Camera, Media, Perception };
    Owner owner = Owner::None;
    int owner_subject = -1;

    explicit ClauseScanner(const CaptionParser::Impl& l, bool cam_only)
        : lex(l), camera_only(cam_only) {}

    int ensure_implicit_subject(std::size_t offset) {
        for (std::size_t i = 0; i < trace.mentions.size(); ++i)
            if (trace.mentions[i].head == "subject") return static_cast<int>(i);
        trace.mentions.push_back({"subject", {}, offset});
        sm.subjects.push_back({"subject", {}, {}});
        return static_cast<int>(trace.mentions.size() - 1);
    }

    int register_subject(const std::string& head, std::vector<std::string> modifiers,
                         std::size_t offset, bool force_new) {
        std::string head_l = text::to_lower(head);
        if (!force_new) {
            for (std::size_t i = 0; i < trace.mentions.size(); ++i) {
                if (text::to_lower(trace.mentions[i].head) == head_l) {
                    for (auto& m : modifiers) {
                        auto& mods = trace.mentions[i].modifiers;
                        if (std::find(mods.begin(), mods.end(), m) == mods.end()) {
                            mods.push_back(m);
                            sm.subjects[i].attributes.push_back(m);
                        }
                    }
                    return static_cast<int>(i);
                }
            }
        }
        trace.mentions.push_back({head, modifiers, offset});
        sm.subjects.push_back({head, modifiers, {}});
        return static_cast<int>(trace.mentions.size() - 1);
    }

    int resolve_pronoun(const std::string& pron) {
        if (trace.mentions.empty()) return -1;
        if (pron == "they") {
            for (int i = static_cast<int>(trace.mentions.size()) - 1; i >= 0; --i)
                if (plural_ish(text::to_lower(trace.mentions[static_cast<std::size_t>(i)].head)))
                    return i;
        }
        return last_subject >= 0 ? last_subject : static_cast<int>(trace.mentions.size()) - 1;
    }

    void record_action(const std::string& phrase, std::size_t offset, std::size_t sentence_idx) {
        if (phrase.empty()) return;
        if (owner == Owner::Camera) {
            if (!camera_only) sm.camera_sequence.push_back(phrase);
            trace.assignments.push_back({phrase, -1, true, false, sentence_idx, offset});
            return;
        }
        if (camera_only) return;
        int subj = owner_subject;
        bool implicit = false;
        if (subj < 0) {
            if (last_subject >= 0) {
                subj = last_subject;
            } else {
                subj = ensure_implicit_subject(offset);
                implicit = true;
            }
        }
        sm.subjects[static_cast<std::size_t>(subj)].actions.push_back(phrase);
        sm.temporal_sequence.push_back({subj, phrase});
        trace.assignments.push_back({phrase, subj, false, implicit, sentence_idx, offset});
        last_subject = subj;
    }

    void scan_sentence(const std::vector<Word>& words, std::size_t sentence_idx) {
        std::size_t i = 0;
        owner = Owner::None;
        owner_subject = -1;

        while (i < words.size()) {
            const Word& w = words[i];

            if (subordinators().count(w.lower) || w.lower == "then") {
                owner = Owner::None;
                owner_subject = -1;
                ++i;
                continue;
            }
            if (w.lower == "and" || w.lower == "or" || w.lower == "but") {
                ++i;
                continue;
            }
            if (discourse_adverbs().count(w.lower)) {
                ++i;
                continue;
            }
            if (w.lower == "there") {  // existential "there is/are ..."
                ++i;
                continue;
            }

            bool np_context = owner == Owner::Subject || owner == Owner::Camera;
            if (lex.is_verb_like(w, np_context)) {
                i = consume_verb_phrase(words, i, sentence_idx);
                continue;
            }

            if (subject_pronouns().count(w.lower)) {
                if (w.lower == "we" || w.lower == "you" || w.lower == "i" || w.lower == "one") {
                    owner = Owner::Perception;
                    owner_subject = -1;
                } else {
                    owner = Owner::Subject;
                    owner_subject = resolve_pronoun(w.lower);
                    if (owner_subject < 0) {
                        owner_subject = ensure_implicit_subject(w.offset);
                    }
                }
                ++i;
                continue;
            }

            // Noun phrase path.
            i = consume_noun_phrase(words, i);
        }
    }

    // Parses det? premod* head postmod* and sets the clause owner.
    std::size_t consume_noun_phrase(const std::vector<Word>& words, std::size_t i) {
        bool force_new = false;
        if (i < words.size() && determiners().count(words[i].lower)) {
            if (words[i].lower == "another") force_new = true;
            ++i;
        }
        std::vector<std::string> core;
        std::size_t head_offset = i < words.size() ? words[i].offset : 0;
        while (i < words.size()) {
            const Word& w = words[i];
            if (w.comma_before && !core.empty()) break;
            if (determiners().count(w.lower) || prepositions().count(w.lower) ||
                subject_pronouns().count(w.lower) || subordinators().count(w.lower) ||
                w.lower == "and" || w.lower == "or" || w.lower == "but" || w.lower == "then")
                break;
            if (lex.is_verb_like(w, !core.empty()) && !core.empty()) break;
            if (core.empty() && (w.lower == "other" || w.lower == "second" || w.lower == "third"))
                force_new = true;
            core.push_back(w.raw);
            ++i;
        }
        if (core.empty()) {  // nothing noun-like here; skip the token
            return i + 1;
        }
        std::string head = core.back();
        std::vector<std::string> modifiers;
        if (core.size() > 1) {
            std::string pre;
            for (std::size_t k = 0; k + 1 < core.size(); ++k) {
                if (!pre.empty()) pre += ' ';
                pre += core[k];
            }
            modifiers.push_back(pre);
        }

        // Postmodifiers: prepositional phrases and "wearing ..." participles.
        while (i < words.size()) {
            const Word& w = words[i];
            if (w.comma_before) break;
            bool participle_mod = w.lower.ends_with("ing") && lex.is_stop_verb(w.lemma);
            if (!prepositions().count(w.lower) && !participle_mod) break;
            std::string mod = w.raw;
            ++i;
            while (i < words.size()) {
                const Word& t = words[i];
                if (t.comma_before || prepositions().count(t.lower) ||
                    subordinators().count(t.lower) || t.lower == "and" || t.lower == "or" ||
                    t.lower == "then")
                    break;
                if (!determiners().count(t.lower) && lex.is_verb_like(t, true)) break;
                mod += ' ';
                mod += t.raw;
                ++i;
            }
            modifiers.push_back(mod);
        }

        std::string head_l = text::to_lower(head);
        if (lex.governors.count(head_l)) {
            owner = Owner::Camera;
            owner_subject = -1;
        } else if (media_nouns().count(head_l)) {
            owner = Owner::Media;
            owner_subject = -1;
        } else {
            owner = Owner::Subject;
            owner_subject = register_subject(head, std::move(modifiers), head_offset, force_new);
            if (!camera_only) last_subject = owner_subject;
        }
        return i;
    }

    // Parses aux* verb complement; records one action per coordinated verb.
    std::size_t consume_verb_phrase(const std::vector<Word>& words, std::size_t i,
                                    std::size_t sentence_idx) {
        // Meta frames hand the rest of the clause back to the scanner.
        if (owner == Owner::Media || owner == Owner::Perception) {
            bool meta = owner == Owner::Media ? media_verbs().count(words[i].lemma) > 0
                                              : perception_verbs().count(words[i].lemma) > 0;
            if (meta) {
                owner = Owner::None;
                owner_subject = -1;
                std::size_t j = i + 1;
                if (j < words.size() && words[j].lower == "with") ++j;  // "begins with ..."
                return j;
            }
            owner = Owner::Subject;  // e.g. "the video shakes": fall through as a subject
            owner_subject = register_subject(words[i > 0 ? i - 1 : 0].raw, {}, words[i].offset, false);
        }

        // Skip auxiliaries and negation up to the main verb ("is running",
        // "has been waving", "does not move").
        std::size_t main = i;
        while (main < words.size() &&
               (lex.is_stop_verb(words[main].lemma) || words[main].lower == "not" ||
                words[main].lower == "n't")) {
            std::size_t nxt = main + 1;
            if (nxt < words.size() && lex.is_verb_like(words[nxt], false)) {
                main = nxt;
            } else {
                break;
            }
        }

        const Word& verb = words[main];
        bool verb_is_stop = lex.is_stop_verb(verb.lemma);

        if (owner == Owner::Camera) {
            // Narrow phrase: verb plus direction particles. A stop verb with a
            // lexicon word in its complement ("is static") still counts.
            const Word* next = main + 1 < words.size() ? &words[main + 1] : nullptr;
            std::size_t end = main + 1;
            std::string phrase;
            std::size_t hit_offset = verb.offset;
            if (!verb_is_stop && (lex.in_camera_lexicon(verb, next) || !camera_only)) {
                phrase = verb.raw;
                while (end < words.size() && !words[end].comma_before &&
                       direction_particles().count(words[end].lower)) {
                    phrase += ' ';
                    phrase += words[end].raw;
                    ++end;
                }
                if (camera_only && !lex.in_camera_lexicon(verb, next)) phrase.clear();
            } else {
                // look inside the complement for a lexicon word ("remains static")
                for (std::size_t k = main + (verb_is_stop ? 1 : 0); k < words.size(); ++k) {
                    if (words[k].comma_before || subordinators().count(words[k].lower) ||
                        words[k].lower == "then")
                        break;
                    const Word* nn = k + 1 < words.size() ? &words[k + 1] : nullptr;
                    if (lex.in_camera_lexicon(words[k], nn)) {
                        phrase = words[k].raw;
                        hit_offset = words[k].offset;
                        end = k + 1;
                        while (end < words.size() && !words[end].comma_before &&
                               direction_particles().count(words[end].lower)) {
                            phrase += ' ';
                            phrase += words[end].raw;
                            ++end;
                        }
                        break;
                    }
                    end = k + 1;
                }
            }
            if (!phrase.empty()) {
                record_action(phrase, hit_offset, sentence_idx);
                camera_hits.emplace_back(phrase, hit_offset);
            }
            // Consume the remainder of the clause.
            while (end < words.size() && !words[end].comma_before &&
                   !subordinators().count(words[end].lower) && words[end].lower != "then" &&
                   words[end].lower != "and")
                ++end;
            return end;
        }

        if (camera_only) {  // not a camera clause; skip the phrase quickly
            std::size_t end = main + 1;
            while (end < words.size() && !words[end].comma_before &&
                   !subordinators().count(words[end].lower) && words[end].lower != "then" &&
                   words[end].lower != "and")
                ++end;
            return end;
        }

        if (verb_is_stop) {
            // Copular clause with no action ("the man is tall").
            std::size_t end = main + 1;
            while (end < words.size() && !words[end].comma_before &&
                   !subordinators().count(words[end].lower) && words[end].lower != "then" &&
                   words[end].lower != "and" && !lex.is_verb_like(words[end], false))
                ++end;
            return end;
        }

        // Action phrase: verb plus complement, split at coordinated verbs.
        std::string phrase = verb.raw;
        std::size_t start_offset = verb.offset;
        std::size_t k = main + 1;
        while (k < words.size()) {
            const Word& t = words[k];
            bool boundary = subordinators().count(t.lower) || t.lower == "then";
            if (boundary) break;
            if (t.lower == "and" || t.lower == "or" || t.comma_before) {
                // Coordinated verb -> close this action, start the next.
                std::size_t probe = k;
                if (t.lower == "and" || t.lower == "or") ++probe;
                if (probe < words.size() && lex.is_verb_like(words[probe], true) &&
                    !lex.is_stop_verb(words[probe].lemma)) {
                    record_action(phrase, start_offset, sentence_idx);
                    phrase = words[probe].raw;
                    start_offset = words[probe].offset;
                    k = probe + 1;
                    continue;
                }
                if (probe < words.size() && subject_pronouns().count(words[probe].lower))
                    break;  // "and she sits": new clause
                // "and the woman sits" starts a clause; "and the plate" is
                // object coordination. Look past the noun phrase for a verb;
                // a determiner binds the next word as its noun ("a sigh" is
                // never determiner + verb).
                std::size_t look = probe;
                while (look < words.size()) {
                    if (determiners().count(words[look].lower)) {
                        look += 2;
                        continue;
                    }
                    if (lex.is_verb_like(words[look], look > probe) ||
                        subordinators().count(words[look].lower) || words[look].lower == "then" ||
                        words[look].lower == "and" || words[look].lower == "or")
                        break;
                    ++look;
                }
                bool clause_follows = look < words.size() && lex.is_verb_like(words[look], look > probe);
                if (clause_follows || probe >= words.size()) break;
                // no clause ahead: the comma or conjunction joins objects
                if (t.lower == "and" || t.lower == "or") {
                    phrase += ' ';
                    phrase += t.raw;
                    ++k;
                    continue;
                }
            }
            phrase += ' ';
            phrase += t.raw;
            ++k;
        }
        record_action(phrase, start_offset, sentence_idx);
        return k;
    }
};

}  // namespace

std::pair<StructuredMotion, ParseTrace> CaptionParser::parse(std::string_view text) const {
    ClauseScanner scanner(*impl_, false);
    scanner.trace.sentences = text::sentence_spans(text);
    for (std::size_t si = 0; si < scanner.trace.sentences.size(); ++si) {
        auto [b, e] = scanner.trace.sentences[si];
        auto words = make_words(text.substr(b, e - b), b);
        if (!words.empty()) scanner.scan_sentence(words, si);
    }
    if (scanner.trace.assignments.empty() && !text::trim(text).empty())
        scanner.trace.notes.push_back("no actions or camera motions recognized");
    return {std::move(scanner.sm), std::move(scanner.trace)};
}

std::vector<std::pair<std::string, std::size_t>> CaptionParser::detect_camera_phrases(
    std::string_view text) const {
    ClauseScanner scanner(*impl_, true);
    auto spans = text::sentence_spans(text);
    for (std::size_t si = 0; si < spans.size(); ++si) {
        auto [b, e] = spans[si];
        auto words = make_words(text.substr(b, e - b), b);
        if (!words.empty()) scanner.scan_sentence(words, si);
    }
    std::sort(scanner.camera_hits.begin(), scanner.camera_hits.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return scanner.camera_hits;
}

std::string normalize_action_phrase(std::string_view phrase) {
    std::string stripped = text::strip_punct(phrase);
    std::string lower = text::to_lower(stripped);
    auto toks = text::tokenize(lower);
    std::string out;
    bool first = true;
    for (const auto& t : toks) {
        std::string w = t.word;
        if (w == "a" || w == "an" || w == "the") continue;
        if (first) {
            w = text::verb_lemma(w);
            first = false;
        }
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

}  // namespace favor
