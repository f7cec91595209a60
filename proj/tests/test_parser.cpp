#include <doctest.h>

#include <random>

#include "favor/parser.hpp"

using namespace favor;

namespace {
const CaptionParser kParser;
}

TEST_CASE("empty input yields an empty structure") {
    auto [sm, trace] = kParser.parse("");
    CHECK(sm.camera_sequence.empty());
    CHECK(sm.subjects.empty());
    CHECK(sm.temporal_sequence.empty());
}

TEST_CASE("camera, subject, actions and order from one sentence") {
    auto [sm, trace] =
        kParser.parse("The camera pans left while the man in black stands up, then he sits down.");
    CHECK(sm.camera_sequence == std::vector<std::string>{"pans left"});
    REQUIRE(sm.subjects.size() == 1);
    CHECK(sm.subjects[0].identity == "man");
    REQUIRE(sm.subjects[0].attributes.size() == 1);
    CHECK(sm.subjects[0].attributes[0] == "in black");
    CHECK(sm.subjects[0].actions == std::vector<std::string>{"stands up", "sits down"});
    REQUIRE(sm.temporal_sequence.size() == 2);
    CHECK(sm.temporal_sequence[0].action == "stands up");
    CHECK(sm.temporal_sequence[1].action == "sits down");
}

TEST_CASE("wearing-participle becomes a modifier, not an action") {
    auto [sm, trace] = kParser.parse("A woman wearing a red coat waves.");
    REQUIRE(sm.subjects.size() == 1);
    CHECK(sm.subjects[0].identity == "woman");
    REQUIRE(sm.subjects[0].attributes.size() == 1);
    CHECK(sm.subjects[0].attributes[0] == "wearing a red coat");
    CHECK(sm.subjects[0].actions == std::vector<std::string>{"waves"});
}

TEST_CASE("detect_camera_phrases: direct lexicon hit with governor") {
    auto hits = kParser.detect_camera_phrases("the camera zooms in on her face");
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].first == "zooms in");
}

TEST_CASE("detect_camera_phrases: no governor means no hit") {
    auto hits = kParser.detect_camera_phrases("the man pans for gold");
    CHECK(hits.empty());
    // and the parse treats it as a subject action instead
    auto [sm, trace] = kParser.parse("the man pans for gold");
    REQUIRE(sm.subjects.size() == 1);
    REQUIRE(sm.subjects[0].actions.size() == 1);
    CHECK(sm.subjects[0].actions[0] == "pans for gold");
}

TEST_CASE("detect_camera_phrases: bare noun-gerund form") {
    auto hits = kParser.detect_camera_phrases("camera shaking");
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].first == "shaking");
}

TEST_CASE("conjunction splitting yields two actions") {
    auto [sm, trace] = kParser.parse("The man stands up and walks away.");
    REQUIRE(sm.subjects.size() == 1);
    CHECK(sm.subjects[0].actions == std::vector<std::string>{"stands up", "walks away"});
}

TEST_CASE("object coordination stays one action") {
    auto [sm, trace] = kParser.parse("The chef picks up the cup and the plate.");
    REQUIRE(sm.subjects.size() == 1);
    REQUIRE(sm.subjects[0].actions.size() == 1);
    CHECK(sm.subjects[0].actions[0] == "picks up the cup and the plate");
}

TEST_CASE("pronouns resolve to the most recent subject") {
    auto [sm, trace] = kParser.parse("A man enters. He waves. A woman sits. She stands up.");
    REQUIRE(sm.subjects.size() == 2);
    CHECK(sm.subjects[0].actions == std::vector<std::string>{"enters", "waves"});
    CHECK(sm.subjects[1].actions == std::vector<std::string>{"sits", "stands up"});
}

TEST_CASE("media frame unwraps to the inner subject") {
    auto [sm, trace] = kParser.parse("The video shows a man walking down the street.");
    REQUIRE(sm.subjects.size() == 1);
    CHECK(sm.subjects[0].identity == "man");
    REQUIRE(sm.subjects[0].actions.size() == 1);
    CHECK(sm.subjects[0].actions[0] == "walking down the street");
}

TEST_CASE("perception frame unwraps too") {
    auto [sm, trace] = kParser.parse("We see a dog running across the yard.");
    REQUIRE(sm.subjects.size() == 1);
    CHECK(sm.subjects[0].identity == "dog");
    REQUIRE(sm.subjects[0].actions.size() == 1);
    CHECK(sm.subjects[0].actions[0] == "running across the yard");
}

TEST_CASE("repeat mentions merge into one subject") {
    auto [sm, trace] = kParser.parse("The man waves. The man sits down.");
    REQUIRE(sm.subjects.size() == 1);
    CHECK(sm.subjects[0].actions.size() == 2);
}

TEST_CASE("'another' forces a distinct subject") {
    auto [sm, trace] = kParser.parse("A man waves. Another man sits down.");
    REQUIRE(sm.subjects.size() == 2);
    CHECK(sm.subjects[0].actions == std::vector<std::string>{"waves"});
    CHECK(sm.subjects[1].actions == std::vector<std::string>{"sits down"});
}

TEST_CASE("copular clauses produce no actions") {
    auto [sm, trace] = kParser.parse("The man is tall.");
    CHECK(sm.temporal_sequence.empty());
}

TEST_CASE("temporal sequence preserves textual order across subjects") {
    auto [sm, trace] =
        kParser.parse("The man waves while the woman sits down. Then the man walks away.");
    REQUIRE(sm.temporal_sequence.size() == 3);
    CHECK(sm.temporal_sequence[0].action == "waves");
    CHECK(sm.temporal_sequence[1].action == "sits down");
    CHECK(sm.temporal_sequence[2].action == "walks away");
    CHECK(sm.temporal_sequence[0].subject == sm.temporal_sequence[2].subject);
}

TEST_CASE("comma before a plain phrase keeps the complement together") {
    auto [sm, trace] = kParser.parse("The man sits down, with a sigh.");
    REQUIRE(sm.subjects.size() == 1);
    CHECK(sm.subjects[0].actions == std::vector<std::string>{"sits down with a sigh"});
}

TEST_CASE("coordinated camera verbs both register") {
    auto [sm, trace] = kParser.parse("The camera pans left and zooms in.");
    CHECK(sm.camera_sequence == std::vector<std::string>{"pans left", "zooms in"});
    CHECK(sm.subjects.empty());
}

TEST_CASE("media frame with gerund then pronoun continuation") {
    auto [sm, trace] =
        kParser.parse("The video begins with a chef chopping vegetables. He then stirs the pot.");
    REQUIRE(sm.subjects.size() == 1);
    CHECK(sm.subjects[0].identity == "chef");
    CHECK(sm.subjects[0].actions ==
          std::vector<std::string>{"chopping vegetables", "stirs the pot"});
}

TEST_CASE("subordinate clause introduces its own subject") {
    auto [sm, trace] = kParser.parse("A dog runs across the yard while two children chase it.");
    REQUIRE(sm.subjects.size() == 2);
    CHECK(sm.subjects[0].identity == "dog");
    CHECK(sm.subjects[1].identity == "children");
    CHECK(sm.subjects[1].actions == std::vector<std::string>{"chase it"});
}

TEST_CASE("trace conservation: every action has exactly one assignment") {
    const char* texts[] = {
        "The camera pans left while the man in black stands up, then he sits down.",
        "A woman wearing a red coat waves. She turns around and leaves.",
        "The video shows a man walking. The camera zooms in.",
    };
    for (const char* text : texts) {
        auto [sm, trace] = kParser.parse(text);
        std::size_t non_camera = 0, camera = 0;
        for (const auto& a : trace.assignments) (a.camera ? camera : non_camera)++;
        CHECK(sm.temporal_sequence.size() == non_camera);
        CHECK(sm.camera_sequence.size() == camera);
    }
}

TEST_CASE("shipped resource files match the built-in lexicons") {
    CaptionParser from_files = CaptionParser::from_files(
        std::string(FAVOR_RESOURCES_DIR) + "/camera_lexicon.txt",
        std::string(FAVOR_RESOURCES_DIR) + "/stop_verbs.txt");
    const char* texts[] = {
        "The camera pans left while the man in black stands up, then he sits down.",
        "The camera zooms in on her face. The view shifts to the door.",
        "A woman wearing a red coat waves and walks away.",
    };
    for (const char* text : texts) {
        auto [a, ta] = kParser.parse(text);
        auto [b, tb] = from_files.parse(text);
        CHECK(a.camera_sequence == b.camera_sequence);
        CHECK(a.subjects.size() == b.subjects.size());
        CHECK(a.temporal_sequence.size() == b.temporal_sequence.size());
    }
}

TEST_CASE("normalize_action_phrase: articles, case, head lemma") {
    CHECK(normalize_action_phrase("Picks up the cup.") == "pick up cup");
    CHECK(normalize_action_phrase("pick up cup") == "pick up cup");
    CHECK(normalize_action_phrase("WAVES") == "wave");
    CHECK(normalize_action_phrase("") == "");
    CHECK(normalize_action_phrase("  the   ") == "");
}

TEST_CASE("normalize_action_phrase is idempotent on fuzzed phrases") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> len(1, 6);
    std::uniform_int_distribution<int> chr('a', 'z');
    for (int iter = 0; iter < 200; ++iter) {
        std::string phrase;
        for (int w = 0; w < len(rng); ++w) {
            if (!phrase.empty()) phrase += ' ';
            for (int c = 0; c < len(rng); ++c) phrase += static_cast<char>(chr(rng));
        }
        std::string once = normalize_action_phrase(phrase);
        CHECK(normalize_action_phrase(once) == once);
    }
}

TEST_CASE("parser is deterministic and robust on arbitrary utf-8") {
    std::mt19937 rng(19);
    std::uniform_int_distribution<int> len(0, 120);
    std::uniform_int_distribution<unsigned> cp(1, 0x10FFFF);
    auto encode = [](unsigned c, std::string& out) {
        if (c >= 0xD800 && c <= 0xDFFF) c = 0xFFFD;
        if (c < 0x80) {
            out += static_cast<char>(c);
        } else if (c < 0x800) {
            out += static_cast<char>(0xC0 | (c >> 6));
            out += static_cast<char>(0x80 | (c & 0x3F));
        } else if (c < 0x10000) {
            out += static_cast<char>(0xE0 | (c >> 12));
            out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (c & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (c >> 18));
            out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (c & 0x3F));
        }
    };
    for (int iter = 0; iter < 500; ++iter) {
        std::string s;
        int n = len(rng);
        for (int i = 0; i < n; ++i) encode(cp(rng), s);
        auto [sm1, t1] = kParser.parse(s);
        auto [sm2, t2] = kParser.parse(s);
        CHECK(sm1.camera_sequence == sm2.camera_sequence);
        CHECK(sm1.temporal_sequence.size() == sm2.temporal_sequence.size());
        CHECK(sm1.subjects.size() == sm2.subjects.size());
    }
}
