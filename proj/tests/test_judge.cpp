#include <doctest.h>

#include <filesystem>

#include "favor/errors.hpp"
#include "favor/judge.hpp"

using namespace favor;

namespace {

const char* kGoodReply =
    "Correctness Analysis\nThe response covers the main motions.\n\n"
    "Detailedness Analysis\nSome camera detail is missing.\n\n"
    "Ratings\nCorrectness Rating: 7\nDetailedness Rating: 5\n";

}  // namespace

TEST_CASE("build_judge_prompt renders caption and response exactly once") {
    JudgePrompt p = build_judge_prompt("the man waves", "a man waving");
    CHECK(p.template_version == judge_template_version());
    CHECK(p.rendered.find("Correctness Rating:") != std::string::npos);
    CHECK(p.rendered.find("from 1 to 10") != std::string::npos);

    auto count = [&](const std::string& needle) {
        std::size_t n = 0, pos = 0;
        while ((pos = p.rendered.find(needle, pos)) != std::string::npos) {
            ++n;
            pos += needle.size();
        }
        return n;
    };
    CHECK(count("the man waves") == 1);
    CHECK(count("a man waving") == 1);
    CHECK(p.rendered.find("{caption}") == std::string::npos);
    CHECK(p.rendered.find("{response}") == std::string::npos);
}

TEST_CASE("build_judge_prompt is pure and brace-safe") {
    JudgePrompt a = build_judge_prompt("cap", "resp");
    JudgePrompt b = build_judge_prompt("cap", "resp");
    CHECK(a.rendered == b.rendered);

    JudgePrompt braces = build_judge_prompt("cap with {response} inside", "resp");
    CHECK(braces.rendered.find("cap with {response} inside") != std::string::npos);

    CHECK_THROWS_AS(build_judge_prompt("", "resp"), ValidationError);
    CHECK_THROWS_AS(build_judge_prompt("cap", "  "), ValidationError);
}

TEST_CASE("parse_judge_reply extracts ratings and analyses") {
    JudgeResult r = parse_judge_reply(kGoodReply);
    CHECK(r.correctness == 7);
    CHECK(r.detailedness == 5);
    CHECK(r.correctness_analysis == "The response covers the main motions.");
    CHECK(r.detailedness_analysis == "Some camera detail is missing.");
}

TEST_CASE("parse_judge_reply tolerates markdown and brackets") {
    JudgeResult r = parse_judge_reply(
        "**Correctness Rating:** [8]\nsome text\n**Detailedness Rating:** 3");
    CHECK(r.correctness == 8);
    CHECK(r.detailedness == 3);
}

TEST_CASE("parse_judge_reply rejects out-of-range and missing ratings") {
    CHECK_THROWS_AS(parse_judge_reply("Correctness Rating: 11\nDetailedness Rating: 5"), JudgeError);
    CHECK_THROWS_AS(parse_judge_reply("Correctness Rating: 0\nDetailedness Rating: 5"), JudgeError);
    CHECK_THROWS_AS(parse_judge_reply("Detailedness Rating: 5"), JudgeError);
    CHECK_THROWS_AS(parse_judge_reply("no ratings at all"), JudgeError);
}

TEST_CASE("parse_judge_reply: the final stated rating wins") {
    JudgeResult r = parse_judge_reply(
        "Draft: Correctness Rating: 4\nDetailedness Rating: 4\n"
        "Final answer after reflection:\nCorrectness Rating: 9\nDetailedness Rating: 6\n");
    CHECK(r.correctness == 9);
    CHECK(r.detailedness == 6);
}

TEST_CASE("judge_sample: happy path uses one attempt") {
    MockJudgeClient mock({kGoodReply});
    auto [result, failure] = judge_sample(mock, "cap", "resp", 3);
    REQUIRE(result.has_value());
    CHECK(!failure.has_value());
    CHECK(result->attempts == 1);
    CHECK(result->correctness == 7);
    CHECK(mock.calls() == 1);
}

TEST_CASE("judge_sample: fail twice then succeed within budget 3") {
    MockJudgeClient mock({"!boom", "!boom", kGoodReply});
    auto [result, failure] = judge_sample(mock, "cap", "resp", 3);
    REQUIRE(result.has_value());
    CHECK(result->attempts == 3);
    CHECK(mock.calls() == 3);
}

TEST_CASE("judge_sample: budget exhaustion after exactly 2 attempts") {
    MockJudgeClient mock({"!down"});
    auto [result, failure] = judge_sample(mock, "cap", "resp", 2);
    CHECK(!result.has_value());
    REQUIRE(failure.has_value());
    CHECK(failure->attempts == 2);
    CHECK(mock.calls() == 2);
}

TEST_CASE("judge_sample: an out-of-range rating consumes a retry") {
    MockJudgeClient mock({"Correctness Rating: 11\nDetailedness Rating: 5", kGoodReply});
    auto [result, failure] = judge_sample(mock, "cap", "resp", 3);
    REQUIRE(result.has_value());
    CHECK(result->attempts == 2);
}

TEST_CASE("judge_sample: cache makes the rerun free") {
    JudgeCache cache;
    {
        MockJudgeClient mock({kGoodReply});
        auto [r, f] = judge_sample(mock, "cap", "resp", 3, &cache);
        REQUIRE(r.has_value());
        CHECK(mock.calls() == 1);
    }
    {
        MockJudgeClient mock({kGoodReply});
        auto [r, f] = judge_sample(mock, "cap", "resp", 3, &cache);
        REQUIRE(r.has_value());
        CHECK(r->from_cache);
        CHECK(mock.calls() == 0);  // zero client calls on a warm cache
    }
}

TEST_CASE("judge cache persists on disk") {
    std::string dir = "judge_cache_test";
    std::filesystem::remove_all(dir);
    {
        JudgeCache cache(dir);
        MockJudgeClient mock({kGoodReply});
        auto [r, f] = judge_sample(mock, "cap2", "resp2", 3, &cache);
        REQUIRE(r.has_value());
    }
    {
        JudgeCache cache(dir);  // fresh instance, same directory
        MockJudgeClient mock({kGoodReply});
        auto [r, f] = judge_sample(mock, "cap2", "resp2", 3, &cache);
        REQUIRE(r.has_value());
        CHECK(r->from_cache);
        CHECK(mock.calls() == 0);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("aggregate_judge means, exclusions, and empty set") {
    JudgeResult a;
    a.correctness = 7;
    a.detailedness = 5;
    JudgeResult b;
    b.correctness = 3;
    b.detailedness = 5;
    JudgeSummary s = aggregate_judge({a, b}, 2);
    REQUIRE(s.gpt_c.has_value());
    CHECK(*s.gpt_c == 5.0);
    CHECK(*s.gpt_d == 5.0);
    CHECK(s.failures == 2);
    CHECK(s.judged == 2);

    JudgeSummary single = aggregate_judge({a}, 0);
    CHECK(*single.gpt_c == 7.0);
    CHECK(*single.gpt_d == 5.0);

    JudgeSummary empty = aggregate_judge({}, 3);
    CHECK(!empty.gpt_c.has_value());
    CHECK(!empty.gpt_d.has_value());
    CHECK(empty.failures == 3);
}

TEST_CASE("missing credential fails at construction naming the variable") {
    HttpJudgeConfig cfg;
    cfg.endpoint = "http://localhost:1";
    cfg.model = "judge";
    cfg.api_key_env = "FAVOR_TEST_NO_SUCH_KEY";
    try {
        make_http_judge_client(cfg);
        FAIL("expected JudgeError");
    } catch (const JudgeError& e) {
        CHECK(std::string(e.what()).find("FAVOR_TEST_NO_SUCH_KEY") != std::string::npos);
    }
}
