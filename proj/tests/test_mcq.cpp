#include <doctest.h>

#include <algorithm>
#include <random>

#include "favor/errors.hpp"
#include "favor/mcq.hpp"

using namespace favor;

namespace {

std::vector<std::string> five_options(const std::string& stem) {
    return {stem + " alpha", stem + " bravo", stem + " charlie", stem + " delta", stem + " echo"};
}

McqItem item(const std::string& id, McqTask task, int answer) {
    McqItem it;
    it.question_id = id;
    it.video_id = "v_" + id;
    it.task = task;
    it.question = "What happens?";
    it.options = five_options("opt " + id);
    it.answer_index = answer;
    return it;
}

}  // namespace

TEST_CASE("extract_choice tier 1: verbatim option text") {
    auto opts = five_options("x");
    CHECK(extract_choice(opts[2], opts) == 2);
    CHECK(extract_choice("  X Charlie. ", opts) == 2);  // case/punctuation-insensitive
}

TEST_CASE("extract_choice tier 2: labels") {
    auto opts = five_options("x");
    CHECK(extract_choice("The answer is (4).", opts) == 3);
    CHECK(extract_choice("B) something unrelated", opts) == 1);
    CHECK(extract_choice("option 3", opts) == 2);
    CHECK(extract_choice("I pick choice C", opts) == 2);
    CHECK(extract_choice("D", opts) == 3);
}

TEST_CASE("extract_choice tier 3: contained option text") {
    auto opts = five_options("x");
    CHECK(extract_choice("I believe it is x delta because of the motion.", opts) == 3);
}

TEST_CASE("extract_choice: ambiguity yields none") {
    auto opts = five_options("x");
    CHECK(!extract_choice("It is x delta or maybe x echo.", opts).has_value());
    CHECK(!extract_choice("", opts).has_value());
    CHECK(!extract_choice("no idea", opts).has_value());
    CHECK(!extract_choice("(1) or (2)", opts).has_value());
}

TEST_CASE("extract_choice: nested containment picks the longest") {
    std::vector<std::string> opts = {"walks", "walks away slowly", "sits", "stands", "jumps"};
    CHECK(extract_choice("The man walks away slowly.", opts) == 1);
}

TEST_CASE("extract_choice: leading article is not a label") {
    std::vector<std::string> opts = {"a man waves", "a woman sits", "a dog barks", "a cat sleeps",
                                     "nothing happens"};
    CHECK(extract_choice("A woman sits", opts) == 1);  // not read as label 'A'
}

TEST_CASE("score_mcq: all correct, one task half right") {
    std::vector<McqItem> items;
    std::vector<ModelAnswerRecord> answers;
    int id = 0;
    for (McqTask t : kMcqTasks) {
        for (int k = 0; k < 4; ++k) {
            McqItem it = item(std::to_string(id++), t, k % 5);
            answers.push_back({it.question_id, it.options[static_cast<std::size_t>(it.answer_index)]});
            items.push_back(it);
        }
    }
    AccuracyReport all_right = score_mcq(items, answers);
    CHECK(all_right.overall.accuracy_pct() == 100.0);
    for (McqTask t : kMcqTasks) CHECK(all_right.per_task.at(t).accuracy_pct() == 100.0);

    // break half of AS
    for (std::size_t i = 0; i < answers.size(); ++i) {
        if (items[i].task == McqTask::AS && i % 2 == 0)
            answers[i].response = items[i].options[static_cast<std::size_t>(
                (items[i].answer_index + 1) % 5)];
    }
    AccuracyReport mixed = score_mcq(items, answers);
    CHECK(mixed.per_task.at(McqTask::AS).accuracy_pct() == 50.0);
    double expected_overall = 100.0 * (24.0 - 2.0) / 24.0;
    CHECK(mixed.overall.accuracy_pct() == doctest::Approx(expected_overall).epsilon(1e-12));
}

TEST_CASE("score_mcq: missing and unextractable answers count as wrong") {
    std::vector<McqItem> items = {item("q1", McqTask::AS, 0), item("q2", McqTask::CM, 1)};
    std::vector<ModelAnswerRecord> answers = {{"q1", "gibberish with no option"}};
    AccuracyReport r = score_mcq(items, answers);
    CHECK(r.overall.total == 2);
    CHECK(r.overall.correct == 0);
    CHECK(r.unanswerable == 1);
    CHECK(r.missing_answers == 1);
}

TEST_CASE("score_mcq validation errors") {
    std::vector<McqItem> items = {item("q1", McqTask::AS, 0)};
    CHECK_THROWS_AS(score_mcq(items, {{"nope", "x"}}), ValidationError);
    CHECK_THROWS_AS(score_mcq(items, {{"q1", "a"}, {"q1", "b"}}), ValidationError);

    McqItem four = item("q4", McqTask::AS, 0);
    four.options.pop_back();
    CHECK_THROWS_AS(score_mcq({four}, {}), ValidationError);
}

TEST_CASE("accuracy is invariant under permutation of items and answers") {
    std::mt19937 rng(8);
    std::vector<McqItem> items;
    std::vector<ModelAnswerRecord> answers;
    for (int i = 0; i < 30; ++i) {
        McqItem it = item(std::to_string(i), kMcqTasks[static_cast<std::size_t>(i) % 6], i % 5);
        answers.push_back({it.question_id,
                           it.options[static_cast<std::size_t>((i % 3 == 0) ? it.answer_index
                                                                            : (it.answer_index + 1) % 5)]});
        items.push_back(it);
    }
    AccuracyReport base = score_mcq(items, answers);
    std::shuffle(items.begin(), items.end(), rng);
    std::shuffle(answers.begin(), answers.end(), rng);
    AccuracyReport shuffled = score_mcq(items, answers);
    CHECK(base.overall.accuracy_pct() == shuffled.overall.accuracy_pct());
    for (McqTask t : kMcqTasks)
        CHECK(base.per_task.at(t).accuracy_pct() == shuffled.per_task.at(t).accuracy_pct());
}

TEST_CASE("re-labeling options leaves text-referencing scores unchanged") {
    std::mt19937 rng(9);
    std::vector<McqItem> items;
    std::vector<ModelAnswerRecord> answers;
    for (int i = 0; i < 20; ++i) {
        McqItem it = item(std::to_string(i), McqTask::SAD, i % 5);
        answers.push_back({it.question_id, it.options[static_cast<std::size_t>(it.answer_index)]});
        items.push_back(it);
    }
    AccuracyReport base = score_mcq(items, answers);

    for (auto& it : items) {
        std::vector<int> perm = {4, 2, 0, 3, 1};
        std::vector<std::string> new_opts(5);
        for (int k = 0; k < 5; ++k) new_opts[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] = it.options[static_cast<std::size_t>(k)];
        it.answer_index = perm[static_cast<std::size_t>(it.answer_index)];
        it.options = new_opts;
    }
    AccuracyReport relabeled = score_mcq(items, answers);
    CHECK(base.overall.accuracy_pct() == relabeled.overall.accuracy_pct());
}

TEST_CASE("answer_distribution histogram and bias diagnostic") {
    std::vector<McqItem> items;
    for (int i = 0; i < 5; ++i) items.push_back(item(std::to_string(i), McqTask::AS, i));
    AnswerDistribution uniform = answer_distribution(items);
    for (std::size_t c : uniform.counts) CHECK(c == 1);
    REQUIRE(uniform.max_min_ratio.has_value());
    CHECK(*uniform.max_min_ratio == 1.0);

    std::vector<McqItem> biased;
    for (int i = 0; i < 5; ++i) biased.push_back(item(std::to_string(i), McqTask::AS, 0));
    AnswerDistribution bias = answer_distribution(biased);
    CHECK(bias.counts[0] == 5);
    CHECK(!bias.max_min_ratio.has_value());  // some index never occurs: maximal bias

    std::mt19937 rng(10);
    std::shuffle(items.begin(), items.end(), rng);
    AnswerDistribution shuffled = answer_distribution(items);
    CHECK(shuffled.counts == uniform.counts);
}

TEST_CASE("unknown task codes fail loudly") {
    CHECK_THROWS_AS(mcq_task_from_string("XX"), ValidationError);
    CHECK(mcq_task_from_string("as") == McqTask::AS);
    CHECK(mcq_task_to_string(McqTask::NSM) == "NSM");
}
