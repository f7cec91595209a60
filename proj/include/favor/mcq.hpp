#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace favor {

// The six close-ended task types.
enum class McqTask { AS, HAC, SAD, MAD, CM, NSM };

McqTask mcq_task_from_string(const std::string& code);  // throws ValidationError on unknown codes
std::string mcq_task_to_string(McqTask task);
constexpr std::array<McqTask, 6> kMcqTasks = {McqTask::AS,  McqTask::HAC, McqTask::SAD,
                                              McqTask::MAD, McqTask::CM,  McqTask::NSM};

struct McqItem {
    std::string question_id;
    std::string video_id;
    McqTask task = McqTask::AS;
    std::string question;
    std::vector<std::string> options;  // exactly 5, pairwise distinct after trimming
    int answer_index = 0;              // 0..4
};

struct ModelAnswerRecord {
    std::string question_id;
    std::string response;
};

struct TaskAccuracy {
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy_pct() const {
        return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
    }
};

struct AccuracyReport {
    TaskAccuracy overall;
    std::map<McqTask, TaskAccuracy> per_task;
    std::size_t unanswerable = 0;     // responses with no extractable choice
    std::size_t missing_answers = 0;  // items with no answer record at all
};

struct AnswerDistribution {
    std::array<std::size_t, 5> counts = {0, 0, 0, 0, 0};
    // max/min count ratio; absent when some index never occurs (maximal bias).
    std::optional<double> max_min_ratio;
};

// Resolves a free-text response to an option index:
//   1. exact option-text match, case/punctuation-insensitive (longest wins),
//   2. label patterns: leading "C)", "(3)", "answer is (4)", "option 2" ...,
//   3. unique option whose full text is contained in the response.
// Ambiguity at any tier yields nullopt.
std::optional<int> extract_choice(const std::string& response,
                                  const std::vector<std::string>& options);

// Validates items and answers (throws ValidationError on unknown ids,
// duplicate answers, malformed options) and scores per task. Items with no
// answer or no extractable choice count as wrong.
AccuracyReport score_mcq(const std::vector<McqItem>& items,
                         const std::vector<ModelAnswerRecord>& answers);

AnswerDistribution answer_distribution(const std::vector<McqItem>& items);

// File formats: questions are a JSON array of items; answers are JSON lines.
std::vector<McqItem> load_mcq_items(const std::string& path);
std::vector<ModelAnswerRecord> load_mcq_answers(const std::string& path);

}  // namespace favor
