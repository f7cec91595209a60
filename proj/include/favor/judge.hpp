#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace favor {

struct JudgePrompt {
    std::string template_version;
    std::string rendered;
};

struct JudgeResult {
    int correctness = 0;   // 1..10
    int detailedness = 0;  // 1..10
    std::string correctness_analysis;
    std::string detailedness_analysis;
    std::string raw_reply;
    int attempts = 0;
    bool from_cache = false;
};

// A judged sample that ran out of retry budget; excluded from means.
struct JudgeFailure {
    std::string last_error;
    int attempts = 0;
};

// Abstraction over the external judge service: a call returns reply text or
// throws JudgeError. The harness never turns transport errors into ratings.
class JudgeClient {
public:
    virtual ~JudgeClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
    virtual std::string name() const = 0;
};

// Scripted client for tests and --mock runs: pops canned replies in order;
// an empty script repeats the last reply. A reply beginning with "!" raises
// a transport error instead.
class MockJudgeClient final : public JudgeClient {
public:
    explicit MockJudgeClient(std::vector<std::string> script);
    std::string complete(const std::string& prompt) override;
    std::string name() const override { return "mock"; }
    int calls() const { return calls_; }

private:
    std::vector<std::string> script_;
    std::size_t next_ = 0;
    int calls_ = 0;
    std::mutex mu_;
};

struct HttpJudgeConfig {
    std::string endpoint;     // e.g. https://api.example.com
    std::string path = "/v1/chat/completions";
    std::string model;
    std::string api_key_env = "FAVOR_JUDGE_API_KEY";
    double temperature = 0.0;
    int timeout_seconds = 60;
};

// OpenAI-style chat-completions client. Reads the credential from the
// configured environment variable at construction and never logs it.
std::unique_ptr<JudgeClient> make_http_judge_client(const HttpJudgeConfig& config);

// Renders the stored rubric template with {caption} and {response}
// substituted exactly once each (single pass; substituted text is never
// re-scanned). Throws ValidationError on empty inputs.
JudgePrompt build_judge_prompt(const std::string& caption, const std::string& response);

const std::string& judge_template_version();

// Extracts the two rating lines (last occurrence wins), rejecting integers
// outside 1..10, and captures the analysis sections when present. Throws
// JudgeError when either rating line is missing or out of range.
JudgeResult parse_judge_reply(const std::string& reply);

// Thread-safe result cache keyed by (template version, caption, response).
// An optional directory persists entries across runs.
class JudgeCache {
public:
    JudgeCache() = default;
    explicit JudgeCache(std::string dir);
    std::optional<JudgeResult> get(const std::string& caption, const std::string& response) const;
    void put(const std::string& caption, const std::string& response, const JudgeResult& result);

private:
    std::string key(const std::string& caption, const std::string& response) const;
    std::string dir_;
    mutable std::mutex mu_;
    mutable std::map<std::string, JudgeResult> mem_;
};

// Runs one sample with a retry budget. Retries on transport and parse
// errors; consults the cache first; returns the failure record when the
// budget is exhausted.
std::pair<std::optional<JudgeResult>, std::optional<JudgeFailure>> judge_sample(
    JudgeClient& client, const std::string& caption, const std::string& response, int budget,
    JudgeCache* cache = nullptr);

struct JudgeSummary {
    std::optional<double> gpt_c;  // mean correctness; absent when nothing succeeded
    std::optional<double> gpt_d;  // mean detailedness
    std::size_t judged = 0;
    std::size_t failures = 0;
};

JudgeSummary aggregate_judge(const std::vector<JudgeResult>& results, std::size_t failures);

std::string judge_result_to_json(const std::string& video_id, const JudgeResult& r);

}  // namespace favor
