#include "favor/judge.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "favor/errors.hpp"
#include "favor/text.hpp"

using nlohmann::json;

namespace favor {

namespace {

const std::string kTemplateVersion = "motion-judge-v1";

const char* const kTemplate =
    R"(Please act as a professional video motion analysis expert to evaluate models' fine-grained motion understanding capabilities in videos. You will compare the model-generated description (Response) with human-annotated standard description (Caption), and rate the model's performance on two dimensions, "Correctness" and "Detailedness", each on a scale from 1 to 10.
Remember that the model received this instruction: "Please analyze and describe the temporal dynamics in this video, focusing on camera movements, motions, activities, and interactions, rather than static content."

Evaluation Dimension 1: Correctness (1-10 points)
Evaluate whether the model's description of motions, activities, interactions, and camera movements that actually appear in the video is accurate.

Correctness Rating Criteria:

9-10 points (Extremely High Correctness)
- Completely correct description of all core motions, activities, and interactions in the video;
- Correctly identified camera movements and changes;
- Completely accurate description of motion temporal relationships and directions;
- No errors or only negligible minor inaccuracies.

7-8 points (High Correctness)
- Correctly described most core motions, activities, and interactions in the video;
- Basically correctly identified the main camera movements;
- Generally accurate description of motion temporal relationships and directions;
- 1-2 minor errors that don't affect the overall understanding of video dynamic content.

5-6 points (Medium Correctness)
- Correctly described some core motions, activities, and interactions;
- Partially identified camera movements;
- Some confusion in motion temporal sequence or direction description;
- Several obvious errors, but core motion descriptions remain partially correct.

3-4 points (Low Correctness)
- Correctly described only a few motions or activities;
- Incorrect or missing description of camera movements;
- Numerous errors in motion temporal sequence or direction description;
- Multiple obvious errors, significant misunderstanding of video content.

1-2 points (Extremely Low Correctness)
- Almost no correct description of any actual motions or activities;
- Severe misunderstanding of video content, numerous errors or fabricated content;
- Completely confused motion temporal sequence;
- Description almost completely inconsistent with actual video content.

Evaluation Dimension 2: Detailedness (1-10 points)
Evaluate whether the model comprehensively and thoroughly describes the dynamic content in the video, including temporal dynamics, camera movements, motions, activities, and interaction details.

Detailedness Rating Criteria:

9-10 points (Extremely High Detailedness)
- Comprehensively captured details of all key motions and activities in the video;
- Detailed description of how motions are executed (e.g., speed, force, amplitude);
- Complete capture of temporal dynamics and motion transitions;
- Precise description of various camera movements and changes (e.g., panning, pushing/pulling, rotation);
- In-depth analysis of interaction relationships and dynamic changes in the scene.

7-8 points (High Detailedness)
- Captured details of most key motions and activities in the video;
- Described the execution manner of most motions;
- Good capture of temporal dynamics and main motion transitions;
- Described the main camera movements;
- Analyzed the main interaction relationships.

5-6 points (Medium Detailedness)
- Captured details of some key motions and activities;
- Partially described how motions are executed;
- Basic capture of temporal dynamics;
- Mentioned some camera movements;
- Included some interaction relationship descriptions.

3-4 points (Low Detailedness)
- Provided only basic descriptions of motions and activities, lacking details;
- Rarely described how motions are executed;
- Brief description of temporal dynamics;
- Almost no mention of camera movements;
- Insufficient description of interaction relationships.

1-2 points (Extremely Low Detailedness)
- Extremely brief, mentioning only the most basic motions;
- No description of how motions are executed;
- Missing temporal dynamics;
- Completely ignored camera movements;
- No description of interaction relationships.

Scoring Guiding Principles:

1. Ignore Static Content Assessment: Scoring should focus on dynamic content; points should not be heavily deducted for missing static scene descriptions.
2. Tolerate Expression Differences: Different expressions (e.g., "moves to the left" vs. "walks toward the window") should be considered equivalent if they refer to the same motion.
3. Correctness First: If a description is seriously incorrect, it should not receive high scores even if detailed.
4. Distinguish Between Omissions and Errors: Not mentioning certain content (omission) should not be treated the same as incorrect descriptions; errors should more severely impact correctness scores.
5. Distinguish Primary from Secondary: Correct descriptions of core motions/primary activities are more important than minor details.

Output Format:

Correctness Analysis
[Detailed analysis of how well the model's description matches the actual video content, pointing out correct aspects and errors]

Detailedness Analysis
[Detailed analysis of the comprehensiveness and richness of details in the model's description, pointing out detailed aspects and shortcomings]

Ratings
Correctness Rating: [Integer from 1-10]
Detailedness Rating: [Integer from 1-10]

Human-Annotated Standard Description (Caption)
{caption}

Model Response
{response}
)";

std::optional<int> last_rating(const std::string& reply, const std::string& label) {
    // Tolerates markdown emphasis and brackets around the number.
    std::regex re(label + R"( Rating:\**\s*\[?\s*(-?\d+)\s*\]?)");
    std::optional<int> value;
    bool out_of_range = false;
    for (auto it = std::sregex_iterator(reply.begin(), reply.end(), re);
         it != std::sregex_iterator(); ++it) {
        int v = std::stoi((*it)[1].str());
        if (v < 1 || v > 10) {
            out_of_range = true;
            value.reset();
        } else {
            out_of_range = false;
            value = v;
        }
    }
    if (out_of_range)
        throw JudgeError(label + " rating out of range 1..10 in judge reply");
    return value;
}

std::string section(const std::string& reply, const std::string& header,
                    const std::vector<std::string>& terminators) {
    std::size_t pos = reply.rfind(header);
    if (pos == std::string::npos) return {};
    std::size_t begin = pos + header.size();
    std::size_t end = reply.size();
    for (const auto& t : terminators) {
        std::size_t p = reply.find(t, begin);
        if (p != std::string::npos && p < end) end = p;
    }
    return text::trim(reply.substr(begin, end - begin));
}

}  // namespace

const std::string& judge_template_version() { return kTemplateVersion; }

JudgePrompt build_judge_prompt(const std::string& caption, const std::string& response) {
    if (text::trim(caption).empty()) throw ValidationError("judge prompt: caption is empty");
    if (text::trim(response).empty()) throw ValidationError("judge prompt: response is empty");

    std::string_view tpl(kTemplate);
    std::string rendered;
    rendered.reserve(tpl.size() + caption.size() + response.size());
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl.compare(i, 9, "{caption}") == 0) {
            rendered += caption;
            i += 9;
        } else if (tpl.compare(i, 10, "{response}") == 0) {
            rendered += response;
            i += 10;
        } else {
            rendered += tpl[i];
            ++i;
        }
    }
    return {kTemplateVersion, std::move(rendered)};
}

JudgeResult parse_judge_reply(const std::string& reply) {
    std::optional<int> c = last_rating(reply, "Correctness");
    std::optional<int> d = last_rating(reply, "Detailedness");
    if (!c) throw JudgeError("missing 'Correctness Rating:' line in judge reply");
    if (!d) throw JudgeError("missing 'Detailedness Rating:' line in judge reply");

    JudgeResult r;
    r.correctness = *c;
    r.detailedness = *d;
    r.correctness_analysis =
        section(reply, "Correctness Analysis", {"Detailedness Analysis", "Ratings", "Correctness Rating"});
    r.detailedness_analysis =
        section(reply, "Detailedness Analysis", {"Ratings", "Correctness Rating", "Detailedness Rating"});
    r.raw_reply = reply;
    return r;
}

MockJudgeClient::MockJudgeClient(std::vector<std::string> script) : script_(std::move(script)) {}

std::string MockJudgeClient::complete(const std::string&) {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_;
    if (script_.empty()) throw JudgeError("mock client has no scripted reply");
    const std::string& reply =
        next_ < script_.size() ? script_[next_] : script_.back();
    if (next_ < script_.size()) ++next_;
    if (!reply.empty() && reply[0] == '!') throw JudgeError("mock transport error: " + reply.substr(1));
    return reply;
}

JudgeCache::JudgeCache(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string JudgeCache::key(const std::string& caption, const std::string& response) const {
    std::string raw = kTemplateVersion;
    raw += '\x1f';
    raw += text::fnv1a64_hex(caption);
    raw += '\x1f';
    raw += text::fnv1a64_hex(response);
    return text::fnv1a64_hex(raw);
}

std::optional<JudgeResult> JudgeCache::get(const std::string& caption,
                                           const std::string& response) const {
    std::string k = key(caption, response);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = mem_.find(k);
        if (it != mem_.end()) {
            JudgeResult r = it->second;
            r.from_cache = true;
            return r;
        }
    }
    if (dir_.empty()) return std::nullopt;
    std::ifstream in(std::filesystem::path(dir_) / (k + ".json"));
    if (!in) return std::nullopt;
    try {
        json j = json::parse(in);
        JudgeResult r;
        r.correctness = j.at("correctness").get<int>();
        r.detailedness = j.at("detailedness").get<int>();
        r.correctness_analysis = j.value("correctness_analysis", std::string());
        r.detailedness_analysis = j.value("detailedness_analysis", std::string());
        r.raw_reply = j.value("raw_reply", std::string());
        r.attempts = j.value("attempts", 1);
        r.from_cache = true;
        std::lock_guard<std::mutex> lock(mu_);
        mem_[k] = r;
        return r;
    } catch (const json::exception&) {
        return std::nullopt;  // corrupt cache entry; treated as a miss
    }
}

void JudgeCache::put(const std::string& caption, const std::string& response,
                     const JudgeResult& result) {
    std::string k = key(caption, response);
    {
        std::lock_guard<std::mutex> lock(mu_);
        mem_[k] = result;
    }
    if (dir_.empty()) return;
    json j;
    j["correctness"] = result.correctness;
    j["detailedness"] = result.detailedness;
    j["correctness_analysis"] = result.correctness_analysis;
    j["detailedness_analysis"] = result.detailedness_analysis;
    j["raw_reply"] = result.raw_reply;
    j["attempts"] = result.attempts;
    j["template_version"] = kTemplateVersion;
    std::ofstream out(std::filesystem::path(dir_) / (k + ".json"));
    out << j.dump(2);
}

std::pair<std::optional<JudgeResult>, std::optional<JudgeFailure>> judge_sample(
    JudgeClient& client, const std::string& caption, const std::string& response, int budget,
    JudgeCache* cache) {
    if (cache) {
        if (auto hit = cache->get(caption, response)) return {hit, std::nullopt};
    }
    JudgePrompt prompt = build_judge_prompt(caption, response);
    std::string last_error = "no attempts made";
    for (int attempt = 1; attempt <= budget; ++attempt) {
        try {
            std::string reply = client.complete(prompt.rendered);
            JudgeResult result = parse_judge_reply(reply);
            result.attempts = attempt;
            if (cache) cache->put(caption, response, result);
            return {result, std::nullopt};
        } catch (const Error& e) {
            last_error = e.what();
        }
    }
    return {std::nullopt, JudgeFailure{last_error, budget}};
}

JudgeSummary aggregate_judge(const std::vector<JudgeResult>& results, std::size_t failures) {
    JudgeSummary s;
    s.judged = results.size();
    s.failures = failures;
    if (!results.empty()) {
        double c = 0.0, d = 0.0;
        for (const auto& r : results) {
            c += r.correctness;
            d += r.detailedness;
        }
        s.gpt_c = c / static_cast<double>(results.size());
        s.gpt_d = d / static_cast<double>(results.size());
    }
    return s;
}

namespace {

class HttpJudgeClient final : public JudgeClient {
public:
    HttpJudgeClient(HttpJudgeConfig config, std::string api_key)
        : config_(std::move(config)), api_key_(std::move(api_key)) {}

    std::string complete(const std::string& prompt) override;
    std::string name() const override { return "http:" + config_.model; }

private:
    HttpJudgeConfig config_;
    std::string api_key_;
};

std::string HttpJudgeClient::complete(const std::string& prompt) {
    httplib::Client cli(config_.endpoint);
    cli.set_connection_timeout(config_.timeout_seconds, 0);
    cli.set_read_timeout(config_.timeout_seconds, 0);
    json body;
    body["model"] = config_.model;
    body["temperature"] = config_.temperature;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
    auto res = cli.Post(config_.path, headers, body.dump(), "application/json");
    if (!res) throw JudgeError("judge transport error: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw JudgeError("judge HTTP error: status " + std::to_string(res->status));
    try {
        json j = json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw JudgeError(std::string("judge reply envelope malformed: ") + e.what());
    }
}

}  // namespace

std::unique_ptr<JudgeClient> make_http_judge_client(const HttpJudgeConfig& config) {
    const char* key = std::getenv(config.api_key_env.c_str());
    if (key == nullptr || *key == '\0')
        throw JudgeError("judge credential missing: set the environment variable " +
                         config.api_key_env);
    if (config.endpoint.empty()) throw JudgeError("judge endpoint is not configured");
    return std::make_unique<HttpJudgeClient>(config, key);
}

std::string judge_result_to_json(const std::string& video_id, const JudgeResult& r) {
    json j;
    j["video_id"] = video_id;
    j["correctness"] = r.correctness;
    j["detailedness"] = r.detailedness;
    j["correctness_analysis"] = r.correctness_analysis;
    j["detailedness_analysis"] = r.detailedness_analysis;
    j["attempts"] = r.attempts;
    j["from_cache"] = r.from_cache;
    j["template_version"] = kTemplateVersion;
    return j.dump();
}

}  // namespace favor
