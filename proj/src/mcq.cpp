#include "favor/mcq.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <set>

#include <json.hpp>

#include "favor/errors.hpp"
#include "favor/text.hpp"

using nlohmann::json;

namespace favor {

namespace {

// Case- and punctuation-insensitive canonical form.
std::string canon(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = true;
    for (char ch : s) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (c < 0x80 && (std::ispunct(c) || std::isspace(c))) {
            if (!in_ws) out.push_back(' ');
            in_ws = true;
        } else {
            out.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
            in_ws = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

bool contains_word(const std::string& haystack, const std::string& needle) {
    if (needle.empty()) return false;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        bool left_ok = pos == 0 || haystack[pos - 1] == ' ';
        std::size_t end = pos + needle.size();
        bool right_ok = end == haystack.size() || haystack[end] == ' ';
        if (left_ok && right_ok) return true;
        ++pos;
    }
    return false;
}

std::optional<int> label_to_index(char c) {
    if (c >= 'A' && c <= 'E') return c - 'A';
    if (c >= 'a' && c <= 'e') return c - 'a';
    if (c >= '1' && c <= '5') return c - '1';
    return std::nullopt;
}

// Collects distinct label candidates from the response.
std::set<int> label_candidates(const std::string& response) {
    std::set<int> found;
    static const std::regex leading(R"(^\s*\(?([A-Ea-e1-5])[\)\].:,]\s*)");
    static const std::regex cued(
        R"((?:answer|option|choice|select|choose|pick)(?:\s+is)?\s*[:\-]?\s*\(?([A-Ea-e1-5])\)?(?![\w]))",
        std::regex::icase);
    static const std::regex parenthesized(R"(\(([A-Ea-e1-5])\))");
    static const std::regex lone(R"(^\s*\(?([A-Ea-e1-5])\)?\s*$)");

    std::smatch m;
    if (std::regex_search(response, m, leading))
        if (auto idx = label_to_index(m[1].str()[0])) found.insert(*idx);
    if (std::regex_search(response, m, lone))
        if (auto idx = label_to_index(m[1].str()[0])) found.insert(*idx);
    for (auto it = std::sregex_iterator(response.begin(), response.end(), cued);
         it != std::sregex_iterator(); ++it)
        if (auto idx = label_to_index((*it)[1].str()[0])) found.insert(*idx);
    for (auto it = std::sregex_iterator(response.begin(), response.end(), parenthesized);
         it != std::sregex_iterator(); ++it)
        if (auto idx = label_to_index((*it)[1].str()[0])) found.insert(*idx);
    return found;
}

}  // namespace

McqTask mcq_task_from_string(const std::string& code) {
    std::string c = text::to_lower(text::trim(code));
    if (c == "as") return McqTask::AS;
    if (c == "hac") return McqTask::HAC;
    if (c == "sad") return McqTask::SAD;
    if (c == "mad") return McqTask::MAD;
    if (c == "cm") return McqTask::CM;
    if (c == "nsm") return McqTask::NSM;
    throw ValidationError("unknown task code '" + code + "' (expected AS/HAC/SAD/MAD/CM/NSM)");
}

std::string mcq_task_to_string(McqTask task) {
    switch (task) {
        case McqTask::AS: return "AS";
        case McqTask::HAC: return "HAC";
        case McqTask::SAD: return "SAD";
        case McqTask::MAD: return "MAD";
        case McqTask::CM: return "CM";
        case McqTask::NSM: return "NSM";
    }
    return "?";
}

std::optional<int> extract_choice(const std::string& response,
                                  const std::vector<std::string>& options) {
    std::string resp = canon(response);
    if (resp.empty()) return std::nullopt;

    // Tier 1: the whole response is one option's text.
    {
        std::vector<int> hits;
        for (std::size_t i = 0; i < options.size(); ++i)
            if (canon(options[i]) == resp) hits.push_back(static_cast<int>(i));
        if (hits.size() == 1) return hits[0];
        if (hits.size() > 1) {
            // longest original text wins; a length tie is ambiguous
            std::sort(hits.begin(), hits.end(), [&](int a, int b) {
                return options[static_cast<std::size_t>(a)].size() >
                       options[static_cast<std::size_t>(b)].size();
            });
            if (options[static_cast<std::size_t>(hits[0])].size() !=
                options[static_cast<std::size_t>(hits[1])].size())
                return hits[0];
            return std::nullopt;
        }
    }

    // Tier 2: option labels (letters, digits, "option 3", "answer is (4)").
    {
        std::set<int> labels = label_candidates(response);
        labels.erase(labels.lower_bound(static_cast<int>(options.size())), labels.end());
        if (labels.size() == 1) return *labels.begin();
        if (labels.size() > 1) return std::nullopt;
    }

    // Tier 3: options whose full text is contained in the response. Nested
    // candidates collapse to the longest; unrelated ones are ambiguous.
    {
        std::vector<int> hits;
        for (std::size_t i = 0; i < options.size(); ++i) {
            std::string oc = canon(options[i]);
            if (!oc.empty() && contains_word(resp, oc)) hits.push_back(static_cast<int>(i));
        }
        if (hits.empty()) return std::nullopt;
        std::sort(hits.begin(), hits.end(), [&](int a, int b) {
            return canon(options[static_cast<std::size_t>(a)]).size() >
                   canon(options[static_cast<std::size_t>(b)]).size();
        });
        std::string longest = canon(options[static_cast<std::size_t>(hits[0])]);
        for (std::size_t k = 1; k < hits.size(); ++k) {
            std::string oc = canon(options[static_cast<std::size_t>(hits[k])]);
            if (oc == longest || !contains_word(longest, oc)) return std::nullopt;
        }
        return hits[0];
    }
}

AccuracyReport score_mcq(const std::vector<McqItem>& items,
                         const std::vector<ModelAnswerRecord>& answers) {
    std::map<std::string, const McqItem*> by_id;
    for (const auto& item : items) {
        if (item.options.size() != 5)
            throw ValidationError("question '" + item.question_id + "' must have exactly 5 options");
        std::set<std::string> distinct;
        for (const auto& o : item.options) distinct.insert(text::trim(o));
        if (distinct.size() != 5)
            throw ValidationError("question '" + item.question_id + "' has duplicate options");
        if (item.answer_index < 0 || item.answer_index > 4)
            throw ValidationError("question '" + item.question_id + "' answer_index out of range");
        if (!by_id.emplace(item.question_id, &item).second)
            throw ValidationError("duplicate question_id '" + item.question_id + "'");
    }

    std::map<std::string, const ModelAnswerRecord*> answer_by_id;
    for (const auto& a : answers) {
        if (!by_id.count(a.question_id))
            throw ValidationError("answer references unknown question_id '" + a.question_id + "'");
        if (!answer_by_id.emplace(a.question_id, &a).second)
            throw ValidationError("duplicate answer for question_id '" + a.question_id + "'");
    }

    AccuracyReport report;
    for (const auto& item : items) {
        TaskAccuracy& task = report.per_task[item.task];
        ++task.total;
        ++report.overall.total;
        auto it = answer_by_id.find(item.question_id);
        if (it == answer_by_id.end()) {
            ++report.missing_answers;
            continue;
        }
        std::optional<int> choice = extract_choice(it->second->response, item.options);
        if (!choice) {
            ++report.unanswerable;
            continue;
        }
        if (*choice == item.answer_index) {
            ++task.correct;
            ++report.overall.correct;
        }
    }
    return report;
}

AnswerDistribution answer_distribution(const std::vector<McqItem>& items) {
    AnswerDistribution dist;
    for (const auto& item : items)
        if (item.answer_index >= 0 && item.answer_index < 5)
            ++dist.counts[static_cast<std::size_t>(item.answer_index)];
    auto [mn, mx] = std::minmax_element(dist.counts.begin(), dist.counts.end());
    if (*mn > 0) dist.max_min_ratio = static_cast<double>(*mx) / static_cast<double>(*mn);
    return dist;
}

std::vector<McqItem> load_mcq_items(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open questions file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("questions file is not valid JSON: ") + e.what(), e.byte);
    }
    if (!root.is_array()) throw ValidationError("questions file must be a top-level JSON array");
    std::vector<McqItem> items;
    for (const json& j : root) {
        McqItem item;
        item.question_id = j.value("question_id", std::string());
        if (item.question_id.empty())
            throw ValidationError("question is missing a non-empty 'question_id'");
        item.video_id = j.value("video_id", std::string());
        item.task = mcq_task_from_string(j.value("task", std::string()));
        item.question = j.value("question", std::string());
        if (j.contains("options"))
            for (const json& o : j.at("options")) item.options.push_back(o.get<std::string>());
        item.answer_index = j.value("answer_index", -1);
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<ModelAnswerRecord> load_mcq_answers(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open answers file: " + path);
    std::vector<ModelAnswerRecord> answers;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("answers line " + std::to_string(line_no) + " is not valid JSON: " +
                                 e.what(),
                             e.byte, line_no);
        }
        ModelAnswerRecord rec;
        rec.question_id = j.value("question_id", std::string());
        if (rec.question_id.empty())
            throw ValidationError("answers line " + std::to_string(line_no) +
                                  " is missing 'question_id'");
        rec.response = j.value("response", std::string());
        answers.push_back(std::move(rec));
    }
    return answers;
}

}  // namespace favor
