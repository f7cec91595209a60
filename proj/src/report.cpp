#include "favor/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "favor/annotation.hpp"
#include "favor/errors.hpp"
#include "favor/mcq.hpp"
#include "favor/parser.hpp"
#include "favor/text.hpp"

using nlohmann::json;

namespace favor {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string sibling_path(const std::string& path, const std::string& new_ext) {
    std::filesystem::path p(path);
    p.replace_extension(new_ext);
    return p.string();
}

std::unique_ptr<SimilarityProvider> make_provider(const std::string& name,
                                                  const std::string& embeddings_path) {
    if (name == "lexical" || name.empty()) return make_lexical_provider();
    if (name == "embedding") {
        if (embeddings_path.empty())
            throw ValidationError("embedding provider requires a vector file path");
        return std::make_unique<EmbeddingProvider>("word-vectors", embeddings_path);
    }
    throw ValidationError("unknown provider '" + name + "' (expected lexical or embedding)");
}

json manifest_to_json(const RunManifest& m) {
    json j;
    j["tool_version"] = m.tool_version;
    j["created_utc"] = m.created_utc;
    j["provider"] = m.provider;
    j["config"] = m.config_json.empty() ? json::object() : json::parse(m.config_json);
    j["inputs"] = json::object();
    for (const auto& [path, digest] : m.input_digests)
        j["inputs"][std::filesystem::path(path).filename().string()] =
            json{{"path", path}, {"fnv1a64", digest}};
    return j;
}

struct Prediction {
    std::string video_id;
    std::string response;        // free text
    std::string structured_json; // used with the structured bypass
};

std::vector<Prediction> load_predictions(const std::string& path, bool structured) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open predictions file: " + path);
    std::vector<Prediction> preds;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError("predictions line " + std::to_string(line_no) +
                                 " is not valid JSON: " + e.what(),
                             e.byte, line_no);
        }
        Prediction p;
        p.video_id = j.value("video_id", std::string());
        if (p.video_id.empty())
            throw ValidationError("predictions line " + std::to_string(line_no) +
                                  " is missing 'video_id'");
        if (!seen.insert(p.video_id).second)
            throw ValidationError("predictions line " + std::to_string(line_no) +
                                  ": duplicate video_id '" + p.video_id + "'");
        if (structured) {
            if (!j.contains("structured"))
                throw ValidationError("predictions line " + std::to_string(line_no) +
                                      " is missing 'structured' (required with the structured flag)");
            p.structured_json = j.at("structured").dump();
        } else {
            p.response = j.value("response", std::string());
        }
        preds.push_back(std::move(p));
    }
    if (preds.empty()) throw ValidationError("predictions file is empty: " + path);
    return preds;
}

void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(jobs, static_cast<int>(count));
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

json sample_to_json(const SampleScore& s) { return json::parse(sample_score_to_json(s)); }

json means_to_json(const SampleScore& s) { return json::parse(sample_score_to_json(s, false)); }

const char* const kOpenColumns[] = {"Camera Motion",         "Subject Action Match",
                                    "Subject Action Sequence", "Temporal Action Match",
                                    "Temporal Action Sequence", "Overall"};

std::vector<double> open_row(const SampleScore& s) {
    return {s.camera_pct,    s.subject_match,    s.subject_sequence,
            s.temporal_match, s.temporal_sequence, s.overall};
}

}  // namespace

const char* tool_version() { return "0.1.0"; }

std::string file_digest(const std::string& path) { return text::fnv1a64_hex(read_file(path)); }

RunManifest make_manifest(const std::string& provider, const std::string& config_json,
                          const std::vector<std::string>& input_paths) {
    RunManifest m;
    m.tool_version = tool_version();
    m.provider = provider;
    m.config_json = config_json;
    std::time_t now;
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"); sde != nullptr && *sde != '\0') {
        now = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
    } else {
        now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    m.created_utc = buf;
    for (const auto& p : input_paths) m.input_digests.emplace_back(p, file_digest(p));
    return m;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write file: " + tmp.string());
        out << content;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

OpenEvalSummary evaluate_open(const OpenEvalOptions& options) {
    ScoringConfig config;
    std::string config_json;
    if (!options.config_path.empty()) {
        config_json = read_file(options.config_path);
        config = ScoringConfig::from_json(config_json);
    }
    config.validate();
    config_json = config.to_json();

    auto provider = make_provider(options.provider, options.embeddings_path);
    auto records = load_annotations_file(options.annotations_path);
    auto predictions = load_predictions(options.predictions_path, options.structured);

    std::map<std::string, const AnnotationRecord*> by_id;
    for (const auto& r : records) by_id[r.video_id] = &r;

    CaptionParser parser =
        CaptionParser::from_files(options.camera_lexicon_path, options.stop_verbs_path);

    struct Slot {
        bool skipped = false;
        SampleScore score;
    };
    std::vector<Slot> slots(predictions.size());

    parallel_for(options.jobs, predictions.size(), [&](std::size_t i) {
        const Prediction& p = predictions[i];
        auto it = by_id.find(p.video_id);
        if (it == by_id.end()) {
            slots[i].skipped = true;
            return;
        }
        StructuredMotion parsed = options.structured
                                      ? structured_from_json(p.structured_json)
                                      : parser.parse(p.response).first;
        StructuredMotion reference = reference_structure(*it->second);
        slots[i].score = score_sample(parsed, reference, *provider, config);
    });

    std::vector<std::pair<std::string, SampleScore>> scored;
    OpenEvalSummary summary;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (slots[i].skipped) {
            summary.skipped.push_back(predictions[i].video_id);
        } else {
            scored.emplace_back(predictions[i].video_id, slots[i].score);
        }
    }
    if (scored.empty())
        throw ValidationError("no prediction matched a known video_id; nothing to score");
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::sort(summary.skipped.begin(), summary.skipped.end());

    ModelReport model_report = aggregate(scored);
    summary.scored = scored.size();
    summary.means = model_report.means;

    RunManifest manifest = make_manifest(provider->name(), config_json,
                                         {options.annotations_path, options.predictions_path});

    json j;
    j["kind"] = "open-ended";
    j["manifest"] = manifest_to_json(manifest);
    j["sample_count"] = model_report.sample_count;
    j["skipped"] = summary.skipped;
    j["means"] = means_to_json(model_report.means);
    j["samples"] = json::object();
    for (const auto& [id, s] : model_report.samples) j["samples"][id] = sample_to_json(s);

    if (!options.output_path.empty()) {
        atomic_write(options.output_path, j.dump(2) + "\n");
        summary.report_path = options.output_path;

        std::ostringstream md;
        md << "# Open-ended motion caption evaluation\n\n";
        md << "Provider: `" << provider->name() << "` | Samples: " << model_report.sample_count
           << " | Skipped: " << summary.skipped.size() << "\n\n";
        md << "| Run |";
        for (const char* c : kOpenColumns) md << ' ' << c << " |";
        md << "\n|---|";
        for (std::size_t k = 0; k < std::size(kOpenColumns); ++k) md << "---|";
        md << "\n| " << std::filesystem::path(options.predictions_path).stem().string() << " |";
        for (double v : open_row(model_report.means)) md << ' ' << format_pct(v) << " |";
        md << "\n";
        atomic_write(sibling_path(options.output_path, ".md"), md.str());

        std::ostringstream csv;
        csv << "video_id,camera,subject_match,subject_sequence,temporal_match,temporal_sequence,overall\n";
        for (const auto& [id, s] : model_report.samples) {
            csv << id;
            for (double v : open_row(s)) csv << ',' << format_pct(v);
            csv << "\n";
        }
        csv << "MEAN";
        for (double v : open_row(model_report.means)) csv << ',' << format_pct(v);
        csv << "\n";
        atomic_write(sibling_path(options.output_path, ".csv"), csv.str());
    }
    return summary;
}

ClosedEvalSummary evaluate_closed(const ClosedEvalOptions& options) {
    auto items = load_mcq_items(options.questions_path);
    auto answers = load_mcq_answers(options.answers_path);
    AccuracyReport report = score_mcq(items, answers);
    AnswerDistribution dist = answer_distribution(items);

    RunManifest manifest =
        make_manifest("none", "", {options.questions_path, options.answers_path});

    json j;
    j["kind"] = "close-ended";
    j["manifest"] = manifest_to_json(manifest);
    j["overall"] = {{"accuracy", report.overall.accuracy_pct()},
                    {"correct", report.overall.correct},
                    {"total", report.overall.total}};
    j["per_task"] = json::object();
    for (McqTask t : kMcqTasks) {
        auto it = report.per_task.find(t);
        TaskAccuracy acc = it == report.per_task.end() ? TaskAccuracy{} : it->second;
        j["per_task"][mcq_task_to_string(t)] = {
            {"accuracy", acc.accuracy_pct()}, {"correct", acc.correct}, {"total", acc.total}};
    }
    j["unanswerable"] = report.unanswerable;
    j["missing_answers"] = report.missing_answers;
    j["answer_distribution"] = dist.counts;
    if (dist.max_min_ratio)
        j["answer_distribution_max_min_ratio"] = *dist.max_min_ratio;
    else
        j["answer_distribution_max_min_ratio"] = nullptr;

    ClosedEvalSummary summary;
    summary.overall_pct = report.overall.accuracy_pct();
    summary.total = report.overall.total;
    summary.unanswerable = report.unanswerable;

    if (!options.output_path.empty()) {
        atomic_write(options.output_path, j.dump(2) + "\n");
        summary.report_path = options.output_path;

        std::ostringstream md;
        md << "# Close-ended motion QA accuracy\n\n";
        md << "| Run | ALL | AS | HAC | SAD | MAD | CM | NSM |\n";
        md << "|---|---|---|---|---|---|---|---|\n";
        md << "| " << std::filesystem::path(options.answers_path).stem().string() << " | "
           << format_pct(report.overall.accuracy_pct());
        for (McqTask t : kMcqTasks) {
            auto it = report.per_task.find(t);
            md << " | " << format_pct(it == report.per_task.end() ? 0.0 : it->second.accuracy_pct());
        }
        md << " |\n\nUnanswerable responses: " << report.unanswerable
           << " | Missing answers: " << report.missing_answers << "\n";
        atomic_write(sibling_path(options.output_path, ".md"), md.str());
    }
    return summary;
}

JudgeRunSummary judge_run(const JudgeRunOptions& options) {
    auto records = load_annotations_file(options.annotations_path);
    auto predictions = load_predictions(options.predictions_path, false);
    std::map<std::string, const AnnotationRecord*> by_id;
    for (const auto& r : records) by_id[r.video_id] = &r;

    std::unique_ptr<JudgeClient> client;
    if (options.use_mock) {
        std::vector<std::string> script = options.mock_script;
        if (script.empty())
            script.push_back(
                "Correctness Analysis\nMock analysis.\n\nDetailedness Analysis\nMock analysis.\n\n"
                "Ratings\nCorrectness Rating: 7\nDetailedness Rating: 5\n");
        client = std::make_unique<MockJudgeClient>(std::move(script));
    } else {
        client = make_http_judge_client(options.http);
    }

    std::optional<JudgeCache> cache;
    if (!options.cache_dir.empty()) cache.emplace(options.cache_dir);

    struct Slot {
        std::string video_id;
        std::optional<JudgeResult> result;
        std::optional<JudgeFailure> failure;
        bool skipped = false;
    };
    std::vector<Slot> slots(predictions.size());

    parallel_for(options.in_flight, predictions.size(), [&](std::size_t i) {
        const Prediction& p = predictions[i];
        slots[i].video_id = p.video_id;
        auto it = by_id.find(p.video_id);
        if (it == by_id.end() || text::trim(p.response).empty() ||
            text::trim(it->second->caption).empty()) {
            slots[i].skipped = true;
            return;
        }
        auto [result, failure] = judge_sample(*client, it->second->caption, p.response,
                                              options.max_attempts, cache ? &*cache : nullptr);
        slots[i].result = result;
        slots[i].failure = failure;
    });

    std::sort(slots.begin(), slots.end(),
              [](const Slot& a, const Slot& b) { return a.video_id < b.video_id; });

    std::vector<JudgeResult> successes;
    std::size_t failures = 0;
    std::ostringstream lines;
    for (const auto& s : slots) {
        if (s.skipped) continue;
        if (s.result) {
            successes.push_back(*s.result);
            lines << judge_result_to_json(s.video_id, *s.result) << "\n";
        } else if (s.failure) {
            ++failures;
            json j;
            j["video_id"] = s.video_id;
            j["failed"] = true;
            j["attempts"] = s.failure->attempts;
            j["error"] = s.failure->last_error;
            lines << j.dump() << "\n";
        }
    }

    JudgeRunSummary out;
    out.summary = aggregate_judge(successes, failures);
    if (!options.output_path.empty()) {
        atomic_write(options.output_path, lines.str());
        out.results_path = options.output_path;
        json j;
        j["kind"] = "judge";
        j["judged"] = out.summary.judged;
        j["failures"] = out.summary.failures;
        j["gpt_c"] = out.summary.gpt_c ? json(*out.summary.gpt_c) : json(nullptr);
        j["gpt_d"] = out.summary.gpt_d ? json(*out.summary.gpt_d) : json(nullptr);
        j["client"] = client->name();
        j["template_version"] = judge_template_version();
        atomic_write(sibling_path(options.output_path, ".summary.json"), j.dump(2) + "\n");
    }
    return out;
}

std::string combine_reports(const std::vector<std::string>& run_paths) {
    if (run_paths.empty()) throw ValidationError("report: need at least one run report");

    struct Row {
        std::string name;
        std::string provider = "--";
        std::optional<std::vector<double>> open;  // six open-ended columns
        std::optional<double> closed_all;
        std::map<std::string, double> closed_tasks;
        double sort_key = 0.0;
        std::string config_dump;
    };
    std::vector<Row> rows;
    bool mixed_config = false;
    std::string first_config;

    for (const auto& path : run_paths) {
        json j;
        try {
            j = json::parse(read_file(path));
        } catch (const json::parse_error& e) {
            throw ParseError("run report " + path + " is not valid JSON: " + e.what(), e.byte);
        }
        Row row;
        row.name = std::filesystem::path(path).stem().string();
        std::string kind = j.value("kind", std::string());
        if (j.contains("manifest")) {
            row.provider = j["manifest"].value("provider", std::string("--"));
            row.config_dump = j["manifest"].value("config", json::object()).dump();
        }
        if (kind == "open-ended") {
            const json& m = j.at("means");
            row.open = std::vector<double>{m.value("camera", 0.0),
                                           m.value("subject_match", 0.0),
                                           m.value("subject_sequence", 0.0),
                                           m.value("temporal_match", 0.0),
                                           m.value("temporal_sequence", 0.0),
                                           m.value("overall", 0.0)};
            row.sort_key = m.value("overall", 0.0);
            if (first_config.empty())
                first_config = row.config_dump;
            else if (row.config_dump != first_config)
                mixed_config = true;
        } else if (kind == "close-ended") {
            row.closed_all = j.at("overall").value("accuracy", 0.0);
            for (auto it = j.at("per_task").begin(); it != j.at("per_task").end(); ++it)
                row.closed_tasks[it.key()] = it.value().value("accuracy", 0.0);
            row.sort_key = *row.closed_all;
        } else {
            throw ValidationError("run report " + path + " has unknown kind '" + kind + "'");
        }
        rows.push_back(std::move(row));
    }

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.sort_key != b.sort_key) return a.sort_key > b.sort_key;
        return a.name < b.name;
    });

    std::ostringstream md;
    md << "# Combined leaderboard\n\n";
    if (mixed_config)
        md << "> **Warning:** runs were produced with different scoring configs; "
              "open-ended columns are not directly comparable.\n\n";
    md << "| Run | Provider |";
    for (const char* c : kOpenColumns) md << ' ' << c << " |";
    md << " ALL | AS | HAC | SAD | MAD | CM | NSM |\n|---|---|";
    for (std::size_t k = 0; k < std::size(kOpenColumns) + 7; ++k) md << "---|";
    md << "\n";
    for (const auto& row : rows) {
        md << "| " << row.name << " | " << row.provider << " |";
        if (row.open) {
            for (double v : *row.open) md << ' ' << format_pct(v) << " |";
        } else {
            for (std::size_t k = 0; k < std::size(kOpenColumns); ++k) md << " -- |";
        }
        md << ' ' << (row.closed_all ? format_pct(*row.closed_all) : "--") << " |";
        for (const char* t : {"AS", "HAC", "SAD", "MAD", "CM", "NSM"}) {
            auto it = row.closed_tasks.find(t);
            md << ' ' << (it == row.closed_tasks.end() ? "--" : format_pct(it->second)) << " |";
        }
        md << "\n";
    }
    return md.str();
}

}  // namespace favor
