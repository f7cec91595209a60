#pragma once

#include <optional>
#include <string>
#include <vector>

#include "favor/judge.hpp"
#include "favor/scorer.hpp"

namespace favor {

// Provenance block embedded in every report: tool version, config snapshot,
// input digests, creation time (SOURCE_DATE_EPOCH is honored so reports can
// be reproduced byte for byte), provider name.
struct RunManifest {
    std::string tool_version;
    std::string created_utc;
    std::string provider;
    std::string config_json;
    std::vector<std::pair<std::string, std::string>> input_digests;  // (path, fnv1a64)
};

RunManifest make_manifest(const std::string& provider, const std::string& config_json,
                          const std::vector<std::string>& input_paths);

// Writes content to path via a temp file and atomic rename; no partial
// reports survive error paths.
void atomic_write(const std::string& path, const std::string& content);

std::string file_digest(const std::string& path);

struct OpenEvalOptions {
    std::string annotations_path;
    std::string predictions_path;
    std::string config_path;   // empty -> defaults
    std::string provider = "lexical";  // "lexical" or "embedding"
    std::string embeddings_path;       // required for the embedding provider
    std::string camera_lexicon_path;   // optional parser overrides
    std::string stop_verbs_path;
    std::string output_path;   // JSON report; .md and .csv written alongside
    bool structured = false;   // predictions carry StructuredMotion JSON
    int jobs = 1;
};

struct OpenEvalSummary {
    std::size_t scored = 0;
    std::vector<std::string> skipped;  // unknown video_ids
    SampleScore means;
    std::string report_path;
};

// The LLM-free evaluation workflow: load annotations, parse or accept
// structured predictions, score each sample, aggregate, and write the JSON,
// markdown, and CSV reports. Output rows are ordered by video_id regardless
// of worker count. Throws on empty or fully-skipped prediction sets.
OpenEvalSummary evaluate_open(const OpenEvalOptions& options);

struct ClosedEvalOptions {
    std::string questions_path;
    std::string answers_path;
    std::string output_path;
};

struct ClosedEvalSummary {
    double overall_pct = 0.0;
    std::size_t total = 0;
    std::size_t unanswerable = 0;
    std::string report_path;
};

// Multiple-choice workflow: score answers against questions and write the
// Table-style report (columns ALL, AS, HAC, SAD, MAD, CM, NSM) plus the
// answer-index distribution diagnostic.
ClosedEvalSummary evaluate_closed(const ClosedEvalOptions& options);

struct JudgeRunOptions {
    std::string annotations_path;
    std::string predictions_path;
    std::string output_path;  // JSON-lines results; summary written alongside
    HttpJudgeConfig http;
    std::string cache_dir;
    int max_attempts = 3;
    int in_flight = 1;
    bool use_mock = false;
    std::vector<std::string> mock_script;  // used when use_mock is set
};

struct JudgeRunSummary {
    JudgeSummary summary;
    std::string results_path;
};

JudgeRunSummary judge_run(const JudgeRunOptions& options);

// Combines previously written run reports into one leaderboard markdown:
// one row per run, sorted by overall descending then run name; a warning
// banner flags mixed config snapshots.
std::string combine_reports(const std::vector<std::string>& run_paths);

const char* tool_version();

}  // namespace favor
