// favor-eval: batch entry points for the three evaluation workflows.
// Links the shared library through the C API only.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "favor/favor.h"

namespace {

// sysexits-style codes so input, validation, and scoring failures are
// distinguishable in scripts.
enum ExitCode {
    kOk = 0,
    kUsage = 64,
    kData = 65,
    kNoInput = 66,
    kUnavailable = 69,
    kSoftware = 70,
};

int status_to_exit(favor_status st) {
    switch (st) {
        case FAVOR_OK: return kOk;
        case FAVOR_ERR_USAGE: return kUsage;
        case FAVOR_ERR_IO: return kNoInput;
        case FAVOR_ERR_PARSE:
        case FAVOR_ERR_VALIDATION: return kData;
        case FAVOR_ERR_JUDGE: return kUnavailable;
        case FAVOR_ERR_SCORING:
        case FAVOR_ERR_INTERNAL: return kSoftware;
    }
    return kSoftware;
}

int finish(favor_status st, char* summary, char* err) {
    if (st != FAVOR_OK) {
        std::fprintf(stderr, "favor-eval: error: %s\n", err ? err : "unknown");
        favor_string_free(err);
        favor_string_free(summary);
        return status_to_exit(st);
    }
    if (summary) {
        std::printf("%s\n", summary);
        favor_string_free(summary);
    }
    return kOk;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fine-grained video motion caption evaluation toolkit"};
    app.set_version_flag("--version", std::string(favor_version()));
    app.require_subcommand(1);

    // evaluate-open
    std::string annotations, predictions, config, provider = "lexical", embeddings;
    std::string camera_lexicon, stop_verbs, output;
    bool structured = false, offline = false;
    int jobs = 1;
    auto* open_cmd =
        app.add_subcommand("evaluate-open", "Score free-text motion captions against annotations");
    open_cmd->add_option("--annotations", annotations, "Annotation JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    open_cmd->add_option("--predictions", predictions, "JSON-lines of {video_id, response}")
        ->required()
        ->check(CLI::ExistingFile);
    open_cmd->add_option("--config", config, "Scoring config JSON")->check(CLI::ExistingFile);
    open_cmd->add_option("--provider", provider, "Similarity provider")
        ->check(CLI::IsMember({"lexical", "embedding"}));
    open_cmd->add_option("--embeddings", embeddings, "Word-vector file for the embedding provider");
    open_cmd->add_option("--camera-lexicon", camera_lexicon, "Camera lexicon override file");
    open_cmd->add_option("--stop-verbs", stop_verbs, "Stop-verb list override file");
    open_cmd->add_option("--output", output, "Report JSON path (.md/.csv written alongside)")
        ->required();
    open_cmd->add_flag("--structured", structured,
                       "Predictions carry pre-structured motion JSON instead of free text");
    open_cmd->add_flag("--offline", offline, "Force the lexical provider");
    open_cmd->add_option("--jobs", jobs, "Parallel workers")->check(CLI::PositiveNumber);

    // evaluate-closed
    std::string questions, answers, closed_output;
    auto* closed_cmd =
        app.add_subcommand("evaluate-closed", "Score multiple-choice answers across the six tasks");
    closed_cmd->add_option("--questions", questions, "Questions JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    closed_cmd->add_option("--answers", answers, "JSON-lines of {question_id, response}")
        ->required()
        ->check(CLI::ExistingFile);
    closed_cmd->add_option("--output", closed_output, "Report JSON path")->required();

    // judge
    std::string j_annotations, j_predictions, j_output, endpoint, model, api_key_env, cache_dir,
        mock_reply;
    int max_attempts = 3, in_flight = 1;
    bool use_mock = false;
    auto* judge_cmd = app.add_subcommand("judge", "Rubric-based external-judge evaluation");
    judge_cmd->add_option("--annotations", j_annotations, "Annotation JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    judge_cmd->add_option("--predictions", j_predictions, "JSON-lines of {video_id, response}")
        ->required()
        ->check(CLI::ExistingFile);
    judge_cmd->add_option("--output", j_output, "Results JSON-lines path")->required();
    judge_cmd->add_option("--endpoint", endpoint, "Judge endpoint, e.g. http://host:port");
    judge_cmd->add_option("--model", model, "Judge model name");
    judge_cmd->add_option("--api-key-env", api_key_env,
                          "Environment variable holding the credential (default "
                          "FAVOR_JUDGE_API_KEY; the value is never logged)");
    judge_cmd->add_option("--cache-dir", cache_dir, "On-disk reply cache directory");
    judge_cmd->add_option("--max-attempts", max_attempts, "Retry budget per sample")
        ->check(CLI::PositiveNumber);
    judge_cmd->add_option("--in-flight", in_flight, "Concurrent judge calls")
        ->check(CLI::PositiveNumber);
    judge_cmd->add_flag("--mock", use_mock, "Use the deterministic mock client (no network)");
    judge_cmd->add_option("--mock-reply", mock_reply, "Scripted reply for the mock client");

    // report
    std::vector<std::string> run_paths;
    std::string report_output;
    auto* report_cmd = app.add_subcommand("report", "Combine run reports into one leaderboard");
    report_cmd->add_option("runs", run_paths, "Run report JSON files")
        ->required()
        ->check(CLI::ExistingFile);
    report_cmd->add_option("--output", report_output, "Leaderboard markdown path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    char* summary = nullptr;
    char* err = nullptr;

    if (open_cmd->parsed()) {
        if (offline) provider = "lexical";
        favor_open_eval_options o{};
        o.annotations_path = annotations.c_str();
        o.predictions_path = predictions.c_str();
        o.config_path = opt(config);
        o.provider = provider.c_str();
        o.embeddings_path = opt(embeddings);
        o.camera_lexicon_path = opt(camera_lexicon);
        o.stop_verbs_path = opt(stop_verbs);
        o.output_path = output.c_str();
        o.structured = structured ? 1 : 0;
        o.jobs = jobs;
        favor_status st = favor_evaluate_open(&o, &summary, &err);
        return finish(st, summary, err);
    }
    if (closed_cmd->parsed()) {
        favor_closed_eval_options o{};
        o.questions_path = questions.c_str();
        o.answers_path = answers.c_str();
        o.output_path = closed_output.c_str();
        favor_status st = favor_evaluate_closed(&o, &summary, &err);
        return finish(st, summary, err);
    }
    if (judge_cmd->parsed()) {
        favor_judge_options o{};
        o.annotations_path = j_annotations.c_str();
        o.predictions_path = j_predictions.c_str();
        o.output_path = j_output.c_str();
        o.endpoint = opt(endpoint);
        o.model = opt(model);
        o.api_key_env = opt(api_key_env);
        o.cache_dir = opt(cache_dir);
        o.max_attempts = max_attempts;
        o.in_flight = in_flight;
        o.use_mock = use_mock ? 1 : 0;
        o.mock_reply = opt(mock_reply);
        favor_status st = favor_judge_run(&o, &summary, &err);
        return finish(st, summary, err);
    }
    if (report_cmd->parsed()) {
        std::vector<const char*> paths;
        for (const auto& p : run_paths) paths.push_back(p.c_str());
        favor_status st = favor_report_combine(paths.data(), paths.size(), report_output.c_str(), &err);
        return finish(st, nullptr, err);
    }
    return kUsage;
}
