// Exercises the shared-library C API surface end to end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "favor/favor.h"

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / "favor_capi_test") {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

const char* kAnnotations = R"([
  {"video_id": "v1", "caption": "The man waves then sits down.",
   "camera_motions": [{"description": "pans left", "start": 0.0, "end": 2.0}],
   "subjects": [{"name": "man", "attributes": ["in black"],
                 "motions": [{"description": "waves", "start": 0.0, "end": 1.0},
                             {"description": "sits down", "start": 2.0, "end": 3.0}]}]}
])";

}  // namespace

TEST_CASE("version string is present") {
    CHECK(std::strlen(favor_version()) > 0);
}

TEST_CASE("annotation handle lifecycle and errors") {
    TempDir dir;
    std::string path = dir.file("ann.json");
    write_file(path, kAnnotations);

    favor_annotation_set* set = nullptr;
    char* err = nullptr;
    REQUIRE(favor_annotation_set_load(path.c_str(), &set, &err) == FAVOR_OK);
    REQUIRE(set != nullptr);
    CHECK(favor_annotation_set_size(set) == 1);

    char* json_out = nullptr;
    REQUIRE(favor_annotation_set_reference_json(set, "v1", &json_out, &err) == FAVOR_OK);
    CHECK(std::string(json_out).find("sits down") != std::string::npos);
    favor_string_free(json_out);

    CHECK(favor_annotation_set_reference_json(set, "nope", &json_out, &err) ==
          FAVOR_ERR_VALIDATION);
    REQUIRE(err != nullptr);
    CHECK(std::string(err).find("nope") != std::string::npos);
    favor_string_free(err);
    err = nullptr;

    favor_annotation_set_free(set);

    CHECK(favor_annotation_set_load(dir.file("missing.json").c_str(), &set, &err) == FAVOR_ERR_IO);
    favor_string_free(err);
    err = nullptr;

    std::string bad = dir.file("bad.json");
    write_file(bad, "[{");
    CHECK(favor_annotation_set_load(bad.c_str(), &set, &err) == FAVOR_ERR_PARSE);
    favor_string_free(err);
}

TEST_CASE("parser and scorer handles: parse, score, identity") {
    TempDir dir;
    std::string path = dir.file("ann.json");
    write_file(path, kAnnotations);

    favor_annotation_set* set = nullptr;
    char* err = nullptr;
    REQUIRE(favor_annotation_set_load(path.c_str(), &set, &err) == FAVOR_OK);
    char* reference = nullptr;
    REQUIRE(favor_annotation_set_reference_json(set, "v1", &reference, &err) == FAVOR_OK);

    favor_caption_parser* parser = nullptr;
    REQUIRE(favor_caption_parser_create(nullptr, nullptr, &parser, &err) == FAVOR_OK);
    char* parsed = nullptr;
    REQUIRE(favor_caption_parser_parse(
                parser, "The camera pans left. The man in black waves, then he sits down.",
                &parsed, &err) == FAVOR_OK);
    CHECK(std::string(parsed).find("waves") != std::string::npos);

    favor_scorer* scorer = nullptr;
    REQUIRE(favor_scorer_create(nullptr, "lexical", nullptr, &scorer, &err) == FAVOR_OK);

    char* score_json = nullptr;
    REQUIRE(favor_scorer_score(scorer, reference, reference, &score_json, &err) == FAVOR_OK);
    CHECK(std::string(score_json).find("\"overall\":100.0") != std::string::npos);
    favor_string_free(score_json);

    REQUIRE(favor_scorer_score(scorer, parsed, reference, &score_json, &err) == FAVOR_OK);
    CHECK(std::string(score_json).find("overall") != std::string::npos);
    favor_string_free(score_json);

    CHECK(favor_scorer_score(scorer, "{not json", reference, &score_json, &err) ==
          FAVOR_ERR_PARSE);
    favor_string_free(err);
    err = nullptr;

    favor_scorer_free(scorer);
    favor_caption_parser_free(parser);
    favor_string_free(parsed);
    favor_string_free(reference);
    favor_annotation_set_free(set);
}

TEST_CASE("scorer rejects unknown providers and bad configs") {
    favor_scorer* scorer = nullptr;
    char* err = nullptr;
    CHECK(favor_scorer_create(nullptr, "quantum", nullptr, &scorer, &err) == FAVOR_ERR_VALIDATION);
    favor_string_free(err);
    err = nullptr;
    CHECK(favor_scorer_create(R"({"w_p": 2.0})", "lexical", nullptr, &scorer, &err) ==
          FAVOR_ERR_VALIDATION);
    favor_string_free(err);
}

TEST_CASE("evaluate_open through the C API") {
    TempDir dir;
    std::string annotations = dir.file("ann.json");
    write_file(annotations, kAnnotations);
    std::string predictions = dir.file("pred.jsonl");
    write_file(predictions,
               "{\"video_id\": \"v1\", \"response\": "
               "\"The camera pans left. The man waves and sits down.\"}\n");

    favor_open_eval_options opts{};
    opts.annotations_path = annotations.c_str();
    opts.predictions_path = predictions.c_str();
    std::string output = dir.file("report.json");
    opts.output_path = output.c_str();
    opts.jobs = 2;

    char* summary = nullptr;
    char* err = nullptr;
    REQUIRE_MESSAGE(favor_evaluate_open(&opts, &summary, &err) == FAVOR_OK,
                    (err ? err : "no error message"));
    REQUIRE(summary != nullptr);
    CHECK(std::string(summary).find("\"scored\":1") != std::string::npos);
    favor_string_free(summary);
    CHECK(fs::exists(output));

    favor_open_eval_options missing{};
    CHECK(favor_evaluate_open(&missing, &summary, &err) == FAVOR_ERR_USAGE);
    favor_string_free(err);
}

TEST_CASE("judge workflow with the mock client via the C API") {
    TempDir dir;
    std::string annotations = dir.file("ann.json");
    write_file(annotations, kAnnotations);
    std::string predictions = dir.file("pred.jsonl");
    write_file(predictions, "{\"video_id\": \"v1\", \"response\": \"a man waving\"}\n");

    favor_judge_options opts{};
    opts.annotations_path = annotations.c_str();
    opts.predictions_path = predictions.c_str();
    std::string output = dir.file("judged.jsonl");
    opts.output_path = output.c_str();
    opts.use_mock = 1;

    char* summary = nullptr;
    char* err = nullptr;
    REQUIRE_MESSAGE(favor_judge_run(&opts, &summary, &err) == FAVOR_OK,
                    (err ? err : "no error message"));
    std::string s(summary);
    CHECK(s.find("\"judged\":1") != std::string::npos);
    CHECK(s.find("\"gpt_c\":7.0") != std::string::npos);
    favor_string_free(summary);

    // missing credential without --mock names the env var
    favor_judge_options real{};
    real.annotations_path = annotations.c_str();
    real.predictions_path = predictions.c_str();
    real.endpoint = "http://localhost:1";
    real.model = "judge";
    real.api_key_env = "FAVOR_CAPI_TEST_NO_KEY";
    CHECK(favor_judge_run(&real, &summary, &err) == FAVOR_ERR_JUDGE);
    REQUIRE(err != nullptr);
    CHECK(std::string(err).find("FAVOR_CAPI_TEST_NO_KEY") != std::string::npos);
    favor_string_free(err);
}

TEST_CASE("report combine through the C API") {
    TempDir dir;
    std::string annotations = dir.file("ann.json");
    write_file(annotations, kAnnotations);
    std::string predictions = dir.file("pred.jsonl");
    write_file(predictions,
               "{\"video_id\": \"v1\", \"response\": \"The man waves then sits down.\"}\n");

    favor_open_eval_options opts{};
    opts.annotations_path = annotations.c_str();
    opts.predictions_path = predictions.c_str();
    std::string run = dir.file("run.json");
    opts.output_path = run.c_str();
    char* err = nullptr;
    REQUIRE(favor_evaluate_open(&opts, nullptr, &err) == FAVOR_OK);

    const char* runs[] = {run.c_str()};
    std::string board = dir.file("board.md");
    REQUIRE(favor_report_combine(runs, 1, board.c_str(), &err) == FAVOR_OK);
    std::ifstream in(board);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("| Run |") != std::string::npos);
    CHECK(text.find("run") != std::string::npos);
}
