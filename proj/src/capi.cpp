#include "favor/favor.h"

#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "favor/annotation.hpp"
#include "favor/errors.hpp"
#include "favor/parser.hpp"
#include "favor/report.hpp"
#include "favor/scorer.hpp"

using nlohmann::json;

namespace {

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_err(char** errmsg, const std::string& msg) {
    if (errmsg != nullptr) *errmsg = dup_string(msg);
}

// Maps C++ exceptions to status codes at the ABI boundary.
template <typename Fn>
favor_status guarded(char** errmsg, Fn&& fn) {
    try {
        return fn();
    } catch (const favor::IoError& e) {
        set_err(errmsg, e.what());
        return FAVOR_ERR_IO;
    } catch (const favor::ParseError& e) {
        set_err(errmsg, e.what());
        return FAVOR_ERR_PARSE;
    } catch (const favor::ValidationError& e) {
        set_err(errmsg, e.what());
        return FAVOR_ERR_VALIDATION;
    } catch (const favor::JudgeError& e) {
        set_err(errmsg, e.what());
        return FAVOR_ERR_JUDGE;
    } catch (const favor::Error& e) {
        set_err(errmsg, e.what());
        return FAVOR_ERR_SCORING;
    } catch (const std::exception& e) {
        set_err(errmsg, e.what());
        return FAVOR_ERR_INTERNAL;
    } catch (...) {
        set_err(errmsg, "unknown error");
        return FAVOR_ERR_INTERNAL;
    }
}

std::string or_empty(const char* s) { return s == nullptr ? std::string() : std::string(s); }

}  // namespace

struct favor_annotation_set {
    std::vector<favor::AnnotationRecord> records;
    std::map<std::string, const favor::AnnotationRecord*> by_id;
};

struct favor_caption_parser {
    favor::CaptionParser parser;
};

struct favor_scorer {
    favor::ScoringConfig config;
    std::unique_ptr<favor::SimilarityProvider> provider;
};

extern "C" {

const char* favor_version(void) { return favor::tool_version(); }

void favor_string_free(char* s) { std::free(s); }

favor_status favor_annotation_set_load(const char* path, favor_annotation_set** out,
                                       char** errmsg) {
    if (path == nullptr || out == nullptr) {
        set_err(errmsg, "favor_annotation_set_load: path and out must be non-NULL");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        auto set = std::make_unique<favor_annotation_set>();
        set->records = favor::load_annotations_file(path);
        for (const auto& r : set->records) set->by_id[r.video_id] = &r;
        *out = set.release();
        return FAVOR_OK;
    });
}

size_t favor_annotation_set_size(const favor_annotation_set* set) {
    return set == nullptr ? 0 : set->records.size();
}

favor_status favor_annotation_set_reference_json(const favor_annotation_set* set,
                                                 const char* video_id, char** json_out,
                                                 char** errmsg) {
    if (set == nullptr || video_id == nullptr || json_out == nullptr) {
        set_err(errmsg, "favor_annotation_set_reference_json: NULL argument");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        auto it = set->by_id.find(video_id);
        if (it == set->by_id.end())
            throw favor::ValidationError(std::string("unknown video_id '") + video_id + "'");
        *json_out = dup_string(favor::structured_to_json(favor::reference_structure(*it->second)));
        return FAVOR_OK;
    });
}

void favor_annotation_set_free(favor_annotation_set* set) { delete set; }

favor_status favor_caption_parser_create(const char* camera_lexicon_path,
                                         const char* stop_verbs_path, favor_caption_parser** out,
                                         char** errmsg) {
    if (out == nullptr) {
        set_err(errmsg, "favor_caption_parser_create: out must be non-NULL");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        *out = new favor_caption_parser{favor::CaptionParser::from_files(
            or_empty(camera_lexicon_path), or_empty(stop_verbs_path))};
        return FAVOR_OK;
    });
}

favor_status favor_caption_parser_parse(const favor_caption_parser* parser,
                                        const char* caption_text, char** json_out, char** errmsg) {
    if (parser == nullptr || caption_text == nullptr || json_out == nullptr) {
        set_err(errmsg, "favor_caption_parser_parse: NULL argument");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        auto [structured, trace] = parser->parser.parse(caption_text);
        *json_out = dup_string(favor::structured_to_json(structured));
        return FAVOR_OK;
    });
}

void favor_caption_parser_free(favor_caption_parser* parser) { delete parser; }

favor_status favor_scorer_create(const char* config_json, const char* provider,
                                 const char* embeddings_path, favor_scorer** out, char** errmsg) {
    if (out == nullptr) {
        set_err(errmsg, "favor_scorer_create: out must be non-NULL");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        auto scorer = std::make_unique<favor_scorer>();
        if (config_json != nullptr && *config_json != '\0')
            scorer->config = favor::ScoringConfig::from_json(config_json);
        scorer->config.validate();
        std::string prov = or_empty(provider);
        if (prov.empty() || prov == "lexical") {
            scorer->provider = favor::make_lexical_provider();
        } else if (prov == "embedding") {
            scorer->provider = std::make_unique<favor::EmbeddingProvider>(
                "word-vectors", or_empty(embeddings_path));
        } else {
            throw favor::ValidationError("unknown provider '" + prov + "'");
        }
        *out = scorer.release();
        return FAVOR_OK;
    });
}

favor_status favor_scorer_score(const favor_scorer* scorer, const char* predicted_json,
                                const char* reference_json, char** score_json_out, char** errmsg) {
    if (scorer == nullptr || predicted_json == nullptr || reference_json == nullptr ||
        score_json_out == nullptr) {
        set_err(errmsg, "favor_scorer_score: NULL argument");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        favor::StructuredMotion pred = favor::structured_from_json(predicted_json);
        favor::StructuredMotion ref = favor::structured_from_json(reference_json);
        favor::SampleScore s = favor::score_sample(pred, ref, *scorer->provider, scorer->config);
        *score_json_out = dup_string(favor::sample_score_to_json(s));
        return FAVOR_OK;
    });
}

void favor_scorer_free(favor_scorer* scorer) { delete scorer; }

favor_status favor_evaluate_open(const favor_open_eval_options* options, char** summary_json_out,
                                 char** errmsg) {
    if (options == nullptr || options->annotations_path == nullptr ||
        options->predictions_path == nullptr) {
        set_err(errmsg, "favor_evaluate_open: annotations_path and predictions_path are required");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        favor::OpenEvalOptions opts;
        opts.annotations_path = options->annotations_path;
        opts.predictions_path = options->predictions_path;
        opts.config_path = or_empty(options->config_path);
        if (options->provider != nullptr) opts.provider = options->provider;
        opts.embeddings_path = or_empty(options->embeddings_path);
        opts.camera_lexicon_path = or_empty(options->camera_lexicon_path);
        opts.stop_verbs_path = or_empty(options->stop_verbs_path);
        opts.output_path = or_empty(options->output_path);
        opts.structured = options->structured != 0;
        opts.jobs = options->jobs > 0 ? options->jobs : 1;
        favor::OpenEvalSummary s = favor::evaluate_open(opts);
        if (summary_json_out != nullptr) {
            json j;
            j["scored"] = s.scored;
            j["skipped"] = s.skipped;
            j["overall"] = s.means.overall;
            j["means"] = json::parse(favor::sample_score_to_json(s.means, false));
            j["report_path"] = s.report_path;
            *summary_json_out = dup_string(j.dump());
        }
        return FAVOR_OK;
    });
}

favor_status favor_evaluate_closed(const favor_closed_eval_options* options,
                                   char** summary_json_out, char** errmsg) {
    if (options == nullptr || options->questions_path == nullptr ||
        options->answers_path == nullptr) {
        set_err(errmsg, "favor_evaluate_closed: questions_path and answers_path are required");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        favor::ClosedEvalOptions opts;
        opts.questions_path = options->questions_path;
        opts.answers_path = options->answers_path;
        opts.output_path = or_empty(options->output_path);
        favor::ClosedEvalSummary s = favor::evaluate_closed(opts);
        if (summary_json_out != nullptr) {
            json j;
            j["overall"] = s.overall_pct;
            j["total"] = s.total;
            j["unanswerable"] = s.unanswerable;
            j["report_path"] = s.report_path;
            *summary_json_out = dup_string(j.dump());
        }
        return FAVOR_OK;
    });
}

favor_status favor_judge_run(const favor_judge_options* options, char** summary_json_out,
                             char** errmsg) {
    if (options == nullptr || options->annotations_path == nullptr ||
        options->predictions_path == nullptr) {
        set_err(errmsg, "favor_judge_run: annotations_path and predictions_path are required");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        favor::JudgeRunOptions opts;
        opts.annotations_path = options->annotations_path;
        opts.predictions_path = options->predictions_path;
        opts.output_path = or_empty(options->output_path);
        opts.http.endpoint = or_empty(options->endpoint);
        opts.http.model = or_empty(options->model);
        if (options->api_key_env != nullptr && *options->api_key_env != '\0')
            opts.http.api_key_env = options->api_key_env;
        opts.cache_dir = or_empty(options->cache_dir);
        opts.max_attempts = options->max_attempts > 0 ? options->max_attempts : 3;
        opts.in_flight = options->in_flight > 0 ? options->in_flight : 1;
        opts.use_mock = options->use_mock != 0;
        if (options->mock_reply != nullptr && *options->mock_reply != '\0')
            opts.mock_script.push_back(options->mock_reply);
        favor::JudgeRunSummary s = favor::judge_run(opts);
        if (summary_json_out != nullptr) {
            json j;
            j["judged"] = s.summary.judged;
            j["failures"] = s.summary.failures;
            j["gpt_c"] = s.summary.gpt_c ? json(*s.summary.gpt_c) : json(nullptr);
            j["gpt_d"] = s.summary.gpt_d ? json(*s.summary.gpt_d) : json(nullptr);
            j["results_path"] = s.results_path;
            *summary_json_out = dup_string(j.dump());
        }
        return FAVOR_OK;
    });
}

favor_status favor_report_combine(const char* const* run_report_paths, size_t count,
                                  const char* output_path, char** errmsg) {
    if (run_report_paths == nullptr || count == 0 || output_path == nullptr) {
        set_err(errmsg, "favor_report_combine: need at least one run report and an output path");
        return FAVOR_ERR_USAGE;
    }
    return guarded(errmsg, [&] {
        std::vector<std::string> paths;
        for (size_t i = 0; i < count; ++i) paths.emplace_back(run_report_paths[i]);
        favor::atomic_write(output_path, favor::combine_reports(paths));
        return FAVOR_OK;
    });
}

}  // extern "C"
