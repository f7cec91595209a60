/*
 * C API for the favor motion-caption evaluation library.
 *
 * All functions return favor_status; FAVOR_OK means success. On failure the
 * optional errmsg out-parameter receives a malloc'd message the caller must
 * release with favor_string_free. Handles are opaque and must be released
 * with their matching _free function. Handles are immutable after creation
 * and safe to share across threads.
 */

#ifndef FAVOR_FAVOR_H
#define FAVOR_FAVOR_H

#include <stddef.h>

#if defined(_WIN32)
#define FAVOR_API __declspec(dllexport)
#else
#define FAVOR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum favor_status {
    FAVOR_OK = 0,
    FAVOR_ERR_USAGE = 1,      /* bad arguments / missing options          */
    FAVOR_ERR_IO = 2,         /* file missing or unwritable               */
    FAVOR_ERR_PARSE = 3,      /* malformed input container                */
    FAVOR_ERR_VALIDATION = 4, /* well-formed input violating an invariant */
    FAVOR_ERR_SCORING = 5,    /* failure while scoring                    */
    FAVOR_ERR_JUDGE = 6,      /* judge transport / credential problems    */
    FAVOR_ERR_INTERNAL = 7
} favor_status;

FAVOR_API const char* favor_version(void);
FAVOR_API void favor_string_free(char* s);

/* ---- annotations ------------------------------------------------------ */

typedef struct favor_annotation_set favor_annotation_set;

FAVOR_API favor_status favor_annotation_set_load(const char* path, favor_annotation_set** out,
                                                 char** errmsg);
FAVOR_API size_t favor_annotation_set_size(const favor_annotation_set* set);
/* StructuredMotion JSON derived from one record's ground truth. */
FAVOR_API favor_status favor_annotation_set_reference_json(const favor_annotation_set* set,
                                                           const char* video_id, char** json_out,
                                                           char** errmsg);
FAVOR_API void favor_annotation_set_free(favor_annotation_set* set);

/* ---- caption parsing --------------------------------------------------- */

typedef struct favor_caption_parser favor_caption_parser;

/* NULL lexicon paths select the built-in lexicons. */
FAVOR_API favor_status favor_caption_parser_create(const char* camera_lexicon_path,
                                                   const char* stop_verbs_path,
                                                   favor_caption_parser** out, char** errmsg);
/* Returns StructuredMotion JSON for the given free text. */
FAVOR_API favor_status favor_caption_parser_parse(const favor_caption_parser* parser,
                                                  const char* caption_text, char** json_out,
                                                  char** errmsg);
FAVOR_API void favor_caption_parser_free(favor_caption_parser* parser);

/* ---- scoring ----------------------------------------------------------- */

typedef struct favor_scorer favor_scorer;

/* config_json NULL selects defaults; provider is "lexical" or "embedding"
 * (the latter requires embeddings_path). */
FAVOR_API favor_status favor_scorer_create(const char* config_json, const char* provider,
                                           const char* embeddings_path, favor_scorer** out,
                                           char** errmsg);
/* Both arguments are StructuredMotion JSON; returns a SampleScore JSON with
 * the five component percentages and overall. */
FAVOR_API favor_status favor_scorer_score(const favor_scorer* scorer, const char* predicted_json,
                                          const char* reference_json, char** score_json_out,
                                          char** errmsg);
FAVOR_API void favor_scorer_free(favor_scorer* scorer);

/* ---- batch workflows (the CLI binds these) ----------------------------- */

typedef struct favor_open_eval_options {
    const char* annotations_path;
    const char* predictions_path;   /* JSON lines of {video_id, response} */
    const char* config_path;        /* NULL -> defaults */
    const char* provider;           /* NULL -> "lexical" */
    const char* embeddings_path;    /* NULL unless provider is "embedding" */
    const char* camera_lexicon_path;
    const char* stop_verbs_path;
    const char* output_path;        /* JSON report; .md/.csv written alongside */
    int structured;                 /* predictions carry StructuredMotion JSON */
    int jobs;
} favor_open_eval_options;

FAVOR_API favor_status favor_evaluate_open(const favor_open_eval_options* options,
                                           char** summary_json_out, char** errmsg);

typedef struct favor_closed_eval_options {
    const char* questions_path;
    const char* answers_path;
    const char* output_path;
} favor_closed_eval_options;

FAVOR_API favor_status favor_evaluate_closed(const favor_closed_eval_options* options,
                                             char** summary_json_out, char** errmsg);

typedef struct favor_judge_options {
    const char* annotations_path;
    const char* predictions_path;
    const char* output_path;    /* JSON-lines results; .summary.json alongside */
    const char* endpoint;       /* e.g. http://host:port */
    const char* model;
    const char* api_key_env;    /* NULL -> FAVOR_JUDGE_API_KEY */
    const char* cache_dir;      /* NULL -> no on-disk cache */
    int max_attempts;           /* <=0 -> 3 */
    int in_flight;              /* <=0 -> 1 */
    int use_mock;               /* canned deterministic client, no network */
    const char* mock_reply;     /* optional scripted reply for the mock */
} favor_judge_options;

FAVOR_API favor_status favor_judge_run(const favor_judge_options* options,
                                       char** summary_json_out, char** errmsg);

FAVOR_API favor_status favor_report_combine(const char* const* run_report_paths, size_t count,
                                            const char* output_path, char** errmsg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FAVOR_FAVOR_H */
