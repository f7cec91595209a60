#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "favor/annotation.hpp"
#include "favor/matcher.hpp"
#include "favor/similarity.hpp"

namespace favor {

struct ComponentWeights {
    double camera = 0.20;
    double subject_match = 0.30;
    double subject_sequence = 0.10;
    double temporal_match = 0.30;
    double temporal_sequence = 0.10;
};

// Scoring knobs. w_p/w_r/w_o weight precision, recall and order inside one
// sequence score; beta shapes the length factor; theta/theta_subject/alpha
// are forwarded to the matcher; component_weights combine the five
// Table-style components into the overall percentage.
struct ScoringConfig {
    double w_p = 0.4;
    double w_r = 0.4;
    double w_o = 0.2;
    double beta = 0.5;
    double theta = 0.5;
    double theta_subject = 0.35;
    double alpha = 0.5;
    ComponentWeights component_weights;

    // Throws ValidationError when weights do not sum to 1 (1e-9), beta <= 0,
    // or any knob leaves its range.
    void validate() const;

    std::string to_json() const;
    static ScoringConfig from_json(const std::string& json_text);
};

struct SequenceScore {
    double precision = 0.0;
    double recall = 0.0;
    double order = 0.0;
    double length_factor = 0.0;
    double combined = 0.0;
};

// The five Table-style components (percentages) plus overall for one
// (prediction, annotation) pair.
struct SampleScore {
    SequenceScore camera;
    std::vector<SequenceScore> per_subject;  // one per matched subject pair
    double camera_pct = 0.0;
    double subject_match = 0.0;
    double subject_sequence = 0.0;
    double temporal_match = 0.0;
    double temporal_sequence = 0.0;
    double overall = 0.0;
};

struct ModelReport {
    std::vector<std::pair<std::string, SampleScore>> samples;  // keyed by video_id
    SampleScore means;  // arithmetic means of the percentage fields
    std::size_t sample_count = 0;
};

// (min(n,m)/max(n,m))^beta; 1 when n == m (including 0 == 0), 0 when exactly
// one side is empty.
double length_factor(std::size_t n, std::size_t m, double beta);

// Similarity-weighted precision and recall: (|pairs|/n) * mean matched
// similarity * L_f, and the same with m. Zero-length sides give 0.
std::pair<double, double> precision_recall(const MatchResult& match, std::size_t n, std::size_t m,
                                           double lf);

// Tie-aware (tau-b) rank correlation over matched index pairs; fewer than
// two pairs give 1 by convention.
double kendall_tau(const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

// Generic tau-b over two equal-length sequences (O(n log n)).
double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y);

// Affine map from tau in [-1,1] to [0,1].
double order_score(double tau);

// Full pipeline for one phrase sequence: similarity matrix, optimal match,
// length factor, P/R, tau, order, weighted combination. Both sides empty is
// vacuous perfection (combined 1); a non-empty prediction against an empty
// reference scores 0 (hallucinated content earns nothing).
SequenceScore score_sequence(const std::vector<std::string>& pred,
                             const std::vector<std::string>& ref,
                             const SimilarityProvider& provider, const ScoringConfig& config);

// Scores the three aspects (camera sequence, per-subject action sequences,
// comprehensive temporal sequence) and combines them per component_weights.
SampleScore score_sample(const StructuredMotion& parsed, const StructuredMotion& reference,
                         const SimilarityProvider& provider, const ScoringConfig& config);

// Arithmetic means over samples; throws ValidationError on an empty list.
ModelReport aggregate(const std::vector<std::pair<std::string, SampleScore>>& samples);

// include_detail adds the camera P/R/order breakdown, meaningful only for
// per-sample scores (not for aggregated means).
std::string sample_score_to_json(const SampleScore& s, bool include_detail = true);

}  // namespace favor
