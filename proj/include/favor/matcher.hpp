#pragma once

#include <string>
#include <vector>

#include "favor/annotation.hpp"
#include "favor/similarity.hpp"

namespace favor {

// n x m similarity matrix between predicted and reference phrases.
struct SimilarityMatrix {
    std::vector<std::vector<double>> entries;  // row-major, values in [0,1]
    std::vector<std::string> pred_labels;
    std::vector<std::string> ref_labels;

    std::size_t rows() const { return entries.size(); }
    std::size_t cols() const { return entries.empty() ? ref_labels.size() : entries[0].size(); }
};

struct MatchedPair {
    std::size_t pred = 0;
    std::size_t ref = 0;
    double similarity = 0.0;
    bool operator==(const MatchedPair&) const = default;
};

// One-to-one assignment between predicted and reference sequences. Every
// pair clears the threshold; mean_matched_sim is 0 when pairs is empty.
struct MatchResult {
    std::vector<MatchedPair> pairs;  // sorted by pred index
    double mean_matched_sim = 0.0;
    std::vector<std::size_t> unmatched_pred;
    std::vector<std::size_t> unmatched_ref;
};

// Maximum-weight one-to-one assignment over entries >= theta. Among equal
// objectives the result is the lexicographically smallest flattened
// (pred, ref) index sequence, sorted by pred; an all-zero tail is left
// unmatched. Deterministic.
MatchResult optimal_match(const SimilarityMatrix& matrix, double theta);

// Exhaustive-enumeration oracle with the identical objective and tie-break.
// Refuses matrices with min(n,m) > 7.
MatchResult brute_force_match(const SimilarityMatrix& matrix, double theta);

struct SubjectPair {
    std::size_t pred = 0;
    std::size_t ref = 0;
    double score = 0.0;  // combined attribute + sequence similarity
};

struct SubjectMatching {
    std::vector<SubjectPair> pairs;
    std::vector<std::size_t> unmatched_pred;
    std::vector<std::size_t> unmatched_ref;
};

// Matches predicted subjects to annotated subjects. The pairwise score is
// alpha * attribute_sim(identity+attributes) + (1-alpha) * sim of the two
// action sequences joined as single phrases; assignment is optimal_match
// over those scores with threshold theta_subject.
SubjectMatching match_subjects(const std::vector<StructuredSubject>& pred,
                               const std::vector<StructuredSubject>& ref,
                               const SimilarityProvider& provider, double alpha,
                               double theta_subject);

}  // namespace favor
