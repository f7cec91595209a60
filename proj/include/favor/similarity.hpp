#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace favor {

// Semantic similarity between two phrases. Implementations guarantee
// sim(a,b) in [0,1], sim(a,a) = 1 for phrases that are non-empty after
// normalization, and sim(a,b) = sim(b,a). Providers are immutable after
// construction and safe for concurrent calls.
class SimilarityProvider {
public:
    virtual ~SimilarityProvider() = default;
    virtual double sim(std::string_view a, std::string_view b) const = 0;
    virtual std::string name() const = 0;
    virtual bool deterministic() const = 0;

    // Row-major n x m matrix; entry (i,j) equals sim(preds[i], refs[j]).
    std::vector<std::vector<double>> batch_sim(const std::vector<std::string>& preds,
                                               const std::vector<std::string>& refs) const;
};

// Dependency-free baseline: cosine over the multiset of normalized tokens
// (lowercased, punctuation stripped, articles dropped, verbs lemmatized).
// Fully deterministic; the provider CI and the oracles run against.
class LexicalProvider final : public SimilarityProvider {
public:
    double sim(std::string_view a, std::string_view b) const override;
    std::string name() const override { return "lexical"; }
    bool deterministic() const override { return true; }

    static std::vector<std::string> normalized_tokens(std::string_view phrase);
};

// Word-vector provider: loads a text file of per-token vectors ("token v1
// ... vd" per line), embeds a phrase as the mean of its token vectors and
// maps raw cosine c to (c+1)/2, clamped to [0,1]. Tokens absent from the
// file fall back to a deterministic hash-seeded vector.
class EmbeddingProvider final : public SimilarityProvider {
public:
    // Throws IoError/ParseError at construction when the backend file is
    // missing or malformed; never fails mid-scoring.
    EmbeddingProvider(std::string model_id, const std::string& vectors_path);
    double sim(std::string_view a, std::string_view b) const override;
    std::string name() const override { return "embedding:" + model_id_; }
    bool deterministic() const override { return true; }

    std::size_t dimension() const { return dim_; }

private:
    std::vector<double> embed(std::string_view phrase) const;
    std::string model_id_;
    std::size_t dim_ = 0;
    std::vector<std::string> vocab_;
    std::vector<std::vector<double>> vectors_;
};

// Greedy best-pair average over attribute lists: repeatedly pair the most
// similar remaining attributes and average the min(|a|,|b|) pair scores.
// Both lists empty -> 1.0 (compatible); exactly one empty -> 0.5.
double attribute_sim(const std::vector<std::string>& attrs_a,
                     const std::vector<std::string>& attrs_b,
                     const SimilarityProvider& provider);

std::unique_ptr<SimilarityProvider> make_lexical_provider();

}  // namespace favor
