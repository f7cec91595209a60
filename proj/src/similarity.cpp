#include "favor/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include "favor/errors.hpp"
#include "favor/text.hpp"

namespace favor {

std::vector<std::vector<double>> SimilarityProvider::batch_sim(
    const std::vector<std::string>& preds, const std::vector<std::string>& refs) const {
    std::vector<std::vector<double>> out(preds.size(), std::vector<double>(refs.size(), 0.0));
    for (std::size_t i = 0; i < preds.size(); ++i)
        for (std::size_t j = 0; j < refs.size(); ++j) out[i][j] = sim(preds[i], refs[j]);
    return out;
}

std::vector<std::string> LexicalProvider::normalized_tokens(std::string_view phrase) {
    std::vector<std::string> out;
    for (const auto& tok : text::tokenize(phrase)) {
        std::string lw = text::to_lower(tok.word);
        if (text::is_article_or_possessive(lw)) continue;
        std::string lemma = text::verb_lemma(lw);
        if (!lemma.empty()) out.push_back(std::move(lemma));
    }
    return out;
}

double LexicalProvider::sim(std::string_view a, std::string_view b) const {
    std::vector<std::string> ta = normalized_tokens(a);
    std::vector<std::string> tb = normalized_tokens(b);
    if (ta.empty() && tb.empty()) return 1.0;
    if (ta.empty() || tb.empty()) return 0.0;

    std::map<std::string, long> ca, cb;
    for (auto& t : ta) ++ca[t];
    for (auto& t : tb) ++cb[t];
    if (ca == cb) return 1.0;  // identical multisets are exactly 1

    long dot = 0, na = 0, nb = 0;
    for (const auto& [t, c] : ca) {
        na += c * c;
        auto it = cb.find(t);
        if (it != cb.end()) dot += c * it->second;
    }
    for (const auto& [t, c] : cb) nb += c * c;
    if (dot == 0) return 0.0;
    double v = static_cast<double>(dot) /
               std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
    return std::clamp(v, 0.0, 1.0);
}

EmbeddingProvider::EmbeddingProvider(std::string model_id, const std::string& vectors_path)
    : model_id_(std::move(model_id)) {
    std::ifstream in(vectors_path);
    if (!in) throw IoError("embedding provider: cannot open vector file: " + vectors_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        std::vector<double> vec;
        double v;
        while (ls >> v) vec.push_back(v);
        if (vec.empty())
            throw ParseError("embedding provider: no components on line " + std::to_string(line_no),
                             0, line_no);
        if (dim_ == 0) dim_ = vec.size();
        if (vec.size() != dim_)
            throw ParseError("embedding provider: dimension mismatch on line " +
                                 std::to_string(line_no) + " (expected " + std::to_string(dim_) + ")",
                             0, line_no);
        vocab_.push_back(text::to_lower(token));
        vectors_.push_back(std::move(vec));
    }
    if (vocab_.empty()) throw ParseError("embedding provider: vector file is empty", 0, 0);
}

std::vector<double> EmbeddingProvider::embed(std::string_view phrase) const {
    std::vector<std::string> toks = LexicalProvider::normalized_tokens(phrase);
    std::vector<double> acc(dim_, 0.0);
    if (toks.empty()) return acc;
    for (const auto& t : toks) {
        auto it = std::find(vocab_.begin(), vocab_.end(), t);
        if (it != vocab_.end()) {
            const auto& v = vectors_[static_cast<std::size_t>(it - vocab_.begin())];
            for (std::size_t d = 0; d < dim_; ++d) acc[d] += v[d];
        } else {
            // Out-of-vocabulary tokens get a stable pseudo-vector so results
            // stay deterministic across runs.
            std::mt19937_64 rng(text::fnv1a64(t));
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            for (std::size_t d = 0; d < dim_; ++d) acc[d] += u(rng);
        }
    }
    for (double& v : acc) v /= static_cast<double>(toks.size());
    return acc;
}

double EmbeddingProvider::sim(std::string_view a, std::string_view b) const {
    std::vector<std::string> ta = LexicalProvider::normalized_tokens(a);
    std::vector<std::string> tb = LexicalProvider::normalized_tokens(b);
    if (ta.empty() && tb.empty()) return 1.0;
    if (ta.empty() || tb.empty()) return 0.0;
    if (ta == tb) return 1.0;

    std::vector<double> va = embed(a), vb = embed(b);
    double dot = 0, na = 0, nb = 0;
    for (std::size_t d = 0; d < dim_; ++d) {
        dot += va[d] * vb[d];
        na += va[d] * va[d];
        nb += vb[d] * vb[d];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = dot / std::sqrt(na * nb);
    return std::clamp((c + 1.0) / 2.0, 0.0, 1.0);
}

double attribute_sim(const std::vector<std::string>& attrs_a,
                     const std::vector<std::string>& attrs_b,
                     const SimilarityProvider& provider) {
    if (attrs_a.empty() && attrs_b.empty()) return 1.0;
    if (attrs_a.empty() || attrs_b.empty()) return 0.5;

    std::size_t k = std::min(attrs_a.size(), attrs_b.size());
    std::vector<std::vector<double>> m = provider.batch_sim(attrs_a, attrs_b);
    std::vector<bool> used_a(attrs_a.size(), false), used_b(attrs_b.size(), false);
    double total = 0.0;
    for (std::size_t step = 0; step < k; ++step) {
        double best = -1.0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < attrs_a.size(); ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < attrs_b.size(); ++j) {
                if (used_b[j]) continue;
                if (m[i][j] > best) {
                    best = m[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        used_a[bi] = true;
        used_b[bj] = true;
        total += best;
    }
    return total / static_cast<double>(k);
}

std::unique_ptr<SimilarityProvider> make_lexical_provider() {
    return std::make_unique<LexicalProvider>();
}

}  // namespace favor
