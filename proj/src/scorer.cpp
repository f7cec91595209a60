#include "favor/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "favor/errors.hpp"

using nlohmann::json;

namespace favor {

namespace {

constexpr double kWeightTol = 1e-9;

// Counts strict inversions of v by merge sort.
long long count_inversions(std::vector<double>& v) {
    std::vector<double> buf(v.size());
    long long inv = 0;
    auto merge_count = [&](auto&& self, std::size_t lo, std::size_t hi) -> void {
        if (hi - lo < 2) return;
        std::size_t mid = lo + (hi - lo) / 2;
        self(self, lo, mid);
        self(self, mid, hi);
        std::size_t i = lo, j = mid, k = lo;
        while (i < mid && j < hi) {
            if (v[j] < v[i]) {
                inv += static_cast<long long>(mid - i);
                buf[k++] = v[j++];
            } else {
                buf[k++] = v[i++];
            }
        }
        while (i < mid) buf[k++] = v[i++];
        while (j < hi) buf[k++] = v[j++];
        std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                  buf.begin() + static_cast<std::ptrdiff_t>(hi),
                  v.begin() + static_cast<std::ptrdiff_t>(lo));
    };
    merge_count(merge_count, 0, v.size());
    return inv;
}

long long tie_pairs(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    long long total = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i]) ++j;
        long long t = static_cast<long long>(j - i);
        total += t * (t - 1) / 2;
        i = j;
    }
    return total;
}

}  // namespace

void ScoringConfig::validate() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(w_p) || !in01(w_r) || !in01(w_o))
        throw ValidationError("config: w_p, w_r, w_o must lie in [0,1]");
    if (std::abs(w_p + w_r + w_o - 1.0) > kWeightTol)
        throw ValidationError("config: w_p + w_r + w_o must sum to 1");
    if (beta <= 0.0) throw ValidationError("config: beta must be positive");
    if (!in01(theta) || !in01(theta_subject))
        throw ValidationError("config: thresholds must lie in [0,1]");
    if (!in01(alpha)) throw ValidationError("config: alpha must lie in [0,1]");
    const ComponentWeights& c = component_weights;
    double cs = c.camera + c.subject_match + c.subject_sequence + c.temporal_match +
                c.temporal_sequence;
    if (c.camera < 0 || c.subject_match < 0 || c.subject_sequence < 0 || c.temporal_match < 0 ||
        c.temporal_sequence < 0 || std::abs(cs - 1.0) > kWeightTol)
        throw ValidationError("config: component weights must be non-negative and sum to 1");
}

std::string ScoringConfig::to_json() const {
    json j;
    j["w_p"] = w_p;
    j["w_r"] = w_r;
    j["w_o"] = w_o;
    j["beta"] = beta;
    j["theta"] = theta;
    j["theta_subject"] = theta_subject;
    j["alpha"] = alpha;
    j["component_weights"] = {{"camera", component_weights.camera},
                              {"subject_match", component_weights.subject_match},
                              {"subject_sequence", component_weights.subject_sequence},
                              {"temporal_match", component_weights.temporal_match},
                              {"temporal_sequence", component_weights.temporal_sequence}};
    return j.dump();
}

ScoringConfig ScoringConfig::from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what(), e.byte);
    }
    ScoringConfig c;
    c.w_p = j.value("w_p", c.w_p);
    c.w_r = j.value("w_r", c.w_r);
    c.w_o = j.value("w_o", c.w_o);
    c.beta = j.value("beta", c.beta);
    c.theta = j.value("theta", c.theta);
    c.theta_subject = j.value("theta_subject", c.theta_subject);
    c.alpha = j.value("alpha", c.alpha);
    if (j.contains("component_weights")) {
        const json& w = j.at("component_weights");
        c.component_weights.camera = w.value("camera", c.component_weights.camera);
        c.component_weights.subject_match = w.value("subject_match", c.component_weights.subject_match);
        c.component_weights.subject_sequence =
            w.value("subject_sequence", c.component_weights.subject_sequence);
        c.component_weights.temporal_match = w.value("temporal_match", c.component_weights.temporal_match);
        c.component_weights.temporal_sequence =
            w.value("temporal_sequence", c.component_weights.temporal_sequence);
    }
    c.validate();
    return c;
}

double length_factor(std::size_t n, std::size_t m, double beta) {
    if (n == m) return 1.0;
    if (n == 0 || m == 0) return 0.0;
    double lo = static_cast<double>(std::min(n, m));
    double hi = static_cast<double>(std::max(n, m));
    return std::pow(lo / hi, beta);
}

std::pair<double, double> precision_recall(const MatchResult& match, std::size_t n, std::size_t m,
                                           double lf) {
    double k = static_cast<double>(match.pairs.size());
    double sbar = match.mean_matched_sim;
    double p = n == 0 ? 0.0 : k / static_cast<double>(n) * sbar * lf;
    double r = m == 0 ? 0.0 : k / static_cast<double>(m) * sbar * lf;
    return {p, r};
}

double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw ValidationError("kendall_tau_b: sequence lengths differ");
    if (n < 2) return 1.0;

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    long long n0 = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
    long long n1 = tie_pairs(x);
    long long n2 = tie_pairs(y);

    // Joint ties: runs equal in both coordinates.
    long long n3 = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && x[idx[j]] == x[idx[i]] && y[idx[j]] == y[idx[i]]) ++j;
            long long t = static_cast<long long>(j - i);
            n3 += t * (t - 1) / 2;
            i = j;
        }
    }

    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[idx[i]];
    long long nd = count_inversions(ys);
    long long num = n0 - n1 - n2 + n3 - 2 * nd;  // concordant - discordant

    double d1 = static_cast<double>(n0 - n1);
    double d2 = static_cast<double>(n0 - n2);
    if (d1 <= 0.0 || d2 <= 0.0) return 1.0;  // no orderable pairs on one axis
    return static_cast<double>(num) / std::sqrt(d1 * d2);
}

double kendall_tau(const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    if (pairs.size() < 2) return 1.0;
    auto sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> x, y;
    x.reserve(sorted.size());
    y.reserve(sorted.size());
    for (const auto& [p, r] : sorted) {
        x.push_back(static_cast<double>(p));
        y.push_back(static_cast<double>(r));
    }
    return kendall_tau_b(x, y);
}

double order_score(double tau) { return (tau + 1.0) / 2.0; }

SequenceScore score_sequence(const std::vector<std::string>& pred,
                             const std::vector<std::string>& ref,
                             const SimilarityProvider& provider, const ScoringConfig& config) {
    const std::size_t n = pred.size(), m = ref.size();
    if (n == 0 && m == 0) return {1.0, 1.0, 1.0, 1.0, 1.0};
    if (m == 0 || n == 0) return {0.0, 0.0, 0.0, 0.0, 0.0};

    SimilarityMatrix matrix{provider.batch_sim(pred, ref), pred, ref};
    MatchResult match = optimal_match(matrix, config.theta);
    double lf = length_factor(n, m, config.beta);
    auto [p, r] = precision_recall(match, n, m, lf);

    std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
    index_pairs.reserve(match.pairs.size());
    for (const auto& mp : match.pairs) index_pairs.emplace_back(mp.pred, mp.ref);
    double o = order_score(kendall_tau(index_pairs));

    SequenceScore s;
    s.precision = p;
    s.recall = r;
    s.order = o;
    s.length_factor = lf;
    s.combined = config.w_p * p + config.w_r * r + config.w_o * o;
    return s;
}

SampleScore score_sample(const StructuredMotion& parsed, const StructuredMotion& reference,
                         const SimilarityProvider& provider, const ScoringConfig& config) {
    config.validate();
    SampleScore out;

    out.camera = score_sequence(parsed.camera_sequence, reference.camera_sequence, provider, config);
    out.camera_pct = 100.0 * out.camera.combined;

    const double pr_norm = config.w_p + config.w_r;

    // Per-subject aspect, averaged over annotated subjects (unmatched ones
    // contribute 0 to the match component).
    SubjectMatching subjects = match_subjects(parsed.subjects, reference.subjects, provider,
                                              config.alpha, config.theta_subject);
    if (reference.subjects.empty()) {
        double v = parsed.subjects.empty() ? 100.0 : 0.0;
        out.subject_match = v;
        out.subject_sequence = v;
    } else {
        std::vector<double> ref_match(reference.subjects.size(), 0.0);
        double order_sum = 0.0;
        for (const auto& pair : subjects.pairs) {
            SequenceScore s = score_sequence(parsed.subjects[pair.pred].actions,
                                             reference.subjects[pair.ref].actions, provider, config);
            out.per_subject.push_back(s);
            ref_match[pair.ref] =
                pr_norm > 0.0 ? (config.w_p * s.precision + config.w_r * s.recall) / pr_norm : 0.0;
            order_sum += s.order;
        }
        double match_mean = std::accumulate(ref_match.begin(), ref_match.end(), 0.0) /
                            static_cast<double>(ref_match.size());
        out.subject_match = 100.0 * match_mean;
        out.subject_sequence =
            subjects.pairs.empty() ? 100.0
                                   : 100.0 * (order_sum / static_cast<double>(subjects.pairs.size()));
    }

    // Comprehensive temporal aspect. An element pair is admissible only when
    // its owning subjects were matched; inadmissible entries are masked below
    // any threshold.
    const auto& pt = parsed.temporal_sequence;
    const auto& rt = reference.temporal_sequence;
    if (rt.empty()) {
        double v = pt.empty() ? 100.0 : 0.0;
        out.temporal_match = v;
        out.temporal_sequence = v;
    } else if (pt.empty()) {
        out.temporal_match = 0.0;
        out.temporal_sequence = 100.0;  // no order evidence; match already punishes
    } else {
        std::vector<std::vector<bool>> admissible(parsed.subjects.size(),
                                                  std::vector<bool>(reference.subjects.size(), false));
        for (const auto& pair : subjects.pairs) admissible[pair.pred][pair.ref] = true;

        SimilarityMatrix matrix;
        matrix.entries.assign(pt.size(), std::vector<double>(rt.size(), -1.0));
        for (std::size_t i = 0; i < pt.size(); ++i) {
            matrix.pred_labels.push_back(pt[i].action);
            for (std::size_t j = 0; j < rt.size(); ++j) {
                bool ok = pt[i].subject >= 0 && rt[j].subject >= 0 &&
                          static_cast<std::size_t>(pt[i].subject) < admissible.size() &&
                          static_cast<std::size_t>(rt[j].subject) < reference.subjects.size() &&
                          admissible[static_cast<std::size_t>(pt[i].subject)]
                                    [static_cast<std::size_t>(rt[j].subject)];
                if (ok) matrix.entries[i][j] = provider.sim(pt[i].action, rt[j].action);
            }
        }
        for (const auto& t : rt) matrix.ref_labels.push_back(t.action);

        MatchResult match = optimal_match(matrix, config.theta);
        double lf = length_factor(pt.size(), rt.size(), config.beta);
        auto [p, r] = precision_recall(match, pt.size(), rt.size(), lf);
        out.temporal_match = 100.0 * (pr_norm > 0.0 ? (config.w_p * p + config.w_r * r) / pr_norm : 0.0);

        std::vector<std::pair<std::size_t, std::size_t>> index_pairs;
        for (const auto& mp : match.pairs) index_pairs.emplace_back(mp.pred, mp.ref);
        out.temporal_sequence = 100.0 * order_score(kendall_tau(index_pairs));
    }

    const ComponentWeights& cw = config.component_weights;
    out.overall = cw.camera * out.camera_pct + cw.subject_match * out.subject_match +
                  cw.subject_sequence * out.subject_sequence +
                  cw.temporal_match * out.temporal_match +
                  cw.temporal_sequence * out.temporal_sequence;
    return out;
}

ModelReport aggregate(const std::vector<std::pair<std::string, SampleScore>>& samples) {
    if (samples.empty()) throw ValidationError("aggregate: no samples to average");
    ModelReport report;
    report.samples = samples;
    report.sample_count = samples.size();
    double n = static_cast<double>(samples.size());
    auto mean_of = [&](double SampleScore::* field) {
        double sum = 0.0;
        for (const auto& [id, s] : samples) sum += s.*field;
        return sum / n;
    };
    report.means.camera_pct = mean_of(&SampleScore::camera_pct);
    report.means.subject_match = mean_of(&SampleScore::subject_match);
    report.means.subject_sequence = mean_of(&SampleScore::subject_sequence);
    report.means.temporal_match = mean_of(&SampleScore::temporal_match);
    report.means.temporal_sequence = mean_of(&SampleScore::temporal_sequence);
    report.means.overall = mean_of(&SampleScore::overall);
    return report;
}

std::string sample_score_to_json(const SampleScore& s, bool include_detail) {
    json j;
    j["camera"] = s.camera_pct;
    j["subject_match"] = s.subject_match;
    j["subject_sequence"] = s.subject_sequence;
    j["temporal_match"] = s.temporal_match;
    j["temporal_sequence"] = s.temporal_sequence;
    j["overall"] = s.overall;
    if (include_detail)
        j["camera_detail"] = {{"precision", s.camera.precision},
                              {"recall", s.camera.recall},
                              {"order", s.camera.order},
                              {"length_factor", s.camera.length_factor},
                              {"combined", s.camera.combined}};
    return j.dump();
}

}  // namespace favor
