#include "favor/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "favor/errors.hpp"

namespace favor {

namespace {

constexpr double kTieTol = 1e-9;

// Min-cost assignment with potentials on an n x m matrix, n <= m.
// Returns the maximum total weight of a perfect matching of rows into
// columns; weights must be non-negative.
double hungarian_max(const std::vector<std::vector<double>>& w) {
    const std::size_t n = w.size();
    if (n == 0) return 0.0;
    const std::size_t m = w[0].size();
    if (m == 0) return 0.0;
    // p[j] = row assigned to column j (1-based rows, 0 = none)
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    const double INF = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, INF);
        std::vector<bool> used(m + 1, false);
        do {
            used[j0] = true;
            std::size_t i0 = p[j0], j1 = 0;
            double delta = INF;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                double cur = -w[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (std::size_t j = 1; j <= m; ++j)
        if (p[j] != 0) total += w[p[j] - 1][j - 1];
    return total;
}

// Max total weight over one-to-one assignments of the given rows into the
// given columns, where sub-threshold entries count as weight 0 (a feasible
// partial matching always extends to a perfect one through them).
double assignment_opt(const SimilarityMatrix& mat, double theta,
                      const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    if (rows.empty() || cols.empty()) return 0.0;
    const bool transpose = rows.size() > cols.size();
    const auto& a = transpose ? cols : rows;
    const auto& b = transpose ? rows : cols;
    std::vector<std::vector<double>> w(a.size(), std::vector<double>(b.size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            double e = transpose ? mat.entries[b[j]][a[i]] : mat.entries[a[i]][b[j]];
            w[i][j] = e >= theta ? e : 0.0;
        }
    return hungarian_max(w);
}

MatchResult finalize(const SimilarityMatrix& mat, std::vector<MatchedPair> pairs) {
    MatchResult res;
    std::sort(pairs.begin(), pairs.end(),
              [](const MatchedPair& a, const MatchedPair& b) { return a.pred < b.pred; });
    res.pairs = std::move(pairs);
    double total = 0.0;
    std::vector<bool> pred_used(mat.rows(), false), ref_used(mat.cols(), false);
    for (const auto& p : res.pairs) {
        total += p.similarity;
        pred_used[p.pred] = true;
        ref_used[p.ref] = true;
    }
    res.mean_matched_sim =
        res.pairs.empty() ? 0.0 : total / static_cast<double>(res.pairs.size());
    for (std::size_t i = 0; i < mat.rows(); ++i)
        if (!pred_used[i]) res.unmatched_pred.push_back(i);
    for (std::size_t j = 0; j < mat.cols(); ++j)
        if (!ref_used[j]) res.unmatched_ref.push_back(j);
    return res;
}

void check_matrix(const SimilarityMatrix& mat) {
    for (const auto& row : mat.entries)
        if (row.size() != mat.cols())
            throw ValidationError("similarity matrix rows have inconsistent lengths");
}

}  // namespace

MatchResult optimal_match(const SimilarityMatrix& matrix, double theta) {
    check_matrix(matrix);
    const std::size_t n = matrix.rows(), m = matrix.cols();
    std::vector<MatchedPair> pairs;
    std::vector<std::size_t> avail(m);
    std::iota(avail.begin(), avail.end(), 0);

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> rem_rows;
        for (std::size_t r = i; r < n; ++r) rem_rows.push_back(r);
        double rem_opt = assignment_opt(matrix, theta, rem_rows, avail);
        if (rem_opt <= kTieTol) break;  // all-zero tail stays unmatched

        std::vector<std::size_t> rest_rows(rem_rows.begin() + 1, rem_rows.end());
        for (std::size_t k = 0; k < avail.size(); ++k) {
            std::size_t j = avail[k];
            double sim = matrix.entries[i][j];
            if (sim < theta) continue;
            std::vector<std::size_t> rest_cols = avail;
            rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(k));
            double rest = assignment_opt(matrix, theta, rest_rows, rest_cols);
            if (sim + rest >= rem_opt - kTieTol) {
                pairs.push_back({i, j, sim});
                avail = std::move(rest_cols);
                break;
            }
        }
    }
    return finalize(matrix, std::move(pairs));
}

MatchResult brute_force_match(const SimilarityMatrix& matrix, double theta) {
    check_matrix(matrix);
    const std::size_t n = matrix.rows(), m = matrix.cols();
    if (std::min(n, m) > 7)
        throw ValidationError("brute_force_match refuses matrices with min(n,m) > 7");

    std::vector<MatchedPair> best;
    double best_obj = 0.0;  // the empty assignment is always feasible
    bool have_best = false;

    std::vector<MatchedPair> cur;
    std::vector<bool> ref_used(m, false);
    std::vector<int> cur_flat, best_flat;

    auto flatten = [](const std::vector<MatchedPair>& ps) {
        std::vector<int> f;
        f.reserve(ps.size() * 2);
        for (const auto& p : ps) {
            f.push_back(static_cast<int>(p.pred));
            f.push_back(static_cast<int>(p.ref));
        }
        return f;
    };

    auto consider = [&]() {
        double obj = 0.0;
        for (const auto& p : cur) obj += p.similarity;
        if (!have_best || obj > best_obj + kTieTol) {
            best = cur;
            best_obj = obj;
            best_flat = flatten(cur);
            have_best = true;
        } else if (obj >= best_obj - kTieTol) {
            std::vector<int> f = flatten(cur);
            if (f < best_flat) {
                best = cur;
                best_obj = std::max(best_obj, obj);
                best_flat = std::move(f);
            }
        }
    };

    // Enumerates every one-to-one assignment built from feasible pairs,
    // in pred-index order so flattened sequences come out sorted.
    auto recurse = [&](auto&& self, std::size_t i) -> void {
        if (i == n) {
            consider();
            return;
        }
        self(self, i + 1);  // pred i unmatched
        for (std::size_t j = 0; j < m; ++j) {
            if (ref_used[j] || matrix.entries[i][j] < theta) continue;
            ref_used[j] = true;
            cur.push_back({i, j, matrix.entries[i][j]});
            self(self, i + 1);
            cur.pop_back();
            ref_used[j] = false;
        }
    };
    recurse(recurse, 0);
    return finalize(matrix, std::move(best));
}

SubjectMatching match_subjects(const std::vector<StructuredSubject>& pred,
                               const std::vector<StructuredSubject>& ref,
                               const SimilarityProvider& provider, double alpha,
                               double theta_subject) {
    if (alpha < 0.0 || alpha > 1.0)
        throw ValidationError("subject matching: alpha must lie in [0,1]");

    auto identity_bundle = [](const StructuredSubject& s) {
        std::vector<std::string> bundle;
        bundle.push_back(s.identity);
        bundle.insert(bundle.end(), s.attributes.begin(), s.attributes.end());
        return bundle;
    };
    auto joined_actions = [](const StructuredSubject& s) {
        std::string out;
        for (const auto& a : s.actions) {
            if (!out.empty()) out += ' ';
            out += a;
        }
        return out;
    };

    SimilarityMatrix combined;
    combined.entries.assign(pred.size(), std::vector<double>(ref.size(), 0.0));
    for (std::size_t i = 0; i < pred.size(); ++i) {
        combined.pred_labels.push_back(pred[i].identity);
        for (std::size_t j = 0; j < ref.size(); ++j) {
            double attr = attribute_sim(identity_bundle(pred[i]), identity_bundle(ref[j]), provider);
            double seq = provider.sim(joined_actions(pred[i]), joined_actions(ref[j]));
            combined.entries[i][j] = alpha * attr + (1.0 - alpha) * seq;
        }
    }
    for (const auto& r : ref) combined.ref_labels.push_back(r.identity);

    MatchResult mr = optimal_match(combined, theta_subject);
    SubjectMatching out;
    for (const auto& p : mr.pairs) out.pairs.push_back({p.pred, p.ref, p.similarity});
    out.unmatched_pred = std::move(mr.unmatched_pred);
    out.unmatched_ref = std::move(mr.unmatched_ref);
    return out;
}

}  // namespace favor
