#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "favor/errors.hpp"
#include "favor/scorer.hpp"
#include "oracles.hpp"

using namespace favor;

namespace {
const ScoringConfig kDefault;
const LexicalProvider kLex;
}  // namespace

TEST_CASE("length_factor formula and edge cases") {
    CHECK(length_factor(5, 5, 0.5) == 1.0);
    CHECK(length_factor(0, 0, 2.0) == 1.0);
    CHECK(length_factor(8, 4, 0.5) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(length_factor(8, 4, 1.0) == 0.5);
    CHECK(length_factor(0, 3, 0.5) == 0.0);
    CHECK(length_factor(3, 0, 0.5) == 0.0);
}

TEST_CASE("precision_recall: worked arithmetic, exact") {
    MatchResult match;
    match.pairs = {{0, 0, 0.9}, {1, 1, 0.9}};
    match.mean_matched_sim = 0.9;
    double lf = length_factor(4, 2, 1.0);
    auto [p, r] = precision_recall(match, 4, 2, lf);
    CHECK(p == 0.225);
    CHECK(r == 0.45);
}

TEST_CASE("precision_recall: identity and empty cases") {
    MatchResult perfect;
    perfect.pairs = {{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}};
    perfect.mean_matched_sim = 1.0;
    auto [p, r] = precision_recall(perfect, 3, 3, 1.0);
    CHECK(p == 1.0);
    CHECK(r == 1.0);

    MatchResult none;
    auto [p0, r0] = precision_recall(none, 4, 2, 0.5);
    CHECK(p0 == 0.0);
    CHECK(r0 == 0.0);
}

TEST_CASE("kendall_tau on index pairs") {
    CHECK(kendall_tau({{0, 0}, {1, 1}, {2, 2}}) == 1.0);
    CHECK(kendall_tau({{0, 2}, {1, 1}, {2, 0}}) == -1.0);
    CHECK(kendall_tau({{0, 0}}) == 1.0);
    CHECK(kendall_tau({}) == 1.0);
}

TEST_CASE("kendall_tau_b equals the pair-counting oracle") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<std::size_t> len(2, 12);
    std::uniform_int_distribution<int> val(0, 6);  // collisions force tie handling
    for (int iter = 0; iter < 500; ++iter) {
        std::size_t n = len(rng);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = val(rng);
            y[i] = val(rng);
        }
        double fast = kendall_tau_b(x, y);
        double slow = oracles::tau_b_counting(x, y);
        CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
    }
}

TEST_CASE("order_score is the affine map") {
    CHECK(order_score(1.0) == 1.0);
    CHECK(order_score(-1.0) == 0.0);
    CHECK(order_score(0.0) == 0.5);
}

TEST_CASE("score_sequence: identity gives combined 1") {
    std::vector<std::string> seq = {"waves", "sits down", "stands up"};
    SequenceScore s = score_sequence(seq, seq, kLex, kDefault);
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.order == 1.0);
    CHECK(s.combined == 1.0);
}

TEST_CASE("score_sequence: both empty is vacuous perfection") {
    SequenceScore s = score_sequence({}, {}, kLex, kDefault);
    CHECK(s.combined == 1.0);
    CHECK(s.precision == 1.0);
}

TEST_CASE("score_sequence: hallucinated content scores zero") {
    SequenceScore s = score_sequence({"waves"}, {}, kLex, kDefault);
    CHECK(s.combined == 0.0);
    SequenceScore miss = score_sequence({}, {"waves"}, kLex, kDefault);
    CHECK(miss.combined == 0.0);
}

TEST_CASE("score_sequence: reversed prediction keeps P/R, zeroes order") {
    std::vector<std::string> ref = {"waves", "sits down", "stands up"};
    std::vector<std::string> rev = {"stands up", "sits down", "waves"};
    SequenceScore fwd = score_sequence(ref, ref, kLex, kDefault);
    SequenceScore bwd = score_sequence(rev, ref, kLex, kDefault);
    CHECK(bwd.precision == fwd.precision);
    CHECK(bwd.recall == fwd.recall);
    CHECK(bwd.order == 0.0);
    CHECK(bwd.combined == doctest::Approx(kDefault.w_p + kDefault.w_r).epsilon(1e-12));
}

TEST_CASE("score_sequence fields stay in range on fuzzed inputs") {
    std::mt19937 rng(9);
    const auto& vocab = oracles::action_vocab();
    std::uniform_int_distribution<std::size_t> len(0, 6);
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<std::string> a, b;
        for (std::size_t i = len(rng); i-- > 0;) a.push_back(vocab[pick(rng)]);
        for (std::size_t i = len(rng); i-- > 0;) b.push_back(vocab[pick(rng)]);
        SequenceScore s = score_sequence(a, b, kLex, kDefault);
        for (double v : {s.precision, s.recall, s.order, s.combined}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(s.combined ==
              doctest::Approx(kDefault.w_p * s.precision + kDefault.w_r * s.recall +
                              kDefault.w_o * s.order)
                  .epsilon(1e-9));
    }
}

TEST_CASE("score_sample: structured identity scores 100 in every component") {
    std::mt19937 rng(21);
    for (int iter = 0; iter < 20; ++iter) {
        auto rec = oracles::random_record(rng, "v");
        StructuredMotion ref = reference_structure(rec);
        SampleScore s = score_sample(ref, ref, kLex, kDefault);
        CHECK(s.camera_pct == 100.0);
        CHECK(s.subject_match == 100.0);
        CHECK(s.subject_sequence == 100.0);
        CHECK(s.temporal_match == 100.0);
        CHECK(s.temporal_sequence == 100.0);
        CHECK(s.overall == 100.0);
    }
}

TEST_CASE("score_sample: swapped subject order changes nothing") {
    std::mt19937 rng(22);
    for (int iter = 0; iter < 20; ++iter) {
        auto rec = oracles::random_record(rng, "v");
        if (rec.subjects.size() < 2) continue;
        StructuredMotion ref = reference_structure(rec);

        StructuredMotion swapped = ref;
        std::swap(swapped.subjects[0], swapped.subjects[1]);
        for (auto& t : swapped.temporal_sequence) {
            if (t.subject == 0)
                t.subject = 1;
            else if (t.subject == 1)
                t.subject = 0;
        }
        SampleScore a = score_sample(ref, ref, kLex, kDefault);
        SampleScore b = score_sample(swapped, ref, kLex, kDefault);
        CHECK(a.camera_pct == doctest::Approx(b.camera_pct).epsilon(1e-9));
        CHECK(a.subject_match == doctest::Approx(b.subject_match).epsilon(1e-9));
        CHECK(a.temporal_match == doctest::Approx(b.temporal_match).epsilon(1e-9));
        CHECK(a.overall == doctest::Approx(b.overall).epsilon(1e-9));
    }
}

TEST_CASE("score_sample: deleting one of two subjects caps subject_match at 50") {
    StructuredMotion ref;
    ref.subjects = {{"man", {}, {"waves", "sits down"}}, {"woman", {}, {"runs"}}};
    ref.temporal_sequence = {{0, "waves"}, {1, "runs"}, {0, "sits down"}};

    StructuredMotion pred = ref;
    pred.subjects.pop_back();
    pred.temporal_sequence = {{0, "waves"}, {0, "sits down"}};

    SampleScore s = score_sample(pred, ref, kLex, kDefault);
    CHECK(s.subject_match <= 50.0 + 1e-9);
    CHECK(s.subject_match > 0.0);
    CHECK(s.overall < 100.0);
}

TEST_CASE("score_sample components stay in range on fuzzed pairs") {
    std::mt19937 rng(23);
    for (int iter = 0; iter < 100; ++iter) {
        StructuredMotion a = reference_structure(oracles::random_record(rng, "a"));
        StructuredMotion b = reference_structure(oracles::random_record(rng, "b"));
        SampleScore s = score_sample(a, b, kLex, kDefault);
        for (double v : {s.camera_pct, s.subject_match, s.subject_sequence, s.temporal_match,
                         s.temporal_sequence, s.overall}) {
            CHECK(v >= 0.0);
            CHECK(v <= 100.0);
        }
    }
}

TEST_CASE("aggregate averages and validates") {
    SampleScore a;
    a.overall = 40.0;
    a.camera_pct = 10.0;
    SampleScore b;
    b.overall = 60.0;
    b.camera_pct = 30.0;
    ModelReport r = aggregate({{"v1", a}, {"v2", b}});
    CHECK(r.means.overall == 50.0);
    CHECK(r.means.camera_pct == 20.0);
    CHECK(r.sample_count == 2);

    ModelReport single = aggregate({{"v1", a}});
    CHECK(single.means.overall == a.overall);

    ModelReport permuted = aggregate({{"v2", b}, {"v1", a}});
    CHECK(permuted.means.overall == r.means.overall);

    CHECK_THROWS_AS(aggregate({}), ValidationError);
}

TEST_CASE("config validation rejects bad weights") {
    ScoringConfig c;
    c.w_p = 0.5;
    c.w_r = 0.5;
    c.w_o = 0.5;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    ScoringConfig d;
    d.beta = 0.0;
    CHECK_THROWS_AS(d.validate(), ValidationError);
    ScoringConfig ok;
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("config json round-trips") {
    ScoringConfig c;
    c.beta = 1.0;
    c.theta = 0.4;
    ScoringConfig back = ScoringConfig::from_json(c.to_json());
    CHECK(back.beta == 1.0);
    CHECK(back.theta == 0.4);
    CHECK(back.w_p == c.w_p);
    CHECK(back.component_weights.camera == c.component_weights.camera);
}

TEST_CASE("scorer invariants hold under the embedding provider too") {
    std::string path = "scorer_vectors.txt";
    {
        std::ofstream out(path);
        out << "wave 0.9 0.1\nsit 0.1 0.9\nstand -0.5 0.5\nrun 0.3 -0.8\n";
    }
    EmbeddingProvider emb("test", path);
    std::mt19937 rng(31);
    for (int iter = 0; iter < 20; ++iter) {
        auto rec = oracles::random_record(rng, "v");
        StructuredMotion ref = reference_structure(rec);
        SampleScore s = score_sample(ref, ref, emb, kDefault);
        CHECK(s.overall == 100.0);  // self-similarity short-circuit keeps identity exact
        StructuredMotion other = reference_structure(oracles::random_record(rng, "w"));
        SampleScore cross = score_sample(other, ref, emb, kDefault);
        CHECK(cross.overall >= 0.0);
        CHECK(cross.overall <= 100.0);
    }
}
