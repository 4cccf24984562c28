#include "doctest.h"

#include <numeric>
#include <set>

#include "helpers.hpp"
#include "tmfusion/errors.hpp"
#include "tmfusion/fusion.hpp"

using namespace tmfusion;

namespace {

ClauseRecord rec(Label cls, Polarity pol, std::vector<int> lits, int w = 1) {
    return ClauseRecord{cls, pol, std::move(lits), w};
}

GlobalDescription desc(std::size_t f, std::vector<ClauseRecord> records, std::vector<Label> classes = {0, 1}) {
    GlobalDescription g;
    g.num_features = f;
    g.classes = std::move(classes);
    for (std::size_t i = 0; i < f; ++i) g.feature_names.push_back("x" + std::to_string(i + 1));
    g.records = std::move(records);
    return g;
}

constexpr auto P = Polarity::positive;
constexpr auto N = Polarity::negative;

/// XOR model that fits its training data exactly.
TMClassifier perfect_xor() {
    auto p = testing::small_params();
    p.epochs = 200;
    const auto data = testing::xor_data(25);
    for (std::uint64_t seed = 1;; ++seed) {
        auto m = train_model(p, data, {0, 1}, Stream(seed));
        bool ok = true;
        for (std::size_t i = 0; i < data.size(); ++i) ok = ok && classify(m, data.row(i)) == data.label(i);
        if (ok) return m;
    }
}

}  // namespace

TEST_CASE("clause_jaccard") {
    // Literals 0..2 are x1..x3, 3..5 their negations.
    const std::vector<int> x12{0, 1}, x13{0, 2}, x1{0}, not_x1{3}, none{};
    CHECK(clause_jaccard(x12, x12) == 1.0);
    CHECK(clause_jaccard(x1, not_x1) == 0.0);
    CHECK(clause_jaccard(x12, x13) == doctest::Approx(1.0 / 3.0));
    CHECK(clause_jaccard(none, none) == 1.0);
    CHECK(clause_jaccard(none, x1) == 0.0);
    CHECK(clause_jaccard(x13, x12) == clause_jaccard(x12, x13));
}

TEST_CASE("overlap of identical and disjoint descriptions") {
    const auto g = desc(3, {rec(0, P, {0, 1}, 3), rec(0, N, {4}), rec(1, P, {2}, 2), rec(1, N, {})});
    CHECK(description_overlap(g, g).overall == 1.0);

    const auto a = desc(4, {rec(0, P, {0}), rec(1, P, {1})});
    const auto b = desc(4, {rec(0, P, {2}), rec(1, P, {3})});
    const auto r = description_overlap(a, b);
    CHECK(r.overall == 0.0);
    CHECK(r.per_class.at(0) == 0.0);
}

TEST_CASE("overlap weighs best matches by clause weight") {
    const auto g1 = desc(3, {rec(0, P, {0, 1}, 2), rec(0, P, {2}, 1), rec(1, P, {0}, 1)});
    const auto g2 = desc(3, {rec(0, P, {0, 1, 2}, 1), rec(0, P, {5}, 3), rec(1, P, {0}, 1)});
    // Class 0: forward 5/9 over weight 3, backward 1/6 over weight 4.
    // Class 1: identical, weight 2.
    const auto r = description_overlap(g1, g2);
    CHECK(r.per_class.at(0) == doctest::Approx(13.0 / 36.0));
    CHECK(r.per_class.at(1) == 1.0);
    CHECK(r.overall == doctest::Approx(163.0 / 324.0));
    CHECK(description_overlap(g2, g1).overall == doctest::Approx(r.overall));
}

TEST_CASE("matching never crosses polarity or class") {
    const auto a = desc(2, {rec(0, P, {0}), rec(1, P, {1})});
    const auto b = desc(2, {rec(0, N, {0}), rec(1, P, {1})});
    const auto r = description_overlap(a, b);
    CHECK(r.per_class.at(0) == 0.0);
    CHECK(r.per_class.at(1) == 1.0);
}

TEST_CASE("overlap rejects incomparable descriptions") {
    const auto a = desc(2, {rec(0, P, {0})});
    CHECK_THROWS_AS(description_overlap(a, desc(3, {rec(0, P, {0})})), ComparisonError);
    CHECK_THROWS_AS(description_overlap(a, desc(2, {rec(0, P, {0})}, {0, 2})), ComparisonError);
}

TEST_CASE("detect_change") {
    const auto g = desc(3, {rec(0, P, {0, 1}, 4), rec(1, P, {2}, 2)});

    SUBCASE("identical") {
        const auto r = detect_change(g, g, 0.9);
        CHECK_FALSE(r.changed);
        CHECK(r.overlap == 1.0);
        CHECK(r.new_literal_patterns.empty());
        CHECK(r.vanished_patterns.empty());
        CHECK(r.weight_shifts.empty());
    }
    SUBCASE("high overlap and no new pattern") {
        // One class keeps its clause exactly, the other gains a near copy.
        const auto g2 = desc(3, {rec(0, P, {0, 1}, 4), rec(1, P, {2}, 2), rec(1, P, {1, 2}, 1)});
        const auto r = detect_change(g, g2, 0.5);
        CHECK(r.overlap > 0.5);
        CHECK(r.new_literal_patterns.empty());
        CHECK_FALSE(r.changed);
    }
    SUBCASE("a new pattern flags change even with high overlap") {
        const auto g2 = desc(3, {rec(0, P, {0, 1}, 4), rec(1, P, {2}, 2), rec(1, P, {3, 4}, 1)});
        const auto r = detect_change(g, g2, 0.1);
        CHECK(r.changed);
        REQUIRE(r.new_literal_patterns.size() == 1);
        CHECK(r.new_literal_patterns[0].literals == std::vector<int>{3, 4});
    }
    SUBCASE("vanished patterns and weight shifts") {
        const auto g2 = desc(3, {rec(0, P, {0, 1}, 2), rec(1, P, {5}, 2)});
        const auto r = detect_change(g, g2, 0.5);
        REQUIRE(r.vanished_patterns.size() == 1);
        CHECK(r.vanished_patterns[0].literals == std::vector<int>{2});
        REQUIRE(r.weight_shifts.size() == 1);
        CHECK(r.weight_shifts[0].a.weight == 4);
        CHECK(r.weight_shifts[0].b.weight == 2);
    }
    CHECK_THROWS_AS(detect_change(g, g, 0.0), ParameterError);
    CHECK_THROWS_AS(detect_change(g, g, 1.0), ParameterError);
}

TEST_CASE("make_cuts") {
    BinaryDataset d(1);
    for (int i = 0; i < 1000; ++i) d.add_row(std::vector<std::uint8_t>{static_cast<std::uint8_t>(i & 1)}, i & 1);
    const Stream s(11);
    const auto cuts = make_cuts(d, 10, 0.5, s);
    REQUIRE(cuts.size() == 10);
    const auto ids = d.row_ids();
    const std::set<RowId> all(ids.begin(), ids.end());
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        CHECK(cuts[c].id == static_cast<int>(c));
        CHECK(cuts[c].rows.size() == 500);
        CHECK(std::is_sorted(cuts[c].rows.begin(), cuts[c].rows.end()));
        CHECK(std::set<RowId>(cuts[c].rows.begin(), cuts[c].rows.end()).size() == 500);
        for (auto id : cuts[c].rows) CHECK(all.count(id));
    }
    CHECK(cuts[0].rows != cuts[1].rows);

    const auto again = make_cuts(d, 10, 0.5, Stream(11));
    for (std::size_t c = 0; c < cuts.size(); ++c) CHECK(again[c].rows == cuts[c].rows);

    CHECK_THROWS_AS(make_cuts(d, 10, 1.5, s), ParameterError);
    CHECK_THROWS_AS(make_cuts(d, 10, 0.0, s), ParameterError);
    CHECK_THROWS_AS(make_cuts(d, 1, 0.5, s), ParameterError);
    CHECK_THROWS_AS(make_cuts(testing::xor_data(), 3, 0.1, s), ParameterError);
}

TEST_CASE("localize_inconsistencies report shape") {
    auto p = testing::small_params();
    p.epochs = 20;
    const auto data = testing::xor_data(40);
    const auto baseline = global_description(train_model(p, data, {0, 1}, Stream(1)));
    const auto r = localize_inconsistencies(baseline, data, p, {6, 3, 0.5}, Stream(2));
    CHECK(r.cuts.size() == 6);
    REQUIRE(r.removal_candidates.size() == 3);
    for (std::size_t i = 1; i < r.removal_candidates.size(); ++i)
        CHECK(r.removal_candidates[i - 1].delta >= r.removal_candidates[i].delta);
    // Candidates are the lowest-scoring cuts.
    std::vector<double> scores;
    for (const auto& c : r.cuts) scores.push_back(c.score);
    std::sort(scores.begin(), scores.end());
    for (const auto& cand : r.removal_candidates) {
        CHECK(r.cuts[static_cast<std::size_t>(cand.cut_id)].score <= scores[2]);
        CHECK(cand.delta == doctest::Approx(cand.score - r.baseline_score));
        CHECK(cand.deviant == (cand.delta > 0.0));
    }
    CHECK_THROWS_AS(localize_inconsistencies(baseline, data, p, {4, 5, 0.5}, Stream(2)), ParameterError);

    const auto again = localize_inconsistencies(baseline, data, p, {6, 3, 0.5}, Stream(2));
    CHECK(nlohmann::json(to_json(again)) == to_json(r));
}

TEST_CASE("mean_asd") {
    const auto m = perfect_xor();
    BinaryDataset one(std::vector<std::string>{"x1", "x2"});
    one.add_row(testing::Bits{1, 0}, 1);
    CHECK(mean_asd(m, one) == doctest::Approx(static_cast<double>(*decision_trace(m, one.row(0)).asd)));

    const auto data = testing::xor_data();
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) total += static_cast<double>(*decision_trace(m, data.row(i)).asd);
    CHECK(mean_asd(m, data) == doctest::Approx(total / 4.0));

    Stream s(3);
    const auto multi = new_classifier(testing::small_params(), 2, {0, 1, 2}, s);
    CHECK_THROWS_AS(mean_asd(multi, data), UnsupportedError);
}

TEST_CASE("compatibility_report") {
    const auto m = perfect_xor();
    auto data = testing::xor_data(3);
    SUBCASE("separable data gives only the diagonal groups") {
        const auto groups = compatibility_report(m, data);
        REQUIRE(groups.size() == 2);
        CHECK(groups[0].truth == 0);
        CHECK(groups[0].predicted == 0);
        CHECK(groups[1].truth == 1);
        CHECK(groups[1].predicted == 1);
        CHECK(groups[0].count + groups[1].count == data.size());
        CHECK(groups[0].mean_clause_cnt.size() == 2);
    }
    SUBCASE("unseen labels form their own groups") {
        data.add_row(testing::Bits{1, 1}, 2);
        data.add_row(testing::Bits{0, 1}, 2);
        const auto groups = compatibility_report(m, data);
        std::size_t total = 0, third = 0;
        for (const auto& g : groups) {
            total += g.count;
            if (g.truth == 2) third += g.count;
        }
        CHECK(total == data.size());
        CHECK(third == 2);
    }
}
