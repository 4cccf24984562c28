// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <string>

#include "tmfusion/description.hpp"
#include "tmfusion/fusion.hpp"
#include "tmfusion/metrics.hpp"
#include "tmfusion/model_io.hpp"
#include "tmfusion/sampling.hpp"
#include "tmfusion/synthgen.hpp"

using namespace tmfusion;
using Bits = std::vector<std::uint8_t>;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

HyperParams params(int m, int t, double s, int epochs, int n = 100) {
    HyperParams p;
    p.clauses_per_class = m;
    p.threshold = t;
    p.specificity = s;
    p.epochs = epochs;
    p.ta_states = n;
    return p;
}

const std::vector<Label> kPersons{0, 1, 2, 3};

// ---------------------------------------------------------------------------

Outcome xor_learnability() {
    BinaryDataset d(std::vector<std::string>{"x1", "x2"});
    for (int c = 0; c < 25; ++c)
        for (std::uint8_t a = 0; a < 2; ++a)
            for (std::uint8_t b = 0; b < 2; ++b) d.add_row(Bits{a, b}, a ^ b);
    const auto p = params(4, 2, 3.9, 200, 10);
    int solved = 0;
    double slowest = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto m = train_model(p, d, {0, 1}, Stream(seed));
        slowest = std::max(slowest, seconds_since(t0));
        bool ok = true;
        for (std::size_t i = 0; i < d.size(); ++i) ok = ok && classify(m, d.row(i)) == d.label(i);
        solved += ok;
    }
    return {solved >= 9 && slowest < 1.0, fmt("%d/10 seeds reach accuracy 1.0, slowest fit %.3fs", solved, slowest)};
}

Outcome feedback_invariants() {
    Stream s(2);
    // Random Type I/II applications.
    bool in_range = true;
    for (int n : {1, 2, 5, 100}) {
        ClauseState c(s.bernoulli(0.5) ? Polarity::positive : Polarity::negative, 4, n);
        for (std::size_t k = 0; k < c.num_literals(); ++k) c.set_state(k, 1 + static_cast<int>(s.below(2 * n)));
        for (int i = 0; i < 2500; ++i) {
            Bits x(4);
            for (auto& b : x) b = s.next() & 1;
            if (s.bernoulli(0.5)) type_i_feedback(c, x, 1.0 + 9.0 * s.uniform(), s.bernoulli(0.5), s);
            else type_ii_feedback(c, x);
            for (int st : c.states()) in_range = in_range && st >= 1 && st <= 2 * n;
            in_range = in_range && c.weight() >= 1;
        }
    }

    // Zero voting error leaves the model untouched for either target class.
    auto p = params(2, 1, 3.9, 1, 10);
    TMClassifier m(p, 1, {0, 1});
    auto include_only = [](ClauseState& c, int literal) {
        for (std::size_t k = 0; k < c.num_literals(); ++k) c.set_state(k, c.ta_states());
        c.set_state(static_cast<std::size_t>(literal), c.ta_states() + 1);
    };
    include_only(m.pool(1)[0], 0);  // + x1
    include_only(m.pool(1)[1], 1);  // - NOT x1
    include_only(m.pool(0)[0], 1);  // + NOT x1
    include_only(m.pool(0)[1], 0);  // - x1
    const auto before = m;
    Stream t(7);
    for (int i = 0; i < 500; ++i) {
        train_example(m, Bits{1}, 1, t);
        train_example(m, Bits{0}, 0, t);
    }
    const bool identity = m == before;

    // Type II never touches an include-state automaton: every state
    // assignment of a 2-feature clause (N = 2) under every input.
    bool includes_kept = true;
    const int n = 2;
    for (auto pol : {Polarity::positive, Polarity::negative}) {
        for (int code = 0; code < 256; ++code) {
            for (std::uint8_t x1 = 0; x1 < 2; ++x1) {
                for (std::uint8_t x2 = 0; x2 < 2; ++x2) {
                    ClauseState c(pol, 2, n);
                    for (std::size_t k = 0; k < 4; ++k) c.set_state(k, 1 + ((code >> (2 * k)) & 3));
                    const auto old = c;
                    type_ii_feedback(c, Bits{x1, x2});
                    for (std::size_t k = 0; k < 4; ++k)
                        if (old.includes(k)) includes_kept = includes_kept && c.state(k) == old.state(k);
                }
            }
        }
    }
    return {in_range && identity && includes_kept,
            fmt("states in range: %s; zero-error identity: %s; Type II spares includes: %s", in_range ? "yes" : "no",
                identity ? "yes" : "no", includes_kept ? "yes" : "no")};
}

Outcome consistency() {
    Stream gs(12345);
    const auto d = synth::hat_dataset(synth::gen_hat_data(10000, 4, 3, gs), 4, 3);
    const auto p = params(8, 3, 3.0, 20);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<GlobalDescription> gs_;
    for (std::uint64_t s = 0; s < 10; ++s)
        gs_.push_back(global_description(train_model(p, d, kPersons, Stream(1000 + s))));
    double sum = 0.0;
    int pairs = 0;
    for (std::size_t a = 0; a < gs_.size(); ++a)
        for (std::size_t b = a + 1; b < gs_.size(); ++b, ++pairs) sum += description_overlap(gs_[a], gs_[b]).overall;
    const double mean = sum / pairs;
    const double elapsed = seconds_since(t0);
    return {mean >= 0.85 && elapsed < 120.0,
            fmt("mean pairwise overlap %.4f over 10 seeds (needs 0.85), %.1fs", mean, elapsed)};
}

Outcome nontargeted_destabilization() {
    const auto p = params(8, 3, 3.0, 20);
    const std::regex invalid("T[0-9]_(A,L|D,R)");
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Stream root(seed);
        auto gen = root.split("data");
        const auto clean = synth::gen_hat_data(10000, 4, 3, gen);
        auto inj = root.split("inject");
        const auto noisy = synth::inject_nontargeted(clean, 4, 0.15, inj);
        // Both models share a training stream so only the data differs.
        const auto g0 = global_description(train_model(p, synth::hat_dataset(clean, 4, 3), kPersons, root.split("train")));
        const auto g1 =
            global_description(train_model(p, synth::hat_dataset(noisy.data, 4, 3), kPersons, root.split("train")));
        const auto r = detect_change(g0, g1, 0.5);
        bool mentions = false;
        for (const auto& rec : r.new_literal_patterns)
            for (int l : rec.literals) mentions = mentions || std::regex_search(g1.literal_name(l), invalid);
        hits += r.changed && mentions;
    }
    return {hits >= 8, fmt("%d/10 seeds flag change with an invalid-action literal (needs 8)", hits)};
}

// Heaviest Yes-class positive clause holding a positive Pass[A,B] or Pass[B,A] literal.
double targeted_weight(const GlobalDescription& g, int ab, int ba) {
    int best = 0;
    for (const auto* r : g.group(1, Polarity::positive))
        for (int l : r->literals)
            if (l == ab || l == ba) best = std::max(best, r->weight);
    return best;
}

Outcome targeted_destabilization() {
    const auto kind = synth::QueryKind::neighbour;
    const int ab = synth::query_feature_index(kind, 4, "Pass[A,B]");
    const int ba = synth::query_feature_index(kind, 4, "Pass[B,A]");
    const auto p = params(20, 15, 3.9, 20);
    double clean = 0.0, contradicted = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Stream root(seed);
        for (double rate : {0.0, 0.2}) {
            auto gen = root.split(rate == 0.0 ? "rate0" : "rate0.2");
            const auto d = synth::query_dataset(synth::gen_query_tasks(kind, 4, 5000, rate, gen), 4);
            const auto w = targeted_weight(global_description(train_model(p, d, {0, 1}, root.split("train"))), ab, ba);
            (rate == 0.0 ? clean : contradicted) += w / 10.0;
        }
    }
    const double ratio = contradicted / clean;
    return {ratio <= 0.6, fmt("mean matched weight %.1f -> %.1f, ratio %.3f (needs <= 0.6)", clean, contradicted, ratio)};
}

Outcome cut_localization() {
    const auto p = params(8, 3, 3.0, 20);
    const std::size_t rows = 2000;
    int hits = 0;
    double null_delta = 0.0;
    int null_runs = 0;
    for (std::uint64_t trial = 0; trial < 20; ++trial) {
        const Stream root(trial);
        auto s_base = root.split("base"), s_new = root.split("dm");
        const auto d0 = synth::hat_dataset(synth::gen_hat_data(rows, 4, 3, s_base), 4, 3);
        const auto dm = synth::hat_dataset(synth::gen_hat_data(rows, 4, 3, s_new), 4, 3);
        const auto g = global_description(train_model(p, d0, kPersons, root.split("train")));
        const Stream loc = root.split("loc");
        const auto cuts = make_cuts(dm, 10, 0.5, loc.split("cuts"));

        if (trial < 10) {
            const auto r = localize_inconsistencies(g, dm, cuts, 5, p, loc);
            double m = 0.0;
            for (const auto& c : r.removal_candidates) m += c.delta;
            null_delta += m / static_cast<double>(r.removal_candidates.size());
            ++null_runs;
        }

        // Relabel 30% of the two planted cuts' union, preferring rows that
        // few clean cuts share.
        Stream plant = root.split("plant");
        const int a = static_cast<int>(plant.below(10));
        int b = static_cast<int>(plant.below(9));
        if (b >= a) ++b;
        std::map<RowId, int> clean_cover;
        for (const auto& c : cuts)
            for (RowId r : c.rows) clean_cover[r] += c.id != a && c.id != b;
        std::set<RowId> joined(cuts[a].rows.begin(), cuts[a].rows.end());
        joined.insert(cuts[b].rows.begin(), cuts[b].rows.end());
        std::vector<RowId> pool(joined.begin(), joined.end());
        plant.shuffle(std::span<RowId>(pool));
        std::stable_sort(pool.begin(), pool.end(),
                         [&](RowId x, RowId y) { return clean_cover[x] < clean_cover[y]; });
        std::map<RowId, std::size_t> pos;
        for (std::size_t i = 0; i < dm.size(); ++i) pos[dm.row_id(i)] = i;
        auto noisy = dm;
        const auto corrupt = static_cast<std::size_t>(0.3 * static_cast<double>(pool.size()));
        for (std::size_t i = 0; i < corrupt; ++i) {
            const auto r = pos.at(pool[i]);
            noisy.set_label(r, (noisy.label(r) + 1 + static_cast<Label>(plant.below(3))) % 4);
        }
        const auto r = localize_inconsistencies(g, noisy, cuts, 5, p, loc);
        bool hit = false;
        for (const auto& c : r.removal_candidates) hit = hit || (c.delta > 0.0 && (c.cut_id == a || c.cut_id == b));
        hits += hit;
    }
    null_delta /= null_runs;
    return {hits >= 16 && std::abs(null_delta) < 0.05,
            fmt("planted cut found in %d/20 trials (needs 16); clean-data mean delta %+.4f", hits, null_delta)};
}

Outcome asd_discrimination() {
    const auto p = params(20, 15, 3.9, 20);
    const std::vector<Label> seen{0, 1}, unseen{2};
    double seen_asd = 0.0, unseen_asd = 0.0, right = 0.0, wrong = 0.0;
    std::size_t n_right = 0, n_wrong = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Stream root(seed);
        auto s_train = root.split("train"), s_test = root.split("test");
        const synth::TopicWorld world;
        const auto train = synth::gen_topic_data(world, 500, s_train);
        const auto test = synth::gen_topic_data(world, 500, s_test);
        const auto m = train_model(p, train.filter_labels(seen), seen, root.split("fit"));
        const auto held = test.filter_labels(seen);
        seen_asd += mean_asd(m, held);
        unseen_asd += mean_asd(m, test.filter_labels(unseen));
        for (std::size_t i = 0; i < held.size(); ++i) {
            const auto t = decision_trace(m, held.row(i));
            if (t.predicted == held.label(i)) {
                right += static_cast<double>(*t.asd);
                ++n_right;
            } else {
                wrong += static_cast<double>(*t.asd);
                ++n_wrong;
            }
        }
    }
    const double ratio = seen_asd / unseen_asd;
    const double mean_right = right / static_cast<double>(n_right);
    const double mean_wrong = n_wrong ? wrong / static_cast<double>(n_wrong) : 0.0;
    return {ratio >= 1.5 && n_wrong > 0 && mean_wrong < mean_right,
            fmt("seen/unseen ASD ratio %.2f (needs 1.5); correct rows %.1f vs misclassified %.1f (%zu rows)", ratio,
                mean_right, mean_wrong, n_wrong)};
}

Outcome informed_oversampling() {
    const auto p = params(20, 15, 3.9, 20);
    const synth::ImbalancedWorld world;
    const OversampleKind kinds[] = {OversampleKind::none, OversampleKind::random_smote, OversampleKind::max_asd};
    double f[3] = {}, rec[3] = {};
    const int runs = 50;
    for (int run = 0; run < runs; ++run) {
        const Stream root(static_cast<std::uint64_t>(run));
        auto s_train = root.split("train"), s_test = root.split("test");
        const auto train = synth::gen_imbalanced(world, s_train).data;
        const auto test = synth::gen_imbalanced(world, s_test).data;
        for (int k = 0; k < 3; ++k) {
            const auto res = informed_oversample(train, p, {kinds[k], 1.0, 5}, 10, 2, root.split("oversample"));
            const auto m = train_model(p, res.data, {0, 1}, root.split("fit"));
            std::vector<Label> pred;
            for (std::size_t i = 0; i < test.size(); ++i) pred.push_back(classify(m, test.row(i)));
            const auto cm = confusion_matrix(test.labels(), pred);
            // Positive class: the minority.
            f[k] += f1(cm, 1) / runs;
            rec[k] += recall(cm, 1) / runs;
        }
    }
    return {f[2] > f[1] && rec[2] > rec[0] && rec[1] > rec[0],
            fmt("minority F1 max-asd %.4f vs random-smote %.4f; recall max-asd %.4f, random-smote %.4f, none %.4f", f[2],
                f[1], rec[2], rec[1], rec[0])};
}

Outcome serialization() {
    bool same_outputs = true, byte_identical = true;
    Stream gen(3);
    const auto topic = synth::gen_topic_data(synth::TopicWorld{}, 200, gen);
    const auto imbalanced = synth::gen_imbalanced(synth::ImbalancedWorld{}, gen).data;
    for (const auto* d : {&topic, &imbalanced}) {
        const auto p = params(10, 8, 3.9, 5);
        const auto m = train_model(p, *d, d->classes(), Stream(21));
        const auto text = serialize_model(m);
        const auto back = deserialize_model(text);
        Stream probe(99);
        for (int i = 0; i < 1000; ++i) {
            Bits x(d->num_features());
            for (auto& b : x) b = probe.next() & 1;
            const auto a = decision_trace(m, x), c = decision_trace(back, x);
            same_outputs = same_outputs && classify(m, x) == classify(back, x) && a.clause_sum == c.clause_sum &&
                           a.predicted == c.predicted;
        }
        byte_identical = byte_identical && serialize_model(train_model(p, *d, d->classes(), Stream(21))) == text &&
                         serialize_model(back) == text;
    }
    return {same_outputs && byte_identical,
            fmt("round-trip outputs identical on 1000 inputs: %s; same seed byte-identical: %s",
                same_outputs ? "yes" : "no", byte_identical ? "yes" : "no")};
}

Outcome smote_properties() {
    int datasets = 0, synthetic = 0;
    bool bits_ok = true, counts_ok = true;
    Stream gen(17);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t width = 3 + gen.below(10);
        const std::size_t minority = 6 + gen.below(30), majority = minority + 1 + gen.below(100);
        const double ratio = std::array{0.5, 0.75, 0.9, 1.0}[trial % 4];
        const int k = 1 + trial % 5;
        BinaryDataset d(width);
        for (std::size_t i = 0; i < minority + majority; ++i) {
            Bits x(width);
            for (auto& b : x) b = gen.bernoulli(i < minority ? 0.7 : 0.3);
            d.add_row(x, i < minority ? 1 : 0);
        }
        Stream s(static_cast<std::uint64_t>(trial));
        const auto out = smote_binary(d, ratio, k, s);
        ++datasets;

        const auto target = std::max<std::size_t>(minority, static_cast<std::size_t>(std::ceil(ratio * majority)));
        counts_ok = counts_ok && out.count(1) == target && out.count(0) == majority;

        // Brute-force neighbour sets: k nearest minority rows by Hamming
        // distance, ties by row id.
        std::vector<std::size_t> mins;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d.label(i) == 1) mins.push_back(i);
        auto dist = [&](std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
            std::size_t h = 0;
            for (std::size_t j = 0; j < a.size(); ++j) h += a[j] != b[j];
            return h;
        };
        std::map<std::size_t, std::vector<std::size_t>> neighbours;
        for (auto a : mins) {
            std::vector<std::size_t> others;
            for (auto b : mins)
                if (b != a) others.push_back(b);
            std::sort(others.begin(), others.end(), [&](auto x, auto y) {
                const auto dx = dist(d.row(a), d.row(x)), dy = dist(d.row(a), d.row(y));
                return dx != dy ? dx < dy : d.row_id(x) < d.row_id(y);
            });
            others.resize(static_cast<std::size_t>(k));
            neighbours[a] = others;
        }
        for (std::size_t i = d.size(); i < out.size(); ++i, ++synthetic) {
            bool explained = false;
            for (const auto& [a, nb] : neighbours) {
                for (auto b : nb) {
                    bool ok = true;
                    for (std::size_t j = 0; j < width && ok; ++j)
                        ok = out.row(i)[j] == d.row(a)[j] || out.row(i)[j] == d.row(b)[j];
                    explained = explained || ok;
                }
                if (explained) break;
            }
            bits_ok = bits_ok && explained && out.label(i) == 1;
        }
    }
    return {bits_ok && counts_ok, fmt("%d datasets, %d synthetic rows; bits from seed/neighbour: %s; exact counts: %s",
                                      datasets, synthetic, bits_ok ? "yes" : "no", counts_ok ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"XOR learnability", xor_learnability},
        {"feedback invariants", feedback_invariants},
        {"description consistency", consistency},
        {"non-targeted destabilization", nontargeted_destabilization},
        {"targeted destabilization", targeted_destabilization},
        {"cut localization", cut_localization},
        {"ASD discrimination", asd_discrimination},
        {"informed oversampling", informed_oversampling},
        {"serialization round trip", serialization},
        {"SMOTE properties", smote_properties},
    };
    int failed = 0, i = 0;
    for (const auto& [name, check] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto o = check();
        failed += !o.pass;
        std::printf("criterion %2d %-30s %s  %s [%.1fs]\n", ++i, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", i - failed, i);
    return failed ? 1 : 0;
}
