#include "tmfusion/fusion.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tmfusion/errors.hpp"

namespace tmfusion {

double clause_jaccard(std::span<const int> a, std::span<const int> b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t i = 0, j = 0, common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - common;
    return static_cast<double>(common) / static_cast<double>(uni);
}

namespace {

void check_comparable(const GlobalDescription& g1, const GlobalDescription& g2) {
    if (g1.num_features != g2.num_features)
        throw ComparisonError("descriptions cover " + std::to_string(g1.num_features) + " and " +
                              std::to_string(g2.num_features) + " features");
    auto a = g1.classes, b = g2.classes;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw ComparisonError("descriptions cover different class sets");
}

std::vector<const ClauseRecord*> active(const GlobalDescription& g, Label cls, Polarity pol) {
    return g.group(cls, pol);
}

struct BestMatch {
    const ClauseRecord* record = nullptr;
    double jaccard = 0.0;
};

// Highest Jaccard; ties go to the heavier, then earlier, record.
BestMatch best_match(const ClauseRecord& a, const std::vector<const ClauseRecord*>& candidates) {
    BestMatch best;
    for (const auto* b : candidates) {
        const double j = clause_jaccard(a.literals, b->literals);
        if (!best.record || j > best.jaccard ||
            (j == best.jaccard && b->weight > best.record->weight)) {
            best = {b, j};
        }
    }
    return best;
}

struct Directed {
    std::map<Label, double> score;
    std::map<Label, double> weight;
    std::vector<MatchedPair> pairs;
};

Directed directed_overlap(const GlobalDescription& from, const GlobalDescription& to) {
    Directed d;
    for (auto cls : from.classes) {
        double total = 0.0, acc = 0.0;
        bool target_has_any = false;
        for (auto pol : {Polarity::positive, Polarity::negative}) {
            for (const auto* a : active(from, cls, pol)) total += a->weight;
            if (!active(to, cls, pol).empty()) target_has_any = true;
        }
        for (auto pol : {Polarity::positive, Polarity::negative}) {
            const auto candidates = active(to, cls, pol);
            for (const auto* a : active(from, cls, pol)) {
                const auto best = best_match(*a, candidates);
                acc += a->weight * best.jaccard;
                MatchedPair mp;
                mp.a = *a;
                if (best.record) mp.b = *best.record;
                else mp.b = ClauseRecord{cls, pol, {}, 0};
                mp.jaccard = best.jaccard;
                mp.weight_factor = a->weight / total;
                d.pairs.push_back(std::move(mp));
            }
        }
        d.weight[cls] = total;
        d.score[cls] = total > 0.0 ? acc / total : (target_has_any ? 0.0 : 1.0);
    }
    return d;
}

}  // namespace

SimilarityReport description_overlap(const GlobalDescription& g1, const GlobalDescription& g2) {
    check_comparable(g1, g2);
    const auto fwd = directed_overlap(g1, g2);
    const auto bwd = directed_overlap(g2, g1);
    SimilarityReport r;
    double num = 0.0, den = 0.0;
    for (auto cls : g1.classes) {
        const double s = 0.5 * (fwd.score.at(cls) + bwd.score.at(cls));
        const double w = fwd.weight.at(cls) + bwd.weight.at(cls);
        r.per_class[cls] = s;
        num += w * s;
        den += w;
    }
    r.overall = den > 0.0 ? num / den : 1.0;
    r.matched_pairs = fwd.pairs;
    return r;
}

ChangeReport detect_change(const GlobalDescription& baseline, const GlobalDescription& updated,
                           double theta, const ChangeOptions& options) {
    if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("theta must lie in (0, 1)");
    ChangeReport r;
    r.overlap = description_overlap(baseline, updated).overall;
    for (auto cls : baseline.classes) {
        for (auto pol : {Polarity::positive, Polarity::negative}) {
            const auto base = active(baseline, cls, pol);
            const auto next = active(updated, cls, pol);
            for (const auto* b : next) {
                if (best_match(*b, base).jaccard < options.match_threshold)
                    r.new_literal_patterns.push_back(*b);
            }
            for (const auto* a : base) {
                const auto best = best_match(*a, next);
                if (best.jaccard < options.match_threshold) {
                    r.vanished_patterns.push_back(*a);
                    continue;
                }
                const double hi = std::max(a->weight, best.record->weight);
                const double lo = std::min(a->weight, best.record->weight);
                if (hi >= options.weight_ratio * lo)
                    r.weight_shifts.push_back({*a, *best.record, best.jaccard, 0.0});
            }
        }
    }
    r.changed = r.overlap < theta || !r.new_literal_patterns.empty();
    return r;
}

std::vector<Cut> make_cuts(const BinaryDataset& d, int n, double cut_fraction, const Stream& stream) {
    if (n < 2) throw ParameterError("need at least 2 cuts");
    if (!(cut_fraction > 0.0 && cut_fraction < 1.0))
        throw ParameterError("cut fraction must lie in (0, 1)");
    const auto size = static_cast<std::size_t>(cut_fraction * static_cast<double>(d.size()));
    if (size == 0 || size > d.size())
        throw ParameterError("cut size " + std::to_string(size) + " is invalid for " +
                             std::to_string(d.size()) + " rows");
    std::vector<Cut> cuts;
    for (int c = 0; c < n; ++c) {
        Stream s = stream.split(static_cast<std::uint64_t>(c));
        std::vector<RowId> ids = d.row_ids();
        for (std::size_t i = 0; i < size; ++i) {
            const auto j = i + static_cast<std::size_t>(s.below(ids.size() - i));
            std::swap(ids[i], ids[j]);
        }
        ids.resize(size);
        std::sort(ids.begin(), ids.end());
        cuts.push_back({c, std::move(ids), 0.0});
    }
    return cuts;
}

TMClassifier train_model(const HyperParams& params, const BinaryDataset& data,
                         std::vector<Label> classes, Stream stream) {
    auto model = new_classifier(params, data.num_features(), std::move(classes), stream);
    model.set_feature_names(data.feature_names());
    fit(model, data, stream);
    return model;
}

namespace {

BinaryDataset rows_with_ids(const BinaryDataset& d, std::span<const RowId> ids) {
    std::unordered_set<RowId> want(ids.begin(), ids.end());
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (want.contains(d.row_id(i))) pos.push_back(i);
    return d.subset(pos);
}

double score_against(const GlobalDescription& baseline, const HyperParams& params,
                     const BinaryDataset& data, Stream stream) {
    auto model = train_model(params, data, baseline.classes, std::move(stream));
    return description_overlap(global_description(model), baseline).overall;
}

}  // namespace

CutReport localize_inconsistencies(const GlobalDescription& baseline, const BinaryDataset& d_m,
                                   const HyperParams& params, const LocalizeOptions& options,
                                   const Stream& stream) {
    auto cuts = make_cuts(d_m, options.num_cuts, options.cut_fraction, stream.split("cuts"));
    return localize_inconsistencies(baseline, d_m, std::move(cuts), options.num_remove, params,
                                    stream);
}

CutReport localize_inconsistencies(const GlobalDescription& baseline, const BinaryDataset& d_m,
                                   std::vector<Cut> cuts, int num_remove,
                                   const HyperParams& params, const Stream& stream) {
    params.validate();
    if (num_remove < 1 || num_remove > static_cast<int>(cuts.size()))
        throw ParameterError("num_remove must lie in [1, number of cuts]");
    if (d_m.num_features() != baseline.num_features)
        throw ComparisonError("dataset width does not match the baseline description");

    CutReport report;
    report.baseline_score = score_against(baseline, params, d_m, stream.split("full"));
    for (auto& cut : cuts) {
        cut.score = score_against(baseline, params, rows_with_ids(d_m, cut.rows),
                                  stream.split("cut/" + std::to_string(cut.id)));
    }

    std::vector<std::size_t> order(cuts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return cuts[a].score < cuts[b].score; });
    for (int r = 0; r < num_remove; ++r) {
        const auto& cut = cuts[order[r]];
        RemovalCandidate cand;
        cand.cut_id = cut.id;
        cand.score = score_against(baseline, params, d_m.without_ids(cut.rows),
                                   stream.split("remove/" + std::to_string(cut.id)));
        cand.delta = cand.score - report.baseline_score;
        cand.deviant = cand.delta > 0.0;
        report.removal_candidates.push_back(cand);
    }
    std::stable_sort(report.removal_candidates.begin(), report.removal_candidates.end(),
                     [](const auto& a, const auto& b) { return a.delta > b.delta; });
    report.cuts = std::move(cuts);
    return report;
}

double mean_asd(const TMClassifier& model, const BinaryDataset& d) {
    if (model.num_classes() != 2) throw UnsupportedError("ASD is defined for two-class models only");
    if (d.empty()) throw ParameterError("cannot average ASD over an empty dataset");
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) total += static_cast<double>(*decision_trace(model, d.row(i)).asd);
    return total / static_cast<double>(d.size());
}

std::vector<CompatibilityGroup> compatibility_report(const TMClassifier& model,
                                                     const BinaryDataset& d) {
    if (model.num_classes() != 2) throw UnsupportedError("compatibility report needs a two-class model");
    std::map<std::pair<Label, Label>, CompatibilityGroup> groups;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto t = decision_trace(model, d.row(i));
        auto& g = groups[{d.label(i), t.predicted}];
        if (g.count == 0) {
            g.truth = d.label(i);
            g.predicted = t.predicted;
            g.mean_clause_cnt.assign(2, 0.0);
            g.mean_positive_cnt.assign(2, 0.0);
            g.mean_clause_sum.assign(2, 0.0);
        }
        ++g.count;
        for (std::size_t c = 0; c < 2; ++c) {
            g.mean_clause_cnt[c] += t.clause_cnt[c];
            g.mean_positive_cnt[c] += t.positive_cnt[c];
            g.mean_clause_sum[c] += static_cast<double>(t.clause_sum[c]);
        }
        g.mean_asd += static_cast<double>(*t.asd);
    }
    std::vector<CompatibilityGroup> out;
    for (auto& [key, g] : groups) {
        const double n = static_cast<double>(g.count);
        for (std::size_t c = 0; c < 2; ++c) {
            g.mean_clause_cnt[c] /= n;
            g.mean_positive_cnt[c] /= n;
            g.mean_clause_sum[c] /= n;
        }
        g.mean_asd /= n;
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

nlohmann::json record_json(const ClauseRecord& r, const GlobalDescription& g) {
    return {{"class", r.cls},
            {"polarity", r.polarity == Polarity::positive ? "+" : "-"},
            {"literals", r.literals},
            {"weight", r.weight},
            {"text", g.render(r)}};
}

}  // namespace

nlohmann::json to_json(const SimilarityReport& r, const GlobalDescription& g1) {
    nlohmann::json per_class = nlohmann::json::array();
    for (const auto& [cls, s] : r.per_class) per_class.push_back({{"class", cls}, {"score", s}});
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : r.matched_pairs) {
        pairs.push_back({{"a", record_json(p.a, g1)},
                         {"b", record_json(p.b, g1)},
                         {"jaccard", p.jaccard},
                         {"weight_factor", p.weight_factor}});
    }
    return {{"overall", r.overall}, {"per_class", per_class}, {"matched_pairs", pairs}};
}

nlohmann::json to_json(const ChangeReport& r, const GlobalDescription& baseline,
                       const GlobalDescription& updated) {
    nlohmann::json fresh = nlohmann::json::array(), gone = nlohmann::json::array(),
                   shifts = nlohmann::json::array();
    for (const auto& rec : r.new_literal_patterns) fresh.push_back(record_json(rec, updated));
    for (const auto& rec : r.vanished_patterns) gone.push_back(record_json(rec, baseline));
    for (const auto& p : r.weight_shifts) {
        shifts.push_back({{"baseline", record_json(p.a, baseline)},
                          {"updated", record_json(p.b, updated)},
                          {"jaccard", p.jaccard}});
    }
    return {{"changed", r.changed},
            {"overlap", r.overlap},
            {"new_literal_patterns", fresh},
            {"vanished_patterns", gone},
            {"weight_shifts", shifts}};
}

nlohmann::json to_json(const CutReport& r) {
    nlohmann::json cuts = nlohmann::json::array(), cands = nlohmann::json::array();
    for (const auto& c : r.cuts) cuts.push_back({{"id", c.id}, {"score", c.score}, {"rows", c.rows}});
    for (const auto& c : r.removal_candidates) {
        cands.push_back({{"cut_id", c.cut_id},
                         {"score", c.score},
                         {"delta", c.delta},
                         {"deviant", c.deviant}});
    }
    return {{"baseline_score", r.baseline_score}, {"cuts", cuts}, {"removal_candidates", cands}};
}

nlohmann::json to_json(const std::vector<CompatibilityGroup>& groups) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& g : groups) {
        out.push_back({{"truth", g.truth},
                       {"predicted", g.predicted},
                       {"count", g.count},
                       {"clause_cnt", g.mean_clause_cnt},
                       {"positive_cnt", g.mean_positive_cnt},
                       {"clause_sum", g.mean_clause_sum},
                       {"asd", g.mean_asd}});
    }
    return out;
}

std::string render_table(const CutReport& r) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4);
    out << "baseline score " << r.baseline_score << "\n\ncut  rows   score\n";
    for (const auto& c : r.cuts)
        out << std::setw(3) << c.id << "  " << std::setw(5) << c.rows.size() << "  " << c.score << '\n';
    out << "\nremoved  score    delta    deviant\n";
    for (const auto& c : r.removal_candidates) {
        out << std::setw(7) << c.cut_id << "  " << c.score << "  " << std::showpos << c.delta
            << std::noshowpos << "  " << (c.deviant ? "yes" : "no") << '\n';
    }
    return out.str();
}

std::string render_table(const std::vector<CompatibilityGroup>& groups) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3);
    out << "truth pred  count  clause_cnt_0 positive_cnt_0 clause_cnt_1 positive_cnt_1        asd\n";
    for (const auto& g : groups) {
        out << std::setw(5) << g.truth << std::setw(5) << g.predicted << std::setw(7) << g.count
            << std::setw(14) << g.mean_clause_cnt[0] << std::setw(15) << g.mean_positive_cnt[0]
            << std::setw(13) << g.mean_clause_cnt[1] << std::setw(15) << g.mean_positive_cnt[1]
            << std::setw(11) << g.mean_asd << '\n';
    }
    return out.str();
}

}  // namespace tmfusion
