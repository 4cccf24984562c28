#pragma once

#include <map>
#include <span>
#include <vector>

#include "json.hpp"

#include "tmfusion/dataset.hpp"
#include "tmfusion/description.hpp"
#include "tmfusion/random.hpp"
#include "tmfusion/tsetlin.hpp"

namespace tmfusion {

/// |a ∩ b| / |a ∪ b| over sorted literal sets; two empty sets score 1.
double clause_jaccard(std::span<const int> a, std::span<const int> b);

struct MatchedPair {
    ClauseRecord a;
    ClauseRecord b;  // best match for `a`; empty literal set with weight 0 when none exists
    double jaccard = 0.0;
    double weight_factor = 0.0;  // a's share of its class weight
};

struct SimilarityReport {
    double overall = 0.0;
    std::map<Label, double> per_class;
    std::vector<MatchedPair> matched_pairs;  // direction g1 -> g2
};

/// Weight-normalized best-match Jaccard between two descriptions, matching
/// only within the same class and polarity and averaged over both directions.
/// Empty clauses take part like any other; two empty clauses match exactly.
SimilarityReport description_overlap(const GlobalDescription& g1, const GlobalDescription& g2);

struct ChangeOptions {
    double match_threshold = 0.5;  // best Jaccard below this marks a pattern new/vanished
    double weight_ratio = 2.0;     // matched pairs whose weights differ by this factor
};

struct ChangeReport {
    bool changed = false;
    double overlap = 0.0;
    std::vector<ClauseRecord> new_literal_patterns;  // in g_new, unmatched in baseline
    std::vector<ClauseRecord> vanished_patterns;     // in baseline, unmatched in g_new
    std::vector<MatchedPair> weight_shifts;          // a = baseline record, b = new record
};

ChangeReport detect_change(const GlobalDescription& baseline, const GlobalDescription& updated,
                           double theta, const ChangeOptions& options = {});

struct Cut {
    int id = 0;
    std::vector<RowId> rows;  // ascending
    double score = 0.0;       // overlap with the baseline once scored
};

/// n overlapping cuts, each floor(fraction * |d|) rows drawn without
/// replacement. Cut c uses substream split(c) of `stream`.
std::vector<Cut> make_cuts(const BinaryDataset& d, int n, double cut_fraction, const Stream& stream);

struct RemovalCandidate {
    int cut_id = 0;
    double score = 0.0;  // VR_j: overlap after training without the cut
    double delta = 0.0;  // score - baseline_score
    bool deviant = false;
};

struct CutReport {
    double baseline_score = 0.0;  // overlap of the model trained on all of d_m
    std::vector<Cut> cuts;
    std::vector<RemovalCandidate> removal_candidates;  // descending delta
};

struct LocalizeOptions {
    int num_cuts = 10;
    int num_remove = 5;
    double cut_fraction = 0.5;
};

/// Trains one model per cut and scores it against the baseline description,
/// takes the num_remove lowest-scoring cuts as trial removals, and retrains on
/// d_m without each. Training streams: "full" for d_m, "cut/<id>" per cut,
/// "remove/<id>" per removal; cuts from substream "cuts".
CutReport localize_inconsistencies(const GlobalDescription& baseline, const BinaryDataset& d_m,
                                   const HyperParams& params, const LocalizeOptions& options,
                                   const Stream& stream);
/// Same, over cuts chosen by the caller.
CutReport localize_inconsistencies(const GlobalDescription& baseline, const BinaryDataset& d_m,
                                   std::vector<Cut> cuts, int num_remove,
                                   const HyperParams& params, const Stream& stream);

/// New model on `data` with the given classes, fitted with `stream`.
TMClassifier train_model(const HyperParams& params, const BinaryDataset& data,
                         std::vector<Label> classes, Stream stream);

/// Mean ASD over the rows. Two-class models only.
double mean_asd(const TMClassifier& model, const BinaryDataset& d);

struct CompatibilityGroup {
    Label truth = 0;
    Label predicted = 0;
    std::size_t count = 0;
    std::vector<double> mean_clause_cnt;
    std::vector<double> mean_positive_cnt;
    std::vector<double> mean_clause_sum;
    double mean_asd = 0.0;
};

/// Decision statistics grouped by (truth, predicted). Truth labels outside the
/// model's classes get their own groups.
std::vector<CompatibilityGroup> compatibility_report(const TMClassifier& model,
                                                     const BinaryDataset& d);

nlohmann::json to_json(const SimilarityReport& r, const GlobalDescription& g1);
nlohmann::json to_json(const ChangeReport& r, const GlobalDescription& baseline,
                       const GlobalDescription& updated);
nlohmann::json to_json(const CutReport& r);
nlohmann::json to_json(const std::vector<CompatibilityGroup>& groups);

std::string render_table(const CutReport& r);
std::string render_table(const std::vector<CompatibilityGroup>& groups);

}  // namespace tmfusion
