#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tmfusion/dataset.hpp"
#include "tmfusion/random.hpp"
#include "tmfusion/tsetlin.hpp"

namespace tmfusion {

struct Subset {
    int id = 0;      // repeat * k + fold
    int repeat = 0;
    int fold = 0;
    std::vector<RowId> rows;  // ascending
};

struct SplitPlan {
    int k = 0;
    int repeats = 0;
    std::vector<Subset> subsets;
};

/// k stratified folds per repeat, each repeat drawn from substream
/// "repeat/<r>". Within a class, shuffled rows are dealt round-robin; the
/// dealing position carries over from one class to the next so fold sizes
/// stay within one of each other.
SplitPlan stratified_kfold(const BinaryDataset& d, int k, int repeats, const Stream& stream);

/// Grows the smallest class until it holds ceil(ratio * largest) rows.
/// Each synthetic row picks a seed row and one of its k nearest minority
/// neighbours (Hamming, ties by row id) and takes each differing bit from
/// either by a fair coin. Existing rows are kept as they are; synthetic rows
/// get fresh ids.
BinaryDataset smote_binary(const BinaryDataset& d, double ratio, int k_neighbors, Stream& stream);

struct GradedSplit {
    int subset_id = 0;
    double asd = 0.0;
};

/// Trains a model on each subset (substream "grade/<id>") and scores its mean
/// ASD on `evaluation` when given, otherwise on the rows of `d` outside the
/// subset. Sorted by descending ASD, ties by subset id.
std::vector<GradedSplit> grade_splits(const SplitPlan& plan, const BinaryDataset& d,
                                      const HyperParams& params, const Stream& stream,
                                      const BinaryDataset* evaluation = nullptr);

enum class OversampleKind { none, random_smote, max_asd, top25_asd, drop_min_asd, drop_bottom25_asd };

struct OversampleStrategy {
    OversampleKind kind = OversampleKind::none;
    double ratio = 1.0;
    int k_neighbors = 5;
};

std::string_view to_string(OversampleKind kind);
/// Accepts the CLI spellings: none, random-smote, max-asd, top25-asd,
/// drop-min-asd, drop-bottom25-asd.
OversampleKind parse_oversample_kind(std::string_view name);

struct OversampleResult {
    BinaryDataset data;
    std::vector<GradedSplit> grades;  // empty unless the strategy grades
    std::vector<int> donor_subsets;   // subsets whose rows make up the donor pool
};

/// Builds the training set for a strategy. Keep strategies (max-asd,
/// top25-asd) take the union of the kept subsets, drop strategies every row
/// outside the dropped subsets; the pool is then oversampled to the ratio.
/// random-smote oversamples all of `d`; none returns it unchanged.
/// Substreams: "folds", "grade", "smote".
OversampleResult informed_oversample(const BinaryDataset& d, const HyperParams& params,
                                     const OversampleStrategy& strategy, int k, int repeats,
                                     const Stream& stream);

nlohmann::json to_json(const SplitPlan& plan);
nlohmann::json to_json(const std::vector<GradedSplit>& grades);

}  // namespace tmfusion
