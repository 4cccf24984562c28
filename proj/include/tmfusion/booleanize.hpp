#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "tmfusion/dataset.hpp"

namespace tmfusion {

/// Percentile bins for one feature. Interior edges split values into
/// (-inf, e_1], (e_1, e_2], ..., (e_{b-1}, +inf); out-of-range values clamp to
/// the end bins.
struct FeatureBins {
    std::string name;
    std::vector<double> edges;  // b - 1 interior cut points, non-decreasing
    double min = 0.0;           // training range, used only for labels
    double max = 0.0;
    bool degenerate = false;    // constant feature: one always-on bin

    std::size_t num_bins() const { return degenerate ? 1 : edges.size() + 1; }
    std::size_t bin_of(double v) const;
    /// "name_(lo::hi]" per bin.
    std::vector<std::string> labels() const;
};

struct BinningSpec {
    std::size_t bins = 10;
    std::vector<FeatureBins> features;

    std::size_t output_width() const;
};

/// Nearest-rank percentile (no interpolation) of an unsorted sample.
double nearest_rank_percentile(std::vector<double> values, double percent);

/// Edges at the i * (100 / b) percentiles, i = 1 .. b-1.
BinningSpec fit_percentile_bins(const NumericTable& raw, std::size_t b);

/// One-hot bin encoding; exactly one bit per feature per row. Columns are
/// matched by name.
BinaryDataset apply_bins(const BinningSpec& spec, const NumericTable& raw);

struct PopulationStats {
    std::vector<std::string> names;
    std::vector<double> means;
};

/// Column means over the (training) rows given.
PopulationStats fit_population_stats(const NumericTable& train);

/// Bit is 1 iff the value is strictly above the population mean.
BinaryDataset mean_threshold_binarize(const NumericTable& raw, const PopulationStats& stats);

/// {mean, median, min, max, variance} of the first and second half of a
/// series, interleaved by half: mean/1st, mean/2nd, median/1st, ... (10 values).
std::vector<double> half_split_summary(std::span<const double> series);
/// Names matching half_split_summary for a signal called `signal`, e.g.
/// "mean SR, first half".
std::vector<std::string> half_split_summary_names(const std::string& signal);

/// Lowercase; split on runs of non-alphanumeric characters.
std::vector<std::string> tokenize(const std::string& text);

struct Vocabulary {
    std::vector<std::string> tokens;  // most frequent first
};

/// Top vocab_size tokens by document frequency, ties broken alphabetically.
Vocabulary fit_vocabulary(std::span<const std::vector<std::string>> documents, std::size_t vocab_size);

/// One presence bit per vocabulary token; unknown tokens are ignored.
BinaryDataset bow_binarize(std::span<const std::vector<std::string>> documents,
                           std::span<const Label> labels, const Vocabulary& vocab);

nlohmann::json to_json(const BinningSpec& spec);
BinningSpec binning_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PopulationStats& stats);
PopulationStats stats_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const nlohmann::json& j);

}  // namespace tmfusion
