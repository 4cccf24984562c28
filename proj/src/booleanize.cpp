#include "tmfusion/booleanize.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "tmfusion/errors.hpp"

namespace tmfusion {

namespace {

// Two decimals, trailing zeros trimmed but at least one kept: 1.0, 17826.76.
std::string format_edge(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
    return s;
}

std::vector<std::size_t> column_map(const std::vector<std::string>& wanted,
                                    const std::vector<std::string>& have) {
    std::vector<std::size_t> cols;
    for (const auto& name : wanted) {
        auto it = std::find(have.begin(), have.end(), name);
        if (it == have.end()) throw LookupError("table has no feature '" + name + "'");
        cols.push_back(static_cast<std::size_t>(it - have.begin()));
    }
    return cols;
}

std::vector<double> column(const NumericTable& t, std::size_t k) {
    std::vector<double> out;
    out.reserve(t.size());
    for (const auto& row : t.rows) {
        if (row.size() != t.num_features())
            throw DimensionError("numeric row width does not match the header");
        out.push_back(row[k]);
    }
    return out;
}

std::vector<Label> labels_or_zero(const NumericTable& t) {
    if (t.labels.size() == t.size()) return t.labels;
    return std::vector<Label>(t.size(), 0);
}

}  // namespace

std::size_t FeatureBins::bin_of(double v) const {
    if (degenerate) return 0;
    // First edge e_i with v <= e_i; beyond the last edge is the final bin.
    auto it = std::lower_bound(edges.begin(), edges.end(), v);
    return static_cast<std::size_t>(it - edges.begin());
}

std::vector<std::string> FeatureBins::labels() const {
    if (degenerate) return {name + "_(" + format_edge(min) + "::" + format_edge(max) + "]"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i <= edges.size(); ++i) {
        const double lo = i == 0 ? min : edges[i - 1];
        const double hi = i == edges.size() ? max : edges[i];
        out.push_back(name + "_(" + format_edge(lo) + "::" + format_edge(hi) + "]");
    }
    return out;
}

std::size_t BinningSpec::output_width() const {
    std::size_t w = 0;
    for (const auto& f : features) w += f.num_bins();
    return w;
}

double nearest_rank_percentile(std::vector<double> values, double percent) {
    if (values.empty()) throw ParameterError("percentile of an empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * n));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    return values[rank - 1];
}

BinningSpec fit_percentile_bins(const NumericTable& raw, std::size_t b) {
    if (b < 2) throw ParameterError("need at least 2 bins");
    if (raw.size() == 0) throw ParameterError("cannot fit bins on an empty table");
    BinningSpec spec;
    spec.bins = b;
    for (std::size_t k = 0; k < raw.num_features(); ++k) {
        auto values = column(raw, k);
        FeatureBins fb;
        fb.name = raw.names[k];
        auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        fb.min = *lo;
        fb.max = *hi;
        fb.degenerate = fb.min == fb.max;
        if (!fb.degenerate) {
            for (std::size_t i = 1; i < b; ++i)
                fb.edges.push_back(nearest_rank_percentile(values, 100.0 * static_cast<double>(i) /
                                                                       static_cast<double>(b)));
        }
        spec.features.push_back(std::move(fb));
    }
    return spec;
}

BinaryDataset apply_bins(const BinningSpec& spec, const NumericTable& raw) {
    std::vector<std::string> names, wanted;
    for (const auto& f : spec.features) {
        wanted.push_back(f.name);
        for (auto& l : f.labels()) names.push_back(std::move(l));
    }
    const auto cols = column_map(wanted, raw.names);
    const auto labels = labels_or_zero(raw);
    BinaryDataset out(names);
    std::vector<std::uint8_t> bits(names.size());
    for (std::size_t r = 0; r < raw.size(); ++r) {
        std::fill(bits.begin(), bits.end(), 0);
        std::size_t offset = 0;
        for (std::size_t k = 0; k < spec.features.size(); ++k) {
            const auto& f = spec.features[k];
            bits[offset + f.bin_of(raw.rows[r].at(cols[k]))] = 1;
            offset += f.num_bins();
        }
        out.add_row(bits, labels[r]);
    }
    return out;
}

PopulationStats fit_population_stats(const NumericTable& train) {
    if (train.size() == 0) throw ParameterError("cannot fit statistics on an empty table");
    PopulationStats stats{train.names, {}};
    for (std::size_t k = 0; k < train.num_features(); ++k) {
        double sum = 0.0;
        for (double v : column(train, k)) sum += v;
        stats.means.push_back(sum / static_cast<double>(train.size()));
    }
    return stats;
}

BinaryDataset mean_threshold_binarize(const NumericTable& raw, const PopulationStats& stats) {
    if (stats.means.size() != stats.names.size())
        throw DimensionError("population statistics are incomplete");
    std::vector<std::size_t> cols;
    for (const auto& name : raw.names) {
        auto it = std::find(stats.names.begin(), stats.names.end(), name);
        if (it == stats.names.end()) throw LookupError("no population statistic for '" + name + "'");
        cols.push_back(static_cast<std::size_t>(it - stats.names.begin()));
    }
    const auto labels = labels_or_zero(raw);
    BinaryDataset out(raw.names);
    std::vector<std::uint8_t> bits(raw.num_features());
    for (std::size_t r = 0; r < raw.size(); ++r) {
        for (std::size_t k = 0; k < bits.size(); ++k)
            bits[k] = raw.rows[r].at(k) > stats.means[cols[k]] ? 1 : 0;
        out.add_row(bits, labels[r]);
    }
    return out;
}

std::vector<double> half_split_summary(std::span<const double> series) {
    if (series.size() < 2) throw ParameterError("need at least 2 samples to split a series");
    const std::size_t mid = series.size() / 2;
    auto summarize = [](std::span<const double> s) {
        std::vector<double> v(s.begin(), s.end());
        std::sort(v.begin(), v.end());
        const double n = static_cast<double>(v.size());
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= n;
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        var /= n;
        const std::size_t h = v.size() / 2;
        const double median = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
        return std::vector<double>{mean, median, v.front(), v.back(), var};
    };
    const auto first = summarize(series.subspan(0, mid));
    const auto second = summarize(series.subspan(mid));
    std::vector<double> out;
    for (std::size_t i = 0; i < first.size(); ++i) {
        out.push_back(first[i]);
        out.push_back(second[i]);
    }
    return out;
}

std::vector<std::string> half_split_summary_names(const std::string& signal) {
    std::vector<std::string> out;
    for (const char* stat : {"mean ", "median ", "minimum ", "maximum ", "variance of "}) {
        for (const char* half : {", first half", ", second half"})
            out.push_back(std::string(stat) + signal + half);
    }
    return out;
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

Vocabulary fit_vocabulary(std::span<const std::vector<std::string>> documents, std::size_t vocab_size) {
    if (documents.empty()) throw ParameterError("cannot fit a vocabulary on an empty corpus");
    if (vocab_size == 0) throw ParameterError("vocab_size must be at least 1");
    std::map<std::string, std::size_t> df;
    for (const auto& doc : documents) {
        std::set<std::string> seen(doc.begin(), doc.end());
        for (const auto& t : seen) ++df[t];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    Vocabulary vocab;
    for (std::size_t i = 0; i < std::min(vocab_size, ranked.size()); ++i)
        vocab.tokens.push_back(ranked[i].first);
    return vocab;
}

BinaryDataset bow_binarize(std::span<const std::vector<std::string>> documents,
                           std::span<const Label> labels, const Vocabulary& vocab) {
    if (documents.empty()) throw ParameterError("empty corpus");
    if (labels.size() != documents.size())
        throw DimensionError("one label per document is required");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < vocab.tokens.size(); ++i) index.emplace(vocab.tokens[i], i);
    BinaryDataset out(vocab.tokens);
    std::vector<std::uint8_t> bits(vocab.tokens.size());
    for (std::size_t d = 0; d < documents.size(); ++d) {
        std::fill(bits.begin(), bits.end(), 0);
        for (const auto& t : documents[d]) {
            if (auto it = index.find(t); it != index.end()) bits[it->second] = 1;
        }
        out.add_row(bits, labels[d]);
    }
    return out;
}

nlohmann::json to_json(const BinningSpec& spec) {
    nlohmann::json features = nlohmann::json::array();
    for (const auto& f : spec.features) {
        features.push_back({{"name", f.name},
                            {"edges", f.edges},
                            {"min", f.min},
                            {"max", f.max},
                            {"degenerate", f.degenerate}});
    }
    return {{"kind", "percentile_bins"}, {"bins", spec.bins}, {"features", features}};
}

BinningSpec binning_from_json(const nlohmann::json& j) {
    try {
        BinningSpec spec;
        spec.bins = j.at("bins").get<std::size_t>();
        for (const auto& f : j.at("features")) {
            FeatureBins fb;
            fb.name = f.at("name").get<std::string>();
            fb.edges = f.at("edges").get<std::vector<double>>();
            fb.min = f.at("min").get<double>();
            fb.max = f.at("max").get<double>();
            fb.degenerate = f.at("degenerate").get<bool>();
            spec.features.push_back(std::move(fb));
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed binning spec: ") + e.what());
    }
}

nlohmann::json to_json(const PopulationStats& stats) {
    return {{"kind", "population_means"}, {"names", stats.names}, {"means", stats.means}};
}

PopulationStats stats_from_json(const nlohmann::json& j) {
    try {
        return {j.at("names").get<std::vector<std::string>>(), j.at("means").get<std::vector<double>>()};
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed population statistics: ") + e.what());
    }
}

nlohmann::json to_json(const Vocabulary& vocab) {
    return {{"kind", "vocabulary"}, {"tokens", vocab.tokens}};
}

Vocabulary vocabulary_from_json(const nlohmann::json& j) {
    try {
        return {j.at("tokens").get<std::vector<std::string>>()};
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed vocabulary: ") + e.what());
    }
}

}  // namespace tmfusion
