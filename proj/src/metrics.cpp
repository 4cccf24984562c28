#include "tmfusion/metrics.hpp"

#include <algorithm>

#include "tmfusion/errors.hpp"

namespace tmfusion {

std::size_t ConfusionMatrix::total() const {
    std::size_t n = 0;
    for (const auto& row : counts)
        for (auto c : row) n += c;
    return n;
}

std::size_t ConfusionMatrix::index(Label y) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), y);
    if (it == labels.end() || *it != y) throw LookupError("label " + std::to_string(y) + " not in matrix");
    return static_cast<std::size_t>(it - labels.begin());
}

ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> predicted) {
    if (truth.size() != predicted.size())
        throw DimensionError("truth and predictions differ in length");
    ConfusionMatrix cm;
    cm.labels.assign(truth.begin(), truth.end());
    cm.labels.insert(cm.labels.end(), predicted.begin(), predicted.end());
    std::sort(cm.labels.begin(), cm.labels.end());
    cm.labels.erase(std::unique(cm.labels.begin(), cm.labels.end()), cm.labels.end());
    cm.counts.assign(cm.labels.size(), std::vector<std::size_t>(cm.labels.size(), 0));
    for (std::size_t i = 0; i < truth.size(); ++i) ++cm.counts[cm.index(truth[i])][cm.index(predicted[i])];
    return cm;
}

namespace {
double ratio(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); }
}  // namespace

double precision(const ConfusionMatrix& cm, Label y) {
    const auto j = cm.index(y);
    std::size_t col = 0;
    for (const auto& row : cm.counts) col += row[j];
    return ratio(cm.counts[j][j], col);
}

double recall(const ConfusionMatrix& cm, Label y) {
    const auto i = cm.index(y);
    std::size_t row = 0;
    for (auto c : cm.counts[i]) row += c;
    return ratio(cm.counts[i][i], row);
}

double f1(const ConfusionMatrix& cm, Label y) {
    const double p = precision(cm, y), r = recall(cm, y);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

Scores score(const ConfusionMatrix& cm) {
    Scores s;
    if (cm.labels.empty()) return s;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < cm.labels.size(); ++i) hits += cm.counts[i][i];
    s.accuracy = ratio(hits, cm.total());
    for (Label y : cm.labels) {
        s.precision += precision(cm, y);
        s.recall += recall(cm, y);
        s.f1 += f1(cm, y);
    }
    const auto n = static_cast<double>(cm.labels.size());
    s.precision /= n;
    s.recall /= n;
    s.f1 /= n;
    return s;
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
    return {{"labels", cm.labels}, {"counts", cm.counts}};
}

nlohmann::json to_json(const Scores& s) {
    return {{"accuracy", s.accuracy}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace tmfusion
