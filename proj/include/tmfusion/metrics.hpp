#pragma once

#include <span>
#include <vector>

#include "json.hpp"

#include "tmfusion/dataset.hpp"

namespace tmfusion {

/// counts[t][p]: rows with truth labels[t] predicted as labels[p].
struct ConfusionMatrix {
    std::vector<Label> labels;
    std::vector<std::vector<std::size_t>> counts;

    std::size_t total() const;
    std::size_t index(Label y) const;
};

/// Labels are the sorted union of both sequences.
ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> predicted);

struct Scores {
    double accuracy = 0.0;
    double precision = 0.0;  // macro over labels
    double recall = 0.0;
    double f1 = 0.0;
};

/// Per-label precision/recall/F1 treat 0/0 as 0.
double precision(const ConfusionMatrix& cm, Label y);
double recall(const ConfusionMatrix& cm, Label y);
double f1(const ConfusionMatrix& cm, Label y);
Scores score(const ConfusionMatrix& cm);

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const Scores& s);

}  // namespace tmfusion
