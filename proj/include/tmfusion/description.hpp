#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "tmfusion/tsetlin.hpp"

namespace tmfusion {

/// One learned clause as a literal set. Literal k < f is feature k, literal
/// f + k its negation.
struct ClauseRecord {
    Label cls = 0;
    Polarity polarity = Polarity::positive;
    std::vector<int> literals;  // ascending
    int weight = 1;

    bool empty() const { return literals.empty(); }
    bool operator==(const ClauseRecord&) const = default;
};

/// Everything a model learned, canonically ordered so equal models describe
/// identically: by class order, positive before negative, literal set
/// lexicographically, then weight descending.
struct GlobalDescription {
    std::size_t num_features = 0;
    std::vector<Label> classes;
    std::vector<std::string> feature_names;
    std::string params_fingerprint;
    std::vector<ClauseRecord> records;

    /// Records of one class/polarity group, in canonical order.
    std::vector<const ClauseRecord*> group(Label cls, Polarity polarity) const;

    /// "name" or "NOT name".
    std::string literal_name(int literal) const;
    /// Literals joined with " AND "; "<empty>" for an empty record.
    std::string render(const ClauseRecord& record) const;

    bool operator==(const GlobalDescription&) const = default;
};

GlobalDescription global_description(const TMClassifier& model);

nlohmann::json to_json(const GlobalDescription& g);
GlobalDescription description_from_json(const nlohmann::json& j);

/// Human-readable table: one line per record grouped by class and polarity.
std::string render_table(const GlobalDescription& g);

}  // namespace tmfusion
