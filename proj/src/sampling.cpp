#include "tmfusion/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "tmfusion/errors.hpp"
#include "tmfusion/fusion.hpp"

namespace tmfusion {

SplitPlan stratified_kfold(const BinaryDataset& d, int k, int repeats, const Stream& stream) {
    if (k < 2) throw ParameterError("k must be at least 2");
    if (repeats < 1) throw ParameterError("repeats must be at least 1");
    const auto classes = d.classes();
    for (Label c : classes) {
        if (d.count(c) < static_cast<std::size_t>(k))
            throw ParameterError("class " + std::to_string(c) + " has " + std::to_string(d.count(c)) +
                                 " rows, fewer than k=" + std::to_string(k));
    }
    SplitPlan plan{k, repeats, {}};
    for (int r = 0; r < repeats; ++r) {
        Stream s = stream.split("repeat/" + std::to_string(r));
        std::vector<std::vector<RowId>> folds(static_cast<std::size_t>(k));
        std::size_t deal = 0;
        for (Label c : classes) {
            std::vector<RowId> ids;
            for (std::size_t i = 0; i < d.size(); ++i)
                if (d.label(i) == c) ids.push_back(d.row_id(i));
            s.shuffle(std::span<RowId>(ids));
            for (RowId id : ids) folds[deal++ % folds.size()].push_back(id);
        }
        for (int f = 0; f < k; ++f) {
            auto& rows = folds[static_cast<std::size_t>(f)];
            std::sort(rows.begin(), rows.end());
            plan.subsets.push_back({r * k + f, r, f, std::move(rows)});
        }
    }
    return plan;
}

namespace {

std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) n += a[i] != b[i];
    return n;
}

BinaryDataset smote_impl(const BinaryDataset& d, double ratio, int k_neighbors, Stream& stream) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw ParameterError("ratio must be in (0, 1]");
    if (k_neighbors < 1) throw ParameterError("k_neighbors must be at least 1");
    const auto classes = d.classes();
    if (classes.size() < 2) throw ParameterError("oversampling needs at least two classes");
    Label minority = classes.front(), majority = classes.front();
    for (Label c : classes) {
        if (d.count(c) < d.count(minority)) minority = c;
        if (d.count(c) > d.count(majority)) majority = c;
    }
    const auto target =
        static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(d.count(majority))));
    BinaryDataset out = d;
    if (d.count(minority) >= target) return out;

    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.label(i) == minority) pool.push_back(i);
    }
    const auto k = static_cast<std::size_t>(k_neighbors);
    if (pool.size() < k + 1)
        throw ParameterError("minority class has " + std::to_string(pool.size()) +
                             " rows; need at least k_neighbors+1 = " + std::to_string(k + 1));

    std::vector<std::vector<std::size_t>> neighbours(pool.size());
    auto neighbours_of = [&](std::size_t a) -> const std::vector<std::size_t>& {
        auto& nb = neighbours[a];
        if (!nb.empty()) return nb;
        std::vector<std::pair<std::size_t, RowId>> keyed;
        for (std::size_t b = 0; b < pool.size(); ++b) {
            if (b == a) continue;
            keyed.emplace_back(hamming(d.row(pool[a]), d.row(pool[b])), d.row_id(pool[b]));
        }
        std::vector<std::size_t> order(keyed.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                          [&](std::size_t x, std::size_t y) { return keyed[x] < keyed[y]; });
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t b = order[i];
            nb.push_back(b < a ? b : b + 1);
        }
        return nb;
    };

    std::vector<std::uint8_t> bits(d.num_features());
    for (std::size_t made = d.count(minority); made < target; ++made) {
        const auto a = static_cast<std::size_t>(stream.below(pool.size()));
        const auto b = neighbours_of(a)[stream.below(k)];
        const auto seed = d.row(pool[a]);
        const auto other = d.row(pool[b]);
        for (std::size_t i = 0; i < bits.size(); ++i)
            bits[i] = seed[i] == other[i] ? seed[i] : ((stream.next() & 1) ? seed[i] : other[i]);
        out.add_row(bits, minority);
    }
    return out;
}

}  // namespace

BinaryDataset smote_binary(const BinaryDataset& d, double ratio, int k_neighbors, Stream& stream) {
    return smote_impl(d, ratio, k_neighbors, stream);
}

std::vector<GradedSplit> grade_splits(const SplitPlan& plan, const BinaryDataset& d,
                                      const HyperParams& params, const Stream& stream,
                                      const BinaryDataset* evaluation) {
    const auto classes = d.classes();
    if (classes.size() != 2) throw UnsupportedError("grading needs two-class data");
    std::unordered_map<RowId, std::size_t> position;
    for (std::size_t i = 0; i < d.size(); ++i) position.emplace(d.row_id(i), i);

    std::vector<GradedSplit> graded;
    for (const auto& subset : plan.subsets) {
        std::vector<std::size_t> rows;
        for (RowId id : subset.rows) {
            auto it = position.find(id);
            if (it == position.end())
                throw LookupError("subset " + std::to_string(subset.id) + " names unknown row " +
                                  std::to_string(id));
            rows.push_back(it->second);
        }
        const auto train = d.subset(rows);
        const auto model =
            train_model(params, train, classes, stream.split("grade/" + std::to_string(subset.id)));
        const BinaryDataset held_out = evaluation ? BinaryDataset{} : d.without_ids(subset.rows);
        const BinaryDataset& scored = evaluation ? *evaluation : held_out;
        if (scored.empty()) throw ParameterError("nothing left to score subset " + std::to_string(subset.id));
        graded.push_back({subset.id, mean_asd(model, scored)});
    }
    std::stable_sort(graded.begin(), graded.end(), [](const GradedSplit& a, const GradedSplit& b) {
        if (a.asd != b.asd) return a.asd > b.asd;
        return a.subset_id < b.subset_id;
    });
    return graded;
}

namespace {

constexpr std::pair<OversampleKind, std::string_view> kKindNames[] = {
    {OversampleKind::none, "none"},
    {OversampleKind::random_smote, "random-smote"},
    {OversampleKind::max_asd, "max-asd"},
    {OversampleKind::top25_asd, "top25-asd"},
    {OversampleKind::drop_min_asd, "drop-min-asd"},
    {OversampleKind::drop_bottom25_asd, "drop-bottom25-asd"},
};

}  // namespace

std::string_view to_string(OversampleKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    return "?";
}

OversampleKind parse_oversample_kind(std::string_view name) {
    for (const auto& [k, n] : kKindNames)
        if (n == name) return k;
    throw ParameterError("unknown oversampling strategy '" + std::string(name) + "'");
}

OversampleResult informed_oversample(const BinaryDataset& d, const HyperParams& params,
                                     const OversampleStrategy& strategy, int k, int repeats,
                                     const Stream& stream) {
    OversampleResult result;
    if (strategy.kind == OversampleKind::none) {
        result.data = d;
        return result;
    }
    Stream smote_stream = stream.split("smote");
    if (strategy.kind == OversampleKind::random_smote) {
        result.data = smote_binary(d, strategy.ratio, strategy.k_neighbors, smote_stream);
        return result;
    }

    const auto plan = stratified_kfold(d, k, repeats, stream.split("folds"));
    result.grades = grade_splits(plan, d, params, stream.split("grade"));
    const std::size_t n = result.grades.size();
    const std::size_t quarter = (n + 3) / 4;

    std::set<RowId> donors;
    auto rows_of = [&](int id) -> const std::vector<RowId>& {
        return plan.subsets.at(static_cast<std::size_t>(id)).rows;
    };
    const bool keep = strategy.kind == OversampleKind::max_asd || strategy.kind == OversampleKind::top25_asd;
    if (keep) {
        const std::size_t kept = strategy.kind == OversampleKind::max_asd ? 1 : quarter;
        for (std::size_t i = 0; i < kept; ++i) {
            result.donor_subsets.push_back(result.grades[i].subset_id);
            const auto& rows = rows_of(result.grades[i].subset_id);
            donors.insert(rows.begin(), rows.end());
        }
    } else {
        const std::size_t dropped = strategy.kind == OversampleKind::drop_min_asd ? 1 : quarter;
        donors.insert(d.row_ids().begin(), d.row_ids().end());
        for (std::size_t i = 0; i < n; ++i) {
            const int id = result.grades[i].subset_id;
            if (i + dropped >= n) {
                for (RowId r : rows_of(id)) donors.erase(r);
            } else {
                result.donor_subsets.push_back(id);
            }
        }
    }
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (donors.count(d.row_id(i))) rows.push_back(i);
    result.data = smote_binary(d.subset(rows), strategy.ratio, strategy.k_neighbors, smote_stream);
    return result;
}

nlohmann::json to_json(const SplitPlan& plan) {
    nlohmann::json subsets = nlohmann::json::array();
    for (const auto& s : plan.subsets)
        subsets.push_back({{"id", s.id}, {"repeat", s.repeat}, {"fold", s.fold}, {"rows", s.rows}});
    return {{"k", plan.k}, {"repeats", plan.repeats}, {"subsets", subsets}};
}

nlohmann::json to_json(const std::vector<GradedSplit>& grades) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& g : grades) out.push_back({{"subset", g.subset_id}, {"mean_asd", g.asd}});
    return out;
}

}  // namespace tmfusion
