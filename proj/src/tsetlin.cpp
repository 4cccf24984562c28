#include "tmfusion/tsetlin.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

#include "tmfusion/errors.hpp"

namespace tmfusion {

namespace {

std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

void check_width(std::size_t got, std::size_t want) {
    if (got != want) {
        throw DimensionError("input has " + std::to_string(got) + " features, model expects " +
                             std::to_string(want));
    }
}

}  // namespace

void HyperParams::validate() const {
    if (clauses_per_class <= 0) throw ConfigError("clauses_per_class must be positive");
    if (clauses_per_class % 2 != 0) throw ConfigError("clauses_per_class must be even");
    if (threshold < 1) throw ConfigError("threshold must be at least 1");
    if (!(specificity > 1.0)) throw ConfigError("specificity must exceed 1");
    if (ta_states < 1) throw ConfigError("ta_states must be at least 1");
    if (epochs < 0) throw ConfigError("epochs must be non-negative");
}

std::string HyperParams::fingerprint() const {
    std::ostringstream ss;
    ss.precision(17);
    ss << "m=" << clauses_per_class << ";T=" << threshold << ";s=" << specificity
       << ";N=" << ta_states << ";boost=" << (boost_true_positives ? 1 : 0) << ";epochs=" << epochs
       << ";seed=" << seed;
    return ss.str();
}

PackedInput::PackedInput(std::span<const std::uint8_t> x)
    : num_features_(x.size()), words_(words_for(2 * x.size()), 0) {
    const std::size_t f = x.size();
    for (std::size_t k = 0; k < f; ++k) {
        const std::size_t lit = x[k] ? k : f + k;
        words_[lit >> 6] |= std::uint64_t{1} << (lit & 63);
    }
}

ClauseState::ClauseState(Polarity polarity, std::size_t num_features, int ta_states)
    : polarity_(polarity),
      half_(ta_states),
      states_(2 * num_features, ta_states),
      include_mask_(words_for(2 * num_features), 0) {}

void ClauseState::set_state(std::size_t k, int value) {
    const bool was = states_[k] > half_;
    const bool now = value > half_;
    states_[k] = value;
    if (was == now) return;
    const std::uint64_t bit = std::uint64_t{1} << (k & 63);
    if (now) {
        include_mask_[k >> 6] |= bit;
        ++include_count_;
    } else {
        include_mask_[k >> 6] &= ~bit;
        --include_count_;
    }
}

std::vector<int> ClauseState::included_literals() const {
    std::vector<int> out;
    out.reserve(include_count_);
    for (std::size_t k = 0; k < states_.size(); ++k)
        if (states_[k] > half_) out.push_back(static_cast<int>(k));
    return out;
}

bool ClauseState::evaluate(const PackedInput& x, EvalMode mode) const {
    if (include_count_ == 0) return mode == EvalMode::training;
    auto lits = x.words();
    for (std::size_t w = 0; w < include_mask_.size(); ++w)
        if (include_mask_[w] & ~lits[w]) return false;
    return true;
}

TMClassifier::TMClassifier(HyperParams params, std::size_t num_features, std::vector<Label> classes)
    : params_(params), num_features_(num_features), classes_(std::move(classes)) {
    params_.validate();
    if (num_features_ == 0) throw ConfigError("num_features must be at least 1");
    if (classes_.size() < 2) throw ConfigError("classes must list at least two labels");
    auto sorted = classes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ConfigError("classes must be distinct");
    pools_.resize(classes_.size());
    for (auto& pool : pools_) {
        pool.reserve(params_.clauses_per_class);
        for (int j = 0; j < params_.clauses_per_class; ++j) {
            pool.emplace_back(j % 2 == 0 ? Polarity::positive : Polarity::negative, num_features_,
                              params_.ta_states);
        }
    }
    for (std::size_t k = 0; k < num_features_; ++k) feature_names_.push_back("x" + std::to_string(k));
}

std::size_t TMClassifier::class_index(Label y) const {
    auto it = std::find(classes_.begin(), classes_.end(), y);
    if (it == classes_.end()) throw LookupError("unknown class label " + std::to_string(y));
    return static_cast<std::size_t>(it - classes_.begin());
}

bool TMClassifier::has_class(Label y) const {
    return std::find(classes_.begin(), classes_.end(), y) != classes_.end();
}

void TMClassifier::set_feature_names(std::vector<std::string> names) {
    check_width(names.size(), num_features_);
    feature_names_ = std::move(names);
}

TMClassifier new_classifier(const HyperParams& params, std::size_t num_features,
                            std::vector<Label> classes, Stream& stream) {
    TMClassifier model(params, num_features, std::move(classes));
    const int n = params.ta_states;
    for (std::size_t c = 0; c < model.num_classes(); ++c) {
        for (auto& clause : model.pool(c)) {
            for (std::size_t k = 0; k < clause.num_literals(); ++k)
                clause.set_state(k, (stream.next() & 1U) ? n + 1 : n);
        }
    }
    return model;
}

bool evaluate_clause(const ClauseState& clause, std::span<const std::uint8_t> x, EvalMode mode) {
    check_width(x.size(), clause.num_features());
    return clause.evaluate(PackedInput(x), mode);
}

namespace {

std::int64_t pool_sum(std::span<const ClauseState> pool, const PackedInput& x, EvalMode mode) {
    std::int64_t v = 0;
    for (const auto& clause : pool) {
        if (!clause.evaluate(x, mode)) continue;
        v += clause.polarity() == Polarity::positive ? clause.weight() : -clause.weight();
    }
    return v;
}

Label decide(const TMClassifier& model, std::span<const std::int64_t> sums) {
    if (sums.size() == 2) return model.classes()[sums[1] - sums[0] >= 0 ? 1 : 0];
    std::size_t best = 0;
    for (std::size_t c = 1; c < sums.size(); ++c)
        if (sums[c] > sums[best]) best = c;
    return model.classes()[best];
}

void update_pool(std::span<ClauseState> pool, const PackedInput& x, bool target,
                 const HyperParams& params, Stream& stream) {
    const std::int64_t t = params.threshold;
    const std::int64_t v = clip_sum(pool_sum(pool, x, EvalMode::training), t);
    const std::int64_t error = target ? t - v : t + v;
    const double p = static_cast<double>(error) / static_cast<double>(2 * t);
    for (auto& clause : pool) {
        if (!stream.bernoulli(p)) continue;
        const bool positive = clause.polarity() == Polarity::positive;
        if (positive == target)
            type_i_feedback(clause, x, params.specificity, params.boost_true_positives, stream);
        else
            type_ii_feedback(clause, x);
    }
}

void present_example(TMClassifier& model, const PackedInput& x, std::size_t target,
                     Stream& stream) {
    std::size_t other = target == 0 ? 1 : 0;
    if (model.num_classes() > 2) {
        other = static_cast<std::size_t>(stream.below(model.num_classes() - 1));
        if (other >= target) ++other;
    }
    update_pool(model.pool(target), x, true, model.params(), stream);
    update_pool(model.pool(other), x, false, model.params(), stream);
}

}  // namespace

std::int64_t class_sum(const TMClassifier& model, Label cls, std::span<const std::uint8_t> x) {
    check_width(x.size(), model.num_features());
    return pool_sum(model.pool(model.class_index(cls)), PackedInput(x), EvalMode::inference);
}

Label classify(const TMClassifier& model, std::span<const std::uint8_t> x) {
    check_width(x.size(), model.num_features());
    PackedInput packed(x);
    std::vector<std::int64_t> sums(model.num_classes());
    for (std::size_t c = 0; c < sums.size(); ++c)
        sums[c] = pool_sum(model.pool(c), packed, EvalMode::inference);
    return decide(model, sums);
}

void type_i_feedback(ClauseState& clause, const PackedInput& x, double specificity, bool boost,
                     Stream& stream) {
    const bool fired = clause.evaluate(x, EvalMode::training);
    const double strong = boost ? 1.0 : (specificity - 1.0) / specificity;
    const double weak = 1.0 / specificity;
    const int top = 2 * clause.ta_states();
    for (std::size_t k = 0; k < clause.num_literals(); ++k) {
        const double draw = stream.uniform();
        const int state = clause.state(k);
        if (fired && x.literal(k)) {
            // Reward include / penalize exclude: both move up.
            if (draw < strong && state < top) clause.set_state(k, state + 1);
        } else {
            // Penalize include / reward exclude: both move down.
            if (draw < weak && state > 1) clause.set_state(k, state - 1);
        }
    }
    if (fired) clause.set_weight(clause.weight() + 1);
}

void type_i_feedback(ClauseState& clause, std::span<const std::uint8_t> x, double specificity,
                     bool boost, Stream& stream) {
    check_width(x.size(), clause.num_features());
    type_i_feedback(clause, PackedInput(x), specificity, boost, stream);
}

void type_ii_feedback(ClauseState& clause, const PackedInput& x) {
    if (!clause.evaluate(x, EvalMode::training)) return;
    const int n = clause.ta_states();
    for (std::size_t k = 0; k < clause.num_literals(); ++k) {
        if (!x.literal(k) && clause.state(k) <= n) clause.set_state(k, clause.state(k) + 1);
    }
    clause.set_weight(std::max(1, clause.weight() - 1));
}

void type_ii_feedback(ClauseState& clause, std::span<const std::uint8_t> x) {
    check_width(x.size(), clause.num_features());
    type_ii_feedback(clause, PackedInput(x));
}

void train_example(TMClassifier& model, std::span<const std::uint8_t> x, Label y, Stream& stream) {
    check_width(x.size(), model.num_features());
    present_example(model, PackedInput(x), model.class_index(y), stream);
}

void fit(TMClassifier& model, const BinaryDataset& data, Stream& stream) {
    if (data.empty()) throw ParameterError("cannot fit on an empty dataset");
    check_width(data.num_features(), model.num_features());

    std::vector<PackedInput> packed;
    std::vector<std::size_t> target;
    packed.reserve(data.size());
    target.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        packed.emplace_back(data.row(i));
        target.push_back(model.class_index(data.label(i)));
    }

    std::vector<std::size_t> order(data.size());
    for (int epoch = 0; epoch < model.params().epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        stream.shuffle(std::span(order));
        for (auto i : order) present_example(model, packed[i], target[i], stream);
    }
}

DecisionTrace decision_trace(const TMClassifier& model, std::span<const std::uint8_t> x) {
    check_width(x.size(), model.num_features());
    PackedInput packed(x);
    const std::size_t n = model.num_classes();
    DecisionTrace trace;
    trace.clause_cnt.assign(n, 0);
    trace.positive_cnt.assign(n, 0);
    trace.clause_sum.assign(n, 0);
    for (std::size_t c = 0; c < n; ++c) {
        for (const auto& clause : model.pool(c)) {
            if (!clause.evaluate(packed, EvalMode::inference)) continue;
            ++trace.clause_cnt[c];
            if (clause.polarity() == Polarity::positive) {
                ++trace.positive_cnt[c];
                trace.clause_sum[c] += clause.weight();
            } else {
                trace.clause_sum[c] -= clause.weight();
            }
        }
    }
    if (n == 2) trace.asd = std::abs(trace.clause_sum[0] - trace.clause_sum[1]);
    trace.predicted = decide(model, trace.clause_sum);
    return trace;
}

}  // namespace tmfusion
