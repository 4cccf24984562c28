#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tmfusion/dataset.hpp"
#include "tmfusion/random.hpp"

namespace tmfusion {

struct HyperParams {
    int clauses_per_class = 20;   // m, even: half positive, half negative
    int threshold = 15;           // voting target T
    double specificity = 3.9;     // s > 1
    int ta_states = 100;          // N; each automaton has 2N states
    bool boost_true_positives = false;
    int epochs = 10;
    std::uint64_t seed = 1;

    /// Throws ConfigError naming the first offending field.
    void validate() const;
    /// Stable text rendering of every field, used to tag descriptions.
    std::string fingerprint() const;

    bool operator==(const HyperParams&) const = default;
};

enum class Polarity : std::int8_t { positive = 1, negative = -1 };

enum class EvalMode { training, inference };

/// Literal values of one input, packed one bit per literal: bit k < f is x_k,
/// bit f + k is the negation of x_k.
class PackedInput {
public:
    explicit PackedInput(std::span<const std::uint8_t> x);

    std::size_t num_features() const { return num_features_; }
    bool literal(std::size_t k) const { return (words_[k >> 6] >> (k & 63)) & 1U; }
    std::span<const std::uint64_t> words() const { return words_; }

private:
    std::size_t num_features_;
    std::vector<std::uint64_t> words_;
};

/// One clause: a team of 2f two-action automata plus polarity and weight.
/// States run from 1 to 2N; a state above N means "include".
class ClauseState {
public:
    ClauseState(Polarity polarity, std::size_t num_features, int ta_states);

    Polarity polarity() const { return polarity_; }
    int weight() const { return weight_; }
    void set_weight(int w) { weight_ = w; }

    int ta_states() const { return half_; }
    std::size_t num_features() const { return states_.size() / 2; }
    std::size_t num_literals() const { return states_.size(); }
    std::span<const std::int32_t> states() const { return states_; }
    int state(std::size_t k) const { return states_[k]; }
    void set_state(std::size_t k, int value);

    bool includes(std::size_t k) const { return states_[k] > half_; }
    std::size_t include_count() const { return include_count_; }
    /// Indices of included literals in ascending order.
    std::vector<int> included_literals() const;

    bool evaluate(const PackedInput& x, EvalMode mode) const;

    bool operator==(const ClauseState& other) const {
        return polarity_ == other.polarity_ && weight_ == other.weight_ && half_ == other.half_ &&
               states_ == other.states_;
    }

private:
    Polarity polarity_;
    int weight_ = 1;
    int half_;
    std::vector<std::int32_t> states_;
    std::vector<std::uint64_t> include_mask_;
    std::size_t include_count_ = 0;
};

/// Per-class pools of clauses. Clause j of every pool is positive when j is
/// even and negative when j is odd.
class TMClassifier {
public:
    TMClassifier(HyperParams params, std::size_t num_features, std::vector<Label> classes);

    const HyperParams& params() const { return params_; }
    std::size_t num_features() const { return num_features_; }
    const std::vector<Label>& classes() const { return classes_; }
    std::size_t num_classes() const { return classes_.size(); }

    /// Position of `y` in classes(); throws LookupError if absent.
    std::size_t class_index(Label y) const;
    bool has_class(Label y) const;

    std::span<const ClauseState> pool(std::size_t class_index) const { return pools_[class_index]; }
    std::span<ClauseState> pool(std::size_t class_index) { return pools_[class_index]; }

    const std::vector<std::string>& feature_names() const { return feature_names_; }
    void set_feature_names(std::vector<std::string> names);

    bool operator==(const TMClassifier&) const = default;

private:
    HyperParams params_;
    std::size_t num_features_;
    std::vector<Label> classes_;
    std::vector<std::vector<ClauseState>> pools_;
    std::vector<std::string> feature_names_;
};

/// Per-sample decision statistics.
struct DecisionTrace {
    std::vector<int> clause_cnt;            // clauses firing, per class
    std::vector<int> positive_cnt;          // positive clauses firing, per class
    std::vector<std::int64_t> clause_sum;   // weighted vote, per class
    std::optional<std::int64_t> asd;        // |sum_0 - sum_1|, two-class models only
    Label predicted = 0;
};

/// Fresh model with every automaton at N or N+1 (fair coin, clause-major then
/// literal order) and every weight at 1.
TMClassifier new_classifier(const HyperParams& params, std::size_t num_features,
                            std::vector<Label> classes, Stream& stream);

bool evaluate_clause(const ClauseState& clause, std::span<const std::uint8_t> x, EvalMode mode);

/// Weighted vote of one class pool, inference mode.
std::int64_t class_sum(const TMClassifier& model, Label cls, std::span<const std::uint8_t> x);

/// Two classes: the second class wins iff sum_1 - sum_0 >= 0.
/// More classes: argmax of the per-class sums, ties to the lowest index.
Label classify(const TMClassifier& model, std::span<const std::uint8_t> x);

constexpr std::int64_t clip_sum(std::int64_t v, std::int64_t threshold) {
    return v < -threshold ? -threshold : (v > threshold ? threshold : v);
}

/// Type I feedback. Consumes exactly one draw per automaton, in literal order.
void type_i_feedback(ClauseState& clause, const PackedInput& x, double specificity, bool boost,
                     Stream& stream);
void type_i_feedback(ClauseState& clause, std::span<const std::uint8_t> x, double specificity,
                     bool boost, Stream& stream);

/// Type II feedback. Deterministic.
void type_ii_feedback(ClauseState& clause, const PackedInput& x);
void type_ii_feedback(ClauseState& clause, std::span<const std::uint8_t> x);

/// One presentation of (x, y). The pool of y is trained toward +T and, for
/// multi-class models, one other pool drawn uniformly (one draw) toward -T;
/// with two classes the other pool is implied and no draw is taken. Each
/// clause then takes one gating draw, followed by its Type I draws if gated.
void train_example(TMClassifier& model, std::span<const std::uint8_t> x, Label y, Stream& stream);

/// `epochs` passes over the data, each in a fresh shuffled order.
void fit(TMClassifier& model, const BinaryDataset& data, Stream& stream);

DecisionTrace decision_trace(const TMClassifier& model, std::span<const std::uint8_t> x);

}  // namespace tmfusion
