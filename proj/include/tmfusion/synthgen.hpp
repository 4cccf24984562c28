#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "tmfusion/dataset.hpp"
#include "tmfusion/random.hpp"

namespace tmfusion::synth {

// ---------------------------------------------------------------------------
// Hat-passing world: persons 0..P-1 stand in a row (A, B, C, D); the current
// owner passes the hat right (to p+1), left (to p-1), or keeps it.

enum class Action : int { right = 0, left = 1, nothing = 2 };

struct Step {
    int actor = 0;
    Action action = Action::nothing;
    bool operator==(const Step&) const = default;
};

struct HatExample {
    std::vector<Step> steps;
    int label = 0;  // final owner
    bool consistent = true;
};

struct OwnerResult {
    int owner = 0;
    bool consistent = true;
};

/// Replays the chain starting from the first actor. A step whose actor is not
/// the current owner, or that passes off either end, is a no-op and marks the
/// chain inconsistent.
OwnerResult simulate_final_owner(const std::vector<Step>& steps, int persons);

std::vector<HatExample> gen_hat_data(std::size_t count, int persons, int steps, Stream& stream);

/// "A", "B", ...
std::string person_name(int p);
char action_code(Action a);

/// Feature names "T<t>_<Person>,<R|L|N>", timestep-major, then person, then action.
std::vector<std::string> relational_feature_names(int persons, int steps);
std::vector<std::uint8_t> encode_relational(const HatExample& ex, int persons, int steps);
BinaryDataset hat_dataset(const std::vector<HatExample>& examples, int persons, int steps);

struct InjectionResult {
    std::vector<HatExample> data;
    std::vector<std::size_t> modified;  // positions of perturbed examples, ascending
};

/// Replaces one valid action of an end person (A passing right or keeping the
/// hat, or the last person passing left or keeping it) with the invalid outward
/// pass in ceil(rate * |d|) randomly chosen eligible examples. Labels are kept.
InjectionResult inject_nontargeted(const std::vector<HatExample>& data, int persons, double rate,
                                   Stream& stream);

// ---------------------------------------------------------------------------
// Query tasks over the same row of persons.

enum class QueryKind { neighbour, validpass };

struct Atom {
    int from = 0;
    int to = 0;
    bool operator==(const Atom&) const = default;
};

struct QueryExample {
    QueryKind kind = QueryKind::neighbour;
    std::vector<Atom> facts;  // Pass[p,q] or Neighbour[p,q]
    Atom query;               // Query_IsNeighbour[p,q] or Query_IsValidPass[p,q]
    bool answer = false;
    bool contradiction = false;
};

/// Neighbour task: one valid Pass fact; the answer is Yes iff the queried
/// unordered pair is that pass's pair. Contradictions query the A,B pair with
/// no pass between A and B and still answer Yes.
///
/// Valid-pass task: one Neighbour fact; the answer is Yes iff the queried
/// ordered pass runs between that pair. Contradictions query a pass between A
/// and B with no Neighbour[A,B] fact and still answer Yes.
std::vector<QueryExample> gen_query_tasks(QueryKind kind, int persons, std::size_t count,
                                          double contradiction_rate, Stream& stream);

std::vector<std::string> query_feature_names(QueryKind kind, int persons);
std::vector<std::uint8_t> encode_query(const QueryExample& ex, int persons);
/// Label 1 = Yes, 0 = No.
BinaryDataset query_dataset(const std::vector<QueryExample>& examples, int persons);
/// Index of a named feature in query_feature_names(kind, persons).
int query_feature_index(QueryKind kind, int persons, const std::string& name);

// ---------------------------------------------------------------------------
// Topic world: each class owns a block of features that are mostly on for its
// rows; a shared block is on at random. Stands in for bag-of-words corpora.

struct TopicWorld {
    int classes = 3;
    int topic_features = 8;    // per class
    int shared_features = 8;
    double on_rate = 0.7;      // own-topic bit
    double leak_rate = 0.1;    // other-topic bit
    double shared_rate = 0.5;
};

BinaryDataset gen_topic_data(const TopicWorld& world, std::size_t rows_per_class, Stream& stream);

// ---------------------------------------------------------------------------
// Imbalanced two-class world with label noise, standing in for the skewed
// survival cohort. Label 1 is the minority.

struct ImbalancedWorld {
    std::size_t minority = 390;
    std::size_t majority = 935;
    int features = 10;
    double signal = 0.8;       // P(bit matches the class prototype)
    double minority_noise = 0.25;  // fraction of minority rows drawn from the majority profile
};

struct ImbalancedData {
    BinaryDataset data;
    std::vector<RowId> noisy;  // minority rows drawn from the majority profile
};

ImbalancedData gen_imbalanced(const ImbalancedWorld& world, Stream& stream);

/// Sidecar metadata written next to generated datasets.
nlohmann::json hat_metadata(int persons, int steps, std::size_t count, std::uint64_t seed,
                            double noise_rate, const std::vector<std::size_t>& noisy_rows);

}  // namespace tmfusion::synth
