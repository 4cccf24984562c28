#include "tmfusion/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tmfusion/errors.hpp"

namespace tmfusion::synth {

namespace {

constexpr int kActions = 3;

void check_world(int persons, int steps) {
    if (persons < 2 || persons > 4)
        throw ParameterError("persons must be between 2 and 4, got " + std::to_string(persons));
    if (steps < 1 || steps > 3)
        throw ParameterError("steps must be between 1 and 3, got " + std::to_string(steps));
}

std::vector<Action> valid_actions(int owner, int persons) {
    std::vector<Action> out;
    if (owner < persons - 1) out.push_back(Action::right);
    if (owner > 0) out.push_back(Action::left);
    out.push_back(Action::nothing);
    return out;
}

int apply(int owner, Action a) {
    switch (a) {
        case Action::right: return owner + 1;
        case Action::left: return owner - 1;
        case Action::nothing: return owner;
    }
    return owner;
}

}  // namespace

OwnerResult simulate_final_owner(const std::vector<Step>& steps, int persons) {
    if (steps.empty()) throw ParameterError("a hat chain needs at least one step");
    for (const auto& s : steps) {
        if (s.actor < 0 || s.actor >= persons)
            throw ParameterError("person index " + std::to_string(s.actor) + " out of range");
    }
    OwnerResult r{steps.front().actor, true};
    for (const auto& s : steps) {
        if (s.actor != r.owner) {
            r.consistent = false;
            continue;
        }
        const int next = apply(r.owner, s.action);
        if (next < 0 || next >= persons) {
            r.consistent = false;
            continue;
        }
        r.owner = next;
    }
    return r;
}

std::vector<HatExample> gen_hat_data(std::size_t count, int persons, int steps, Stream& stream) {
    check_world(persons, steps);
    std::vector<HatExample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        HatExample ex;
        int owner = static_cast<int>(stream.below(static_cast<std::uint64_t>(persons)));
        for (int t = 0; t < steps; ++t) {
            auto options = valid_actions(owner, persons);
            const Action a = options[stream.below(options.size())];
            ex.steps.push_back({owner, a});
            owner = apply(owner, a);
        }
        ex.label = owner;
        out.push_back(std::move(ex));
    }
    return out;
}

std::string person_name(int p) { return std::string(1, static_cast<char>('A' + p)); }

char action_code(Action a) {
    switch (a) {
        case Action::right: return 'R';
        case Action::left: return 'L';
        case Action::nothing: return 'N';
    }
    return '?';
}

std::vector<std::string> relational_feature_names(int persons, int steps) {
    check_world(persons, steps);
    std::vector<std::string> names;
    for (int t = 0; t < steps; ++t)
        for (int p = 0; p < persons; ++p)
            for (int a = 0; a < kActions; ++a)
                names.push_back("T" + std::to_string(t) + "_" + person_name(p) + "," +
                                action_code(static_cast<Action>(a)));
    return names;
}

std::vector<std::uint8_t> encode_relational(const HatExample& ex, int persons, int steps) {
    check_world(persons, steps);
    if (static_cast<int>(ex.steps.size()) != steps)
        throw DimensionError("example has " + std::to_string(ex.steps.size()) +
                             " steps, world has " + std::to_string(steps));
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(steps * persons * kActions), 0);
    for (int t = 0; t < steps; ++t) {
        const auto& s = ex.steps[t];
        if (s.actor < 0 || s.actor >= persons)
            throw DimensionError("actor " + std::to_string(s.actor) + " outside the world");
        bits[(t * persons + s.actor) * kActions + static_cast<int>(s.action)] = 1;
    }
    return bits;
}

BinaryDataset hat_dataset(const std::vector<HatExample>& examples, int persons, int steps) {
    BinaryDataset d(relational_feature_names(persons, steps));
    for (const auto& ex : examples) d.add_row(encode_relational(ex, persons, steps), ex.label);
    return d;
}

InjectionResult inject_nontargeted(const std::vector<HatExample>& data, int persons, double rate,
                                   Stream& stream) {
    if (!(rate >= 0.0 && rate <= 0.3))
        throw ParameterError("inconsistency rate must lie in [0, 0.3]");
    auto end_steps = [persons](const HatExample& ex) {
        std::vector<std::size_t> idx;
        for (std::size_t t = 0; t < ex.steps.size(); ++t) {
            const auto& s = ex.steps[t];
            if ((s.actor == 0 && s.action != Action::left) ||
                (s.actor == persons - 1 && s.action != Action::right))
                idx.push_back(t);
        }
        return idx;
    };

    InjectionResult result{data, {}};
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (!end_steps(data[i]).empty()) eligible.push_back(i);

    const auto wanted = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(data.size())));
    const std::size_t take = std::min(wanted, eligible.size());
    // Partial Fisher-Yates over the eligible positions.
    for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + static_cast<std::size_t>(stream.below(eligible.size() - i));
        std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(take);
    std::sort(eligible.begin(), eligible.end());
    for (auto i : eligible) {
        auto& ex = result.data[i];
        auto steps = end_steps(ex);
        auto& step = ex.steps[steps[stream.below(steps.size())]];
        step.action = step.actor == 0 ? Action::left : Action::right;
        ex.consistent = false;
    }
    result.modified = std::move(eligible);
    return result;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Atom> unordered_pairs(int persons) {
    std::vector<Atom> out;
    for (int p = 0; p < persons; ++p)
        for (int q = p + 1; q < persons; ++q) out.push_back({p, q});
    return out;
}

std::vector<Atom> ordered_pairs(int persons) {
    std::vector<Atom> out;
    for (int p = 0; p < persons; ++p)
        for (int q = 0; q < persons; ++q)
            if (p != q) out.push_back({p, q});
    return out;
}

bool same_pair(Atom a, Atom b) {
    return (a.from == b.from && a.to == b.to) || (a.from == b.to && a.to == b.from);
}

std::string atom_name(const std::string& rel, Atom a) {
    return rel + "[" + person_name(a.from) + "," + person_name(a.to) + "]";
}

QueryExample clean_query(QueryKind kind, int persons, Stream& stream) {
    QueryExample ex;
    ex.kind = kind;
    const int i = static_cast<int>(stream.below(static_cast<std::uint64_t>(persons - 1)));
    const Atom pair{i, i + 1};
    if (kind == QueryKind::neighbour) {
        ex.facts.push_back(stream.next() & 1U ? Atom{i, i + 1} : Atom{i + 1, i});
        if (stream.next() & 1U) {
            ex.query = pair;
        } else {
            auto pool = unordered_pairs(persons);
            std::erase_if(pool, [&](Atom a) { return same_pair(a, pair); });
            ex.query = pool[stream.below(pool.size())];
        }
    } else {
        ex.facts.push_back(pair);
        if (stream.next() & 1U) {
            ex.query = stream.next() & 1U ? Atom{i, i + 1} : Atom{i + 1, i};
        } else {
            auto pool = ordered_pairs(persons);
            std::erase_if(pool, [&](Atom a) { return same_pair(a, pair); });
            ex.query = pool[stream.below(pool.size())];
        }
    }
    ex.answer = same_pair(ex.query, pair);
    return ex;
}

QueryExample contradiction_query(QueryKind kind, int persons, Stream& stream) {
    QueryExample ex;
    ex.kind = kind;
    ex.contradiction = true;
    ex.answer = true;
    // Facts only about pairs other than (A,B).
    const int i = 1 + static_cast<int>(stream.below(static_cast<std::uint64_t>(persons - 2)));
    if (kind == QueryKind::neighbour) {
        ex.facts.push_back(stream.next() & 1U ? Atom{i, i + 1} : Atom{i + 1, i});
        ex.query = {0, 1};
    } else {
        ex.facts.push_back({i, i + 1});
        ex.query = stream.next() & 1U ? Atom{0, 1} : Atom{1, 0};
    }
    return ex;
}

}  // namespace

std::vector<QueryExample> gen_query_tasks(QueryKind kind, int persons, std::size_t count,
                                          double contradiction_rate, Stream& stream) {
    if (persons < 3 || persons > 4)
        throw ParameterError("query tasks need 3 or 4 persons, got " + std::to_string(persons));
    if (!(contradiction_rate >= 0.0 && contradiction_rate < 1.0))
        throw ParameterError("contradiction_rate must lie in [0, 1)");
    std::vector<QueryExample> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        if (stream.bernoulli(contradiction_rate))
            out.push_back(contradiction_query(kind, persons, stream));
        else
            out.push_back(clean_query(kind, persons, stream));
    }
    return out;
}

std::vector<std::string> query_feature_names(QueryKind kind, int persons) {
    std::vector<std::string> names;
    if (kind == QueryKind::neighbour) {
        for (auto a : ordered_pairs(persons)) names.push_back(atom_name("Pass", a));
        for (auto a : unordered_pairs(persons)) names.push_back(atom_name("Query_IsNeighbour", a));
    } else {
        for (auto a : unordered_pairs(persons)) names.push_back(atom_name("Neighbour", a));
        for (auto a : ordered_pairs(persons)) names.push_back(atom_name("Query_IsValidPass", a));
    }
    return names;
}

int query_feature_index(QueryKind kind, int persons, const std::string& name) {
    auto names = query_feature_names(kind, persons);
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw LookupError("no query feature named " + name);
    return static_cast<int>(it - names.begin());
}

std::vector<std::uint8_t> encode_query(const QueryExample& ex, int persons) {
    const auto names = query_feature_names(ex.kind, persons);
    std::vector<std::uint8_t> bits(names.size(), 0);
    auto set = [&](const std::string& n) {
        bits[static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin())] = 1;
    };
    const bool nb = ex.kind == QueryKind::neighbour;
    for (auto f : ex.facts) {
        Atom a = f;
        if (!nb && a.from > a.to) std::swap(a.from, a.to);
        set(atom_name(nb ? "Pass" : "Neighbour", a));
    }
    Atom q = ex.query;
    if (nb && q.from > q.to) std::swap(q.from, q.to);
    set(atom_name(nb ? "Query_IsNeighbour" : "Query_IsValidPass", q));
    return bits;
}

BinaryDataset query_dataset(const std::vector<QueryExample>& examples, int persons) {
    if (examples.empty()) throw ParameterError("no query examples");
    BinaryDataset d(query_feature_names(examples.front().kind, persons));
    for (const auto& ex : examples) d.add_row(encode_query(ex, persons), ex.answer ? 1 : 0);
    return d;
}

// ---------------------------------------------------------------------------

BinaryDataset gen_topic_data(const TopicWorld& w, std::size_t rows_per_class, Stream& stream) {
    if (w.classes < 2 || w.topic_features < 1 || w.shared_features < 0)
        throw ParameterError("topic world needs >= 2 classes and >= 1 feature per topic");
    std::vector<std::string> names;
    for (int c = 0; c < w.classes; ++c)
        for (int i = 0; i < w.topic_features; ++i)
            names.push_back("topic" + std::to_string(c) + "_" + std::to_string(i));
    for (int i = 0; i < w.shared_features; ++i) names.push_back("shared_" + std::to_string(i));
    BinaryDataset d(names);
    std::vector<std::uint8_t> bits(names.size());
    for (std::size_t r = 0; r < rows_per_class; ++r) {
        for (int c = 0; c < w.classes; ++c) {
            std::size_t k = 0;
            for (int t = 0; t < w.classes; ++t)
                for (int i = 0; i < w.topic_features; ++i)
                    bits[k++] = stream.bernoulli(t == c ? w.on_rate : w.leak_rate);
            for (int i = 0; i < w.shared_features; ++i) bits[k++] = stream.bernoulli(w.shared_rate);
            d.add_row(bits, c);
        }
    }
    return d;
}

ImbalancedData gen_imbalanced(const ImbalancedWorld& w, Stream& stream) {
    if (w.features < 2 || w.minority == 0 || w.majority == 0)
        throw ParameterError("imbalanced world needs >= 2 features and both classes");
    std::vector<std::string> names;
    for (int k = 0; k < w.features; ++k) names.push_back("x" + std::to_string(k));
    ImbalancedData out{BinaryDataset(names), {}};
    // Class prototypes: majority has the first half of the bits on, minority the rest.
    auto draw = [&](int profile) {
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(w.features));
        for (int k = 0; k < w.features; ++k) {
            const bool proto = (k < w.features / 2) == (profile == 0);
            bits[k] = stream.bernoulli(w.signal) ? proto : !proto;
        }
        return bits;
    };
    const std::size_t total = w.minority + w.majority;
    std::vector<int> labels(total, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(w.minority), 1);
    stream.shuffle(std::span(labels));
    for (auto y : labels) {
        int profile = y;
        if (y == 1 && stream.bernoulli(w.minority_noise)) {
            profile = 0;
            out.noisy.push_back(out.data.next_id());
        }
        out.data.add_row(draw(profile), y);
    }
    return out;
}

nlohmann::json hat_metadata(int persons, int steps, std::size_t count, std::uint64_t seed,
                            double noise_rate, const std::vector<std::size_t>& noisy_rows) {
    return {{"task", "hat"},
            {"persons", persons},
            {"steps", steps},
            {"count", count},
            {"seed", seed},
            {"noise_rate", noise_rate},
            {"noisy_rows", noisy_rows}};
}

}  // namespace tmfusion::synth
