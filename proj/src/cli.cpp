#include "tmfusion/cli.hpp"

#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "CLI11.hpp"

#include "tmfusion/booleanize.hpp"
#include "tmfusion/description.hpp"
#include "tmfusion/errors.hpp"
#include "tmfusion/fusion.hpp"
#include "tmfusion/metrics.hpp"
#include "tmfusion/model_io.hpp"
#include "tmfusion/sampling.hpp"
#include "tmfusion/synthgen.hpp"

namespace tmfusion::cli {

namespace {

using nlohmann::json;

template <typename Config, typename F>
void for_each_field(Config& c, F&& f) {
    f("clauses", c.params.clauses_per_class);
    f("threshold", c.params.threshold);
    f("specificity", c.params.specificity);
    f("states", c.params.ta_states);
    f("epochs", c.params.epochs);
    f("seed", c.params.seed);
    f("boost", c.params.boost_true_positives);
    f("data", c.data);
    f("eval", c.eval_data);
    f("input", c.input);
    f("model", c.model);
    f("model_b", c.model_b);
    f("out", c.out);
    f("task", c.task);
    f("count", c.count);
    f("persons", c.persons);
    f("steps", c.steps);
    f("noise", c.noise);
    f("contradiction_rate", c.contradiction_rate);
    f("method", c.method);
    f("bins", c.bins);
    f("vocab", c.vocab);
    f("fit_on", c.fit_on);
    f("spec_in", c.spec_in);
    f("spec_out", c.spec_out);
    f("theta", c.theta);
    f("match_threshold", c.match_threshold);
    f("weight_ratio", c.weight_ratio);
    f("cuts", c.cuts);
    f("cut_fraction", c.cut_fraction);
    f("remove", c.remove);
    f("strategy", c.strategy);
    f("folds", c.folds);
    f("repeats", c.repeats);
    f("ratio", c.ratio);
    f("neighbors", c.neighbors);
}

const std::set<std::string> kHyperparamKeys = {"clauses", "threshold", "specificity", "states",
                                               "epochs",  "seed",      "boost"};

template <typename T>
bool matches_type(const json& v) {
    if constexpr (std::is_same_v<T, bool>) return v.is_boolean();
    else if constexpr (std::is_unsigned_v<T>) return v.is_number_unsigned();
    else if constexpr (std::is_integral_v<T>) return v.is_number_integer();
    else if constexpr (std::is_floating_point_v<T>) return v.is_number();
    else return v.is_string();
}

template <typename T>
const char* type_name() {
    if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_unsigned_v<T>) return "a non-negative integer";
    else if constexpr (std::is_integral_v<T>) return "an integer";
    else if constexpr (std::is_floating_point_v<T>) return "a number";
    else return "a string";
}

/// Missing required input or an unknown choice; reported as a usage error.
class UsageError : public Error {
public:
    using Error::Error;
};

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::filesystem::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

/// Context shared by every subcommand.
struct Run {
    RunConfig cfg;
    std::set<std::string> explicit_keys;  // set by the config file or a flag
    std::ostream& out;

    json stamp() const { return {{"tool_version", kToolVersion}, {"config", to_json(cfg)}}; }

    void write_json(const std::string& path, json doc) const {
        const json s = stamp();
        for (const auto& [k, v] : s.items()) doc[k] = v;
        write_file_atomic(path, doc.dump(1) + "\n");
    }

    /// Report to --out when given, otherwise to stdout.
    void emit(json doc) const {
        if (cfg.out.empty()) {
            out << doc.dump(1) << "\n";
        } else {
            write_json(cfg.out, std::move(doc));
        }
    }

    void write_dataset(const BinaryDataset& d, json meta) const {
        d.write_csv(std::filesystem::path(cfg.out));
        meta["rows"] = d.size();
        meta["features"] = d.num_features();
        write_json(cfg.out + ".meta.json", std::move(meta));
    }

    void save(const TMClassifier& model) const { write_json(cfg.out, model_to_json(model)); }

    Stream stream(std::string_view stage) const { return Stream(cfg.params.seed).split(stage); }
};

// ---------------------------------------------------------------------------

int run_gen(const Run& r) {
    const auto& c = r.cfg;
    require(c.out, "--out");
    Stream gen = r.stream("gen");
    BinaryDataset d;
    json meta;
    if (c.task == "hat") {
        auto examples = synth::gen_hat_data(c.count, c.persons, c.steps, gen);
        std::vector<std::size_t> modified;
        if (c.noise > 0.0) {
            Stream inject = r.stream("inject");
            auto injected = synth::inject_nontargeted(examples, c.persons, c.noise, inject);
            examples = std::move(injected.data);
            modified = std::move(injected.modified);
        }
        d = synth::hat_dataset(examples, c.persons, c.steps);
        meta = synth::hat_metadata(c.persons, c.steps, c.count, c.params.seed, c.noise, modified);
    } else if (c.task == "query-neighbour" || c.task == "query-validpass") {
        const auto kind = c.task == "query-neighbour" ? synth::QueryKind::neighbour : synth::QueryKind::validpass;
        auto examples = synth::gen_query_tasks(kind, c.persons, c.count, c.contradiction_rate, gen);
        std::vector<std::size_t> contradictions;
        for (std::size_t i = 0; i < examples.size(); ++i)
            if (examples[i].contradiction) contradictions.push_back(i);
        d = synth::query_dataset(examples, c.persons);
        meta = {{"task", c.task},
                {"persons", c.persons},
                {"contradiction_rate", c.contradiction_rate},
                {"contradiction_rows", contradictions}};
    } else if (c.task == "topic") {
        synth::TopicWorld world;
        d = synth::gen_topic_data(world, c.count, gen);
        meta = {{"task", "topic"}, {"classes", world.classes}, {"rows_per_class", c.count}};
    } else if (c.task == "imbalanced") {
        synth::ImbalancedWorld world;
        auto data = synth::gen_imbalanced(world, gen);
        d = std::move(data.data);
        meta = {{"task", "imbalanced"},
                {"minority", world.minority},
                {"majority", world.majority},
                {"noisy_rows", data.noisy}};
    } else {
        throw UsageError("unknown task '" + c.task + "' (hat, query-neighbour, query-validpass, topic, imbalanced)");
    }
    r.write_dataset(d, meta);
    r.out << "wrote " << d.size() << " rows x " << d.num_features() << " features to " << c.out << "\n";
    return 0;
}

std::vector<std::pair<Label, std::vector<std::string>>> read_documents(const std::string& path) {
    // One document per line: label, a tab, then the text.
    std::istringstream in(read_text(path));
    std::vector<std::pair<Label, std::vector<std::string>>> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw FormatError(path + ":" + std::to_string(lineno) + ": expected 'label<TAB>text'");
        try {
            docs.emplace_back(std::stoi(line.substr(0, tab)), tokenize(line.substr(tab + 1)));
        } catch (const std::logic_error&) {
            throw FormatError(path + ":" + std::to_string(lineno) + ": bad label");
        }
    }
    return docs;
}

int run_binarize(const Run& r) {
    const auto& c = r.cfg;
    require(c.input, "--input");
    require(c.out, "--out");
    const std::string fit_path = c.fit_on.empty() ? c.input : c.fit_on;
    BinaryDataset d;
    json fitted;
    if (c.method == "bins") {
        const auto raw = NumericTable::read_csv(std::filesystem::path(c.input));
        const auto spec = c.spec_in.empty()
                              ? fit_percentile_bins(NumericTable::read_csv(std::filesystem::path(fit_path)),
                                                    static_cast<std::size_t>(c.bins))
                              : binning_from_json(read_json(c.spec_in));
        d = apply_bins(spec, raw);
        fitted = to_json(spec);
    } else if (c.method == "mean") {
        const auto raw = NumericTable::read_csv(std::filesystem::path(c.input));
        const auto stats = c.spec_in.empty()
                               ? fit_population_stats(NumericTable::read_csv(std::filesystem::path(fit_path)))
                               : stats_from_json(read_json(c.spec_in));
        d = mean_threshold_binarize(raw, stats);
        fitted = to_json(stats);
    } else if (c.method == "bow") {
        auto split = [](const auto& docs) {
            std::vector<std::vector<std::string>> tokens;
            std::vector<Label> labels;
            for (const auto& [y, t] : docs) {
                labels.push_back(y);
                tokens.push_back(t);
            }
            return std::pair{tokens, labels};
        };
        const auto [tokens, labels] = split(read_documents(c.input));
        Vocabulary vocab;
        if (c.spec_in.empty()) {
            const auto fit_tokens = split(read_documents(fit_path)).first;
            vocab = fit_vocabulary(fit_tokens, c.vocab);
        } else {
            vocab = vocabulary_from_json(read_json(c.spec_in));
        }
        d = bow_binarize(tokens, labels, vocab);
        fitted = to_json(vocab);
    } else {
        throw UsageError("unknown method '" + c.method + "' (bins, mean, bow)");
    }
    if (!c.spec_out.empty()) r.write_json(c.spec_out, fitted);
    r.write_dataset(d, {{"method", c.method}, {"source", c.input}});
    r.out << "wrote " << d.size() << " rows x " << d.num_features() << " features to " << c.out << "\n";
    return 0;
}

BinaryDataset load_data(const std::string& path) { return BinaryDataset::read_csv(std::filesystem::path(path)); }

int run_train(const Run& r) {
    const auto& c = r.cfg;
    require(c.data, "--data");
    require(c.out, "--out");
    const auto data = load_data(c.data);
    const auto model = train_model(c.params, data, data.classes(), r.stream("train"));
    r.save(model);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) correct += classify(model, data.row(i)) == data.label(i);
    r.out << "trained on " << data.size() << " rows, training accuracy " << std::fixed << std::setprecision(4)
          << static_cast<double>(correct) / static_cast<double>(data.size()) << "; model written to " << c.out
          << "\n";
    return 0;
}

int run_eval(const Run& r) {
    const auto& c = r.cfg;
    require(c.model, "--model");
    require(c.data, "--data");
    const auto model = load_model(c.model);
    const auto data = load_data(c.data);
    std::vector<Label> predicted;
    for (std::size_t i = 0; i < data.size(); ++i) predicted.push_back(classify(model, data.row(i)));
    const auto cm = confusion_matrix(data.labels(), predicted);
    const auto s = score(cm);
    r.emit({{"rows", data.size()}, {"scores", to_json(s)}, {"confusion", to_json(cm)}});
    if (!c.out.empty()) {
        r.out << std::fixed << std::setprecision(4) << "accuracy " << s.accuracy << "  precision " << s.precision
              << "  recall " << s.recall << "  f1 " << s.f1 << "\n";
    }
    return 0;
}

int run_trace(const Run& r) {
    const auto& c = r.cfg;
    require(c.model, "--model");
    require(c.data, "--data");
    const auto model = load_model(c.model);
    const auto data = load_data(c.data);
    json rows = json::array();
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto t = decision_trace(model, data.row(i));
        json row = {{"row", data.row_id(i)},
                    {"truth", data.label(i)},
                    {"predicted", t.predicted},
                    {"clause_cnt", t.clause_cnt},
                    {"positive_cnt", t.positive_cnt},
                    {"clause_sum", t.clause_sum}};
        if (t.asd) row["asd"] = *t.asd;
        rows.push_back(std::move(row));
    }
    json doc = {{"classes", model.classes()}, {"rows", rows}};
    if (model.num_classes() == 2) {
        const auto groups = compatibility_report(model, data);
        doc["groups"] = to_json(groups);
        doc["mean_asd"] = mean_asd(model, data);
        if (!c.out.empty()) r.out << render_table(groups);
    }
    r.emit(std::move(doc));
    return 0;
}

int run_compare(const Run& r) {
    const auto& c = r.cfg;
    require(c.model, "--model-a");
    require(c.model_b, "--model-b");
    const auto ga = global_description(load_model(c.model));
    const auto gb = global_description(load_model(c.model_b));
    const auto similarity = description_overlap(ga, gb);
    const auto change = detect_change(ga, gb, c.theta, {c.match_threshold, c.weight_ratio});
    r.emit({{"similarity", to_json(similarity, ga)}, {"change", to_json(change, ga, gb)}});
    if (!c.out.empty()) {
        r.out << "overlap " << std::fixed << std::setprecision(4) << similarity.overall << "  changed "
              << (change.changed ? "true" : "false") << "  new patterns " << change.new_literal_patterns.size()
              << "\n";
    }
    return 0;
}

/// Hyperparameters for retraining: the baseline model's, with any key the
/// user set explicitly taking precedence.
HyperParams retrain_params(const Run& r, const HyperParams& base) {
    HyperParams p = base;
    const auto& c = r.cfg.params;
    const auto& k = r.explicit_keys;
    if (k.count("clauses")) p.clauses_per_class = c.clauses_per_class;
    if (k.count("threshold")) p.threshold = c.threshold;
    if (k.count("specificity")) p.specificity = c.specificity;
    if (k.count("states")) p.ta_states = c.ta_states;
    if (k.count("epochs")) p.epochs = c.epochs;
    if (k.count("seed")) p.seed = c.seed;
    if (k.count("boost")) p.boost_true_positives = c.boost_true_positives;
    p.validate();
    return p;
}

int run_cuts(const Run& r) {
    const auto& c = r.cfg;
    require(c.model, "--model");
    require(c.data, "--data");
    const auto baseline = load_model(c.model);
    const auto data = load_data(c.data);
    const auto params = retrain_params(r, baseline.params());
    const auto report = localize_inconsistencies(global_description(baseline), data, params,
                                                 {c.cuts, c.remove, c.cut_fraction}, r.stream("cuts"));
    r.emit(to_json(report));
    if (!c.out.empty()) r.out << render_table(report);
    return 0;
}

int run_grade(const Run& r) {
    const auto& c = r.cfg;
    require(c.data, "--data");
    const auto data = load_data(c.data);
    const auto plan = stratified_kfold(data, c.folds, c.repeats, r.stream("folds"));
    std::optional<BinaryDataset> evaluation;
    if (!c.eval_data.empty()) evaluation = load_data(c.eval_data);
    const auto grades = grade_splits(plan, data, c.params, r.stream("grade"), evaluation ? &*evaluation : nullptr);
    r.emit({{"plan", to_json(plan)}, {"grades", to_json(grades)}});
    if (!c.out.empty()) {
        for (const auto& g : grades)
            r.out << "subset " << std::setw(3) << g.subset_id << "  mean ASD " << std::fixed << std::setprecision(3)
                  << g.asd << "\n";
    }
    return 0;
}

int run_oversample(const Run& r) {
    const auto& c = r.cfg;
    require(c.data, "--data");
    require(c.out, "--out");
    const auto data = load_data(c.data);
    OversampleKind kind;
    try {
        kind = parse_oversample_kind(c.strategy);
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    const auto result = informed_oversample(data, c.params, {kind, c.ratio, c.neighbors}, c.folds, c.repeats,
                                            r.stream("oversample"));
    r.write_dataset(result.data, {{"strategy", c.strategy},
                                  {"source", c.data},
                                  {"grades", to_json(result.grades)},
                                  {"donor_subsets", result.donor_subsets}});
    r.out << "wrote " << result.data.size() << " rows (" << data.size() << " in) to " << c.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct Binding {
    CLI::Option* option;
    std::string key;
};

struct Command {
    CLI::App* app;
    std::vector<Binding> bindings;
    CLI::Option* config = nullptr;
    std::function<int(const Run&)> run;
};

class Builder {
public:
    Builder(CLI::App& root, RunConfig& flags, std::vector<Command>& commands)
        : root_(root), flags_(flags), commands_(commands) {}

    Builder& command(const char* name, const char* help, std::function<int(const Run&)> run) {
        auto* app = root_.add_subcommand(name, help);
        commands_.push_back({app, {}, nullptr, std::move(run)});
        commands_.back().config = app->add_option("--config", config_path_, "JSON config file; flags override it");
        return *this;
    }

    template <typename T>
    Builder& opt(const char* flag, const char* key, T& target, const char* help) {
        auto* o = current().app->add_option(flag, target, help);
        current().bindings.push_back({o, key});
        return *this;
    }

    Builder& flag(const char* name, const char* key, bool& target, const char* help) {
        auto* o = current().app->add_flag(name, target, help);
        current().bindings.push_back({o, key});
        return *this;
    }

    Builder& hyperparams() {
        auto& p = flags_.params;
        return opt("--clauses", "clauses", p.clauses_per_class, "clauses per class (even)")
            .opt("--threshold", "threshold", p.threshold, "voting target T")
            .opt("--specificity", "specificity", p.specificity, "specificity s (> 1)")
            .opt("--states", "states", p.ta_states, "automaton states per action N")
            .opt("--epochs", "epochs", p.epochs, "training epochs")
            .flag("--boost", "boost", p.boost_true_positives, "boost true-positive feedback");
    }

    Builder& seed() { return opt("--seed", "seed", flags_.params.seed, "random seed"); }

    const std::string& config_path() const { return config_path_; }

private:
    Command& current() { return commands_.back(); }

    CLI::App& root_;
    RunConfig& flags_;
    std::vector<Command>& commands_;
    std::string config_path_;
};

}  // namespace

json to_json(const RunConfig& cfg) {
    json j = json::object();
    RunConfig copy = cfg;
    for_each_field(copy, [&](const char* key, auto& value) { j[key] = value; });
    return j;
}

RunConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig cfg;
    std::set<std::string> known;
    for_each_field(cfg, [&](const char* key, auto& value) {
        known.insert(key);
        auto it = j.find(key);
        if (it == j.end()) return;
        using T = std::decay_t<decltype(value)>;
        if (!matches_type<T>(*it))
            throw ConfigError(std::string("config key '") + key + "' must be " + type_name<T>());
        value = it->template get<T>();
    });
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    cfg.params.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return config_from_json(j);
}

int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tsetlin machine training, inspection and data-fusion tools", "tmfusion"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    RunConfig flags;
    std::vector<Command> commands;
    Builder b(app, flags, commands);

    b.command("gen", "generate a synthetic dataset", run_gen)
        .opt("--task", "task", flags.task, "hat | query-neighbour | query-validpass | topic | imbalanced")
        .opt("--count", "count", flags.count, "examples (rows per class for topic)")
        .opt("--persons", "persons", flags.persons, "persons in the row (hat, query)")
        .opt("--steps", "steps", flags.steps, "steps per example (hat)")
        .opt("--noise", "noise", flags.noise, "fraction of examples given an invalid end-person pass (hat)")
        .opt("--contradiction-rate", "contradiction_rate", flags.contradiction_rate, "contradicting examples (query)")
        .seed()
        .opt("--out", "out", flags.out, "output CSV; metadata goes to <out>.meta.json");

    b.command("binarize", "turn raw data into binary features", run_binarize)
        .opt("--method", "method", flags.method, "bins | mean | bow")
        .opt("--input", "input", flags.input, "numeric CSV, or label<TAB>text lines for bow")
        .opt("--fit-on", "fit_on", flags.fit_on, "training file to fit on (default: --input)")
        .opt("--spec-in", "spec_in", flags.spec_in, "reuse a fitted spec instead of fitting")
        .opt("--spec-out", "spec_out", flags.spec_out, "write the fitted spec")
        .opt("--bins", "bins", flags.bins, "percentile bins per feature")
        .opt("--vocab", "vocab", flags.vocab, "vocabulary size for bow")
        .opt("--out", "out", flags.out, "output binary CSV");

    b.command("train", "fit a model", run_train)
        .opt("--data", "data", flags.data, "binary CSV")
        .hyperparams()
        .seed()
        .opt("--out", "out", flags.out, "model file");

    b.command("eval", "accuracy, precision, recall and F1 of a model", run_eval)
        .opt("--model", "model", flags.model, "model file")
        .opt("--data", "data", flags.data, "binary CSV")
        .opt("--out", "out", flags.out, "report file (default: stdout)");

    b.command("trace", "per-row decision statistics", run_trace)
        .opt("--model", "model", flags.model, "model file")
        .opt("--data", "data", flags.data, "binary CSV")
        .opt("--out", "out", flags.out, "report file (default: stdout)");

    b.command("compare", "compare the clauses of two models", run_compare)
        .opt("--model-a", "model", flags.model, "baseline model")
        .opt("--model-b", "model_b", flags.model_b, "new model")
        .opt("--theta", "theta", flags.theta, "overlap below this counts as a change")
        .opt("--match-threshold", "match_threshold", flags.match_threshold, "Jaccard needed to match a clause")
        .opt("--weight-ratio", "weight_ratio", flags.weight_ratio, "weight factor reported as a shift")
        .opt("--out", "out", flags.out, "report file (default: stdout)");

    b.command("cuts", "localize inconsistent data with overlapping cuts", run_cuts)
        .opt("--model", "model", flags.model, "baseline model")
        .opt("--data", "data", flags.data, "new binary CSV")
        .opt("--cuts", "cuts", flags.cuts, "number of cuts")
        .opt("--cut-fraction", "cut_fraction", flags.cut_fraction, "fraction of rows per cut")
        .opt("--remove", "remove", flags.remove, "lowest-scoring cuts tried for removal")
        .hyperparams()
        .seed()
        .opt("--out", "out", flags.out, "report file (default: stdout)");

    b.command("grade", "train on stratified subsets and rank them by ASD", run_grade)
        .opt("--data", "data", flags.data, "two-class binary CSV")
        .opt("--eval", "eval", flags.eval_data, "score on this file instead of each subset's complement")
        .opt("--folds", "folds", flags.folds, "folds per repeat")
        .opt("--repeats", "repeats", flags.repeats, "repeats")
        .hyperparams()
        .seed()
        .opt("--out", "out", flags.out, "report file (default: stdout)");

    b.command("oversample", "rebalance a two-class dataset", run_oversample)
        .opt("--data", "data", flags.data, "two-class binary CSV")
        .opt("--strategy", "strategy", flags.strategy,
             "none | random-smote | max-asd | top25-asd | drop-min-asd | drop-bottom25-asd")
        .opt("--ratio", "ratio", flags.ratio, "target minority/majority ratio")
        .opt("--neighbors", "neighbors", flags.neighbors, "nearest neighbours for SMOTE")
        .opt("--folds", "folds", flags.folds, "folds per repeat")
        .opt("--repeats", "repeats", flags.repeats, "repeats")
        .hyperparams()
        .seed()
        .opt("--out", "out", flags.out, "output CSV");

    std::vector<const char*> args;
    for (const auto& a : argv) args.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(args.size()), args.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    for (const auto& cmd : commands) {
        if (!cmd.app->parsed()) continue;
        try {
            json merged = to_json(RunConfig{});
            std::set<std::string> explicit_keys;
            if (cmd.config->count()) {
                const json file = to_json(load_config(b.config_path()));
                const json raw = read_json(b.config_path());
                for (const auto& [key, _] : raw.items()) explicit_keys.insert(key);
                merged = file;
            }
            const json given = to_json(flags);
            for (const auto& binding : cmd.bindings) {
                if (binding.option->count() == 0) continue;
                merged[binding.key] = given[binding.key];
                explicit_keys.insert(binding.key);
            }
            Run run{config_from_json(merged), std::move(explicit_keys), out};
            return cmd.run(run);
        } catch (const UsageError& e) {
            err << "error: " << e.what() << "\n" << cmd.app->help();
            return 2;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 2;
}

}  // namespace tmfusion::cli
