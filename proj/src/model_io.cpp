#include "tmfusion/model_io.hpp"

#include <fstream>
#include <sstream>

#include "tmfusion/errors.hpp"

namespace tmfusion {

nlohmann::json params_to_json(const HyperParams& p) {
    return {{"clauses_per_class", p.clauses_per_class},
            {"threshold", p.threshold},
            {"specificity", p.specificity},
            {"ta_states", p.ta_states},
            {"boost_true_positives", p.boost_true_positives},
            {"epochs", p.epochs},
            {"seed", p.seed}};
}

HyperParams params_from_json(const nlohmann::json& j) {
    HyperParams p;
    p.clauses_per_class = j.at("clauses_per_class").get<int>();
    p.threshold = j.at("threshold").get<int>();
    p.specificity = j.at("specificity").get<double>();
    p.ta_states = j.at("ta_states").get<int>();
    p.boost_true_positives = j.at("boost_true_positives").get<bool>();
    p.epochs = j.at("epochs").get<int>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

nlohmann::json model_to_json(const TMClassifier& model) {
    nlohmann::json clauses = nlohmann::json::array();
    for (std::size_t c = 0; c < model.num_classes(); ++c) {
        for (const auto& clause : model.pool(c)) {
            clauses.push_back({{"class", model.classes()[c]},
                               {"polarity", clause.polarity() == Polarity::positive ? 1 : -1},
                               {"weight", clause.weight()},
                               {"states", clause.states()}});
        }
    }
    return {{"format_version", kModelFormatVersion},
            {"hyperparams", params_to_json(model.params())},
            {"classes", model.classes()},
            {"num_features", model.num_features()},
            {"feature_names", model.feature_names()},
            {"clauses", clauses}};
}

TMClassifier model_from_json(const nlohmann::json& doc) {
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw FormatError("unsupported model format_version " + std::to_string(version));
        auto params = params_from_json(doc.at("hyperparams"));
        auto classes = doc.at("classes").get<std::vector<Label>>();
        const auto f = doc.at("num_features").get<std::size_t>();
        TMClassifier model(params, f, classes);
        if (doc.contains("feature_names"))
            model.set_feature_names(doc.at("feature_names").get<std::vector<std::string>>());

        const auto& clauses = doc.at("clauses");
        const auto m = static_cast<std::size_t>(params.clauses_per_class);
        if (clauses.size() != m * classes.size())
            throw FormatError("model lists " + std::to_string(clauses.size()) +
                              " clauses, expected " + std::to_string(m * classes.size()));
        for (std::size_t i = 0; i < clauses.size(); ++i) {
            const auto& rec = clauses[i];
            const std::size_t c = i / m;
            auto& clause = model.pool(c)[i % m];
            if (rec.at("class").get<Label>() != classes[c])
                throw FormatError("clause " + std::to_string(i) + " is out of pool order");
            const int pol = rec.at("polarity").get<int>();
            if (pol != (clause.polarity() == Polarity::positive ? 1 : -1))
                throw FormatError("clause " + std::to_string(i) + " has the wrong polarity");
            const int w = rec.at("weight").get<int>();
            if (w < 1) throw FormatError("clause " + std::to_string(i) + " has weight below 1");
            clause.set_weight(w);
            auto states = rec.at("states").get<std::vector<int>>();
            if (states.size() != 2 * f)
                throw FormatError("clause " + std::to_string(i) + " has " +
                                  std::to_string(states.size()) + " states, expected " +
                                  std::to_string(2 * f));
            for (std::size_t k = 0; k < states.size(); ++k) {
                if (states[k] < 1 || states[k] > 2 * params.ta_states)
                    throw FormatError("clause " + std::to_string(i) + " state out of range");
                clause.set_state(k, states[k]);
            }
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed model: ") + e.what());
    }
}

std::string serialize_model(const TMClassifier& model) { return model_to_json(model).dump(1) + "\n"; }

TMClassifier deserialize_model(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("model is not valid JSON: ") + e.what());
    }
    return model_from_json(doc);
}

void save_model(const TMClassifier& model, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_model(model));
}

TMClassifier load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open model " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return deserialize_model(ss.str());
}

}  // namespace tmfusion
