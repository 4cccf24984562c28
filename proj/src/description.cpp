#include "tmfusion/description.hpp"

#include <algorithm>
#include <sstream>

#include "tmfusion/errors.hpp"

namespace tmfusion {

namespace {

int polarity_rank(Polarity p) { return p == Polarity::positive ? 0 : 1; }

void canonicalize(GlobalDescription& g) {
    auto class_pos = [&](Label y) {
        return std::find(g.classes.begin(), g.classes.end(), y) - g.classes.begin();
    };
    std::stable_sort(g.records.begin(), g.records.end(), [&](const auto& a, const auto& b) {
        if (a.cls != b.cls) return class_pos(a.cls) < class_pos(b.cls);
        if (a.polarity != b.polarity) return polarity_rank(a.polarity) < polarity_rank(b.polarity);
        if (a.literals != b.literals) return a.literals < b.literals;
        return a.weight > b.weight;
    });
}

}  // namespace

std::vector<const ClauseRecord*> GlobalDescription::group(Label cls, Polarity polarity) const {
    std::vector<const ClauseRecord*> out;
    for (const auto& r : records)
        if (r.cls == cls && r.polarity == polarity) out.push_back(&r);
    return out;
}

std::string GlobalDescription::literal_name(int literal) const {
    const auto f = static_cast<int>(num_features);
    const int k = literal < f ? literal : literal - f;
    std::string name = k < static_cast<int>(feature_names.size()) ? feature_names[k]
                                                                   : "x" + std::to_string(k);
    return literal < f ? name : "NOT " + name;
}

std::string GlobalDescription::render(const ClauseRecord& record) const {
    if (record.empty()) return "<empty>";
    std::string out;
    for (std::size_t i = 0; i < record.literals.size(); ++i) {
        if (i) out += " AND ";
        out += literal_name(record.literals[i]);
    }
    return out;
}

GlobalDescription global_description(const TMClassifier& model) {
    GlobalDescription g;
    g.num_features = model.num_features();
    g.classes = model.classes();
    g.feature_names = model.feature_names();
    g.params_fingerprint = model.params().fingerprint();
    for (std::size_t c = 0; c < model.num_classes(); ++c) {
        for (const auto& clause : model.pool(c)) {
            g.records.push_back(
                {model.classes()[c], clause.polarity(), clause.included_literals(), clause.weight()});
        }
    }
    canonicalize(g);
    return g;
}

nlohmann::json to_json(const GlobalDescription& g) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : g.records) {
        records.push_back({{"class", r.cls},
                           {"polarity", r.polarity == Polarity::positive ? "+" : "-"},
                           {"literals", r.literals},
                           {"weight", r.weight},
                           {"empty", r.empty()},
                           {"text", g.render(r)}});
    }
    return {{"num_features", g.num_features},
            {"classes", g.classes},
            {"feature_names", g.feature_names},
            {"params", g.params_fingerprint},
            {"records", records}};
}

GlobalDescription description_from_json(const nlohmann::json& j) {
    try {
        GlobalDescription g;
        g.num_features = j.at("num_features").get<std::size_t>();
        g.classes = j.at("classes").get<std::vector<Label>>();
        g.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        g.params_fingerprint = j.at("params").get<std::string>();
        for (const auto& r : j.at("records")) {
            ClauseRecord rec;
            rec.cls = r.at("class").get<Label>();
            rec.polarity = r.at("polarity").get<std::string>() == "+" ? Polarity::positive
                                                                     : Polarity::negative;
            rec.literals = r.at("literals").get<std::vector<int>>();
            rec.weight = r.at("weight").get<int>();
            std::sort(rec.literals.begin(), rec.literals.end());
            g.records.push_back(std::move(rec));
        }
        canonicalize(g);
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed description: ") + e.what());
    }
}

std::string render_table(const GlobalDescription& g) {
    std::ostringstream out;
    for (auto cls : g.classes) {
        out << "Class " << cls << '\n';
        for (auto pol : {Polarity::positive, Polarity::negative}) {
            int idx = 0;
            for (const auto* r : g.group(cls, pol)) {
                out << "  " << (pol == Polarity::positive ? "+" : "-") << "ve #" << idx++ << "  w="
                    << r->weight << "  " << g.render(*r) << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace tmfusion
