#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "tmfusion/tsetlin.hpp"

namespace tmfusion::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Every setting a run can take. Keys in config files and the long flag
/// names are the same words (underscores in files, dashes on the command
/// line).
struct RunConfig {
    HyperParams params;

    std::string data;
    std::string eval_data;
    std::string input;
    std::string model;
    std::string model_b;
    std::string out;

    // gen
    std::string task = "hat";
    std::size_t count = 10000;
    int persons = 4;
    int steps = 3;
    double noise = 0.0;
    double contradiction_rate = 0.0;

    // binarize
    std::string method = "bins";
    int bins = 10;
    std::size_t vocab = 1000;
    std::string fit_on;
    std::string spec_in;
    std::string spec_out;

    // compare
    double theta = 0.5;
    double match_threshold = 0.5;
    double weight_ratio = 2.0;

    // cuts
    int cuts = 10;
    double cut_fraction = 0.5;
    int remove = 5;

    // grade / oversample
    std::string strategy = "max-asd";
    int folds = 10;
    int repeats = 2;
    double ratio = 1.0;
    int neighbors = 5;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Keys missing from `j` keep their defaults; unknown keys and values of the
/// wrong type raise ConfigError naming the key.
RunConfig config_from_json(const nlohmann::json& j);

/// Reads and validates a JSON config file.
RunConfig load_config(const std::filesystem::path& path);

/// Runs one subcommand. argv[0] is the program name. Returns 0 on success,
/// 1 on a runtime error (diagnostic on `err`), 2 on a usage error.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace tmfusion::cli
