#pragma once
// Run configuration of the command-line runner: a single JSON file, validated
// against the requirements of the selected suite before anything executes.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "symspace/complex_reduction.hpp"
#include "symspace/space.hpp"

namespace symspace::cli {

// Validation failure; `path` names the offending field ("grids.t_points").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"spherical-verify", "transform-verify", "kernel-verify", "transference",
                                                "complex-reduce",   "norm-lab",         "geometry-verify"};
    return names;
}

struct GridConfig {
    double T_max = 20.0;
    int t_points = 640;        // 16 Gauss nodes per panel
    double Lambda = 12.0;
    int lambda_points = 768;
};

struct RunConfig {
    std::string suite;
    SpaceParams space;
    double p = 1.5;
    GridConfig grids;
    bool grids_given = false;
    std::uint64_t family_seed = 42;   // Paley-Wiener family
    std::uint64_t sample_seed = 7;    // random sample points, z-samples
    int samples = 0;                  // suite-specific count (0: suite default)
    std::vector<double> translates;   // norm-lab spectral translates
    std::optional<WeylData> weyl;     // complex-reduce
    std::string output_dir = "results";
    std::map<std::string, std::vector<double>> sweep;  // axis -> values
};

// Parses and validates; throws ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

// WeylData as JSON: {"type", "rank", "matrices": [[row-major entries]], "det",
// "positive_roots": [[..]]}, and back (validated: closed orthogonal group).
nlohmann::json weyl_to_json(const WeylData& wd);
WeylData weyl_from_json(const nlohmann::json& j, const std::string& path);

}  // namespace symspace::cli
