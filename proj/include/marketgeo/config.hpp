#pragma once

#include "marketgeo/backtest.hpp"
#include "marketgeo/dimension.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mgeo {

struct SurrogateSettings {
    SurrogateMethod method = SurrogateMethod::time_permute;
    int replicas = 50;
    double quantile = 0.95;
};

/// Run configuration, loaded from JSON. Every knob the pipeline depends on is
/// explicit here; there is no ambient randomness (a seed is required).
struct RunConfig {
    std::string panel_path;
    std::string index_path;
    std::string out_dir;  // empty: the CLI picks a timestamped directory
    int window_months = 6;
    int dimension_cap = 6;
    SurrogateSettings surrogate;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<ScenarioSpec> scenarios;  // defaults to default_scenarios()
    int frontier_points = 40;
    bool dump_eigen_coords = false;
    bool dump_surrogates = true;
    int jobs = 0;  // 0 = hardware concurrency
};

/// Parses and validates a JSON config. Unknown keys, unreadable input paths,
/// a missing seed, or an explicitly empty scenario list raise ConfigError.
RunConfig load_run_config(const std::string& path);

} // namespace mgeo
