#pragma once

#include "bdris/channel.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bdris {

/// How closed-form schemes pick rank-1 factors when the RIS links are Ricean.
enum class RiceanDesign {
    DominantRank1, // leading singular pair of the realized F and G
    LosComponent,  // the deterministic LoS part only
};

struct SimulationConfig {
    ScenarioConfig scenario;
    std::vector<double> pt_sweep_dbm{0.0, 10.0, 20.0, 30.0};
    std::vector<double> k_sweep{0.0, 1.0, 2.0, 5.0, 10.0};
    RiceanDesign ricean_design = RiceanDesign::DominantRank1;
    unsigned threads = 0; // 0: hardware concurrency
};

/**
 * Parses the JSON scenario document. Missing keys keep their defaults;
 * unknown keys, wrong types and invalid values raise ConfigError.
 * Ricean factors accept a number or the string "inf" (pure LoS).
 */
SimulationConfig parse_config(std::string_view json_text);
SimulationConfig load_config(const std::string& path);
std::string to_json(const SimulationConfig& cfg);

} // namespace bdris
