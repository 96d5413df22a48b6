#pragma once

#include "vsarm/simulator.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <stdexcept>

namespace vsarm {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Config file layout (every section and field optional, defaults otherwise):
// {
//   "actuator": {"spool_radius_m", "steps_per_rev", "microstep", "detent_deg",
//                "per_detent_motor_deg", "substeps_j", "bend_gain_deg_per_m",
//                "quantization_mode", "motor_map"},
//   "coupling": {"alpha", "beta", "seg2_offset"},
//   "plant": {"segments": [{"arc_length", "tendon_separation", "x_pair_azimuth", "label"}],
//             "coupling_coeff", "jam_threshold_psi",
//             "tip_table" | "connector_table": {"rows": [[psi, N], ...],
//                                              "reference_deflection_m", "label"}}
// }
// SI units and radians throughout. Unknown keys are rejected.
SimConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SimConfig& cfg);
SimConfig load_config(const std::filesystem::path& path);

ActuatorConfig actuator_from_json(const nlohmann::json& j);
nlohmann::json actuator_to_json(const ActuatorConfig& cfg);

}  // namespace vsarm
