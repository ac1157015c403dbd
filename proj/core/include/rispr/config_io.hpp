#pragma once

// JSON experiment configs. Key names follow the ExperimentConfig / SceneConfig
// field names; angles are in degrees and gains are {"db": x, "phase_deg": y}
// objects (phase omitted = drawn per trial) or the string "off".
//
// A top-level "preset" key ("spectrum", "mse-sweep", "beampattern") selects the
// starting values; every other key overrides them. Unknown keys are rejected.

#include <string>

#include "rispr/experiment.hpp"

namespace rispr {

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig parse_config(const std::string& json_text, const ExperimentConfig& base);
/// Reads and parses `path`; errors carry the path.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base);

/// Full config as JSON text; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const ExperimentConfig& cfg);

}  // namespace rispr
