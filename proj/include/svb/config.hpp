#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "svb/sim.hpp"

namespace svb {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Synthetic rate/quality fixtures (base layer + four enhancements each),
// sized in payload bits per transmission interval to match the default
// system's resource budget.
std::vector<QualityModel> fixture_quality_models();

// Full default simulation setup: 4 transmit antennas, two 4-antenna
// receivers, 6 resource blocks of 12 subcarriers, group size 2, hybrid
// decoder threshold 0.2, five UEP layers, 8-point SNR sweep.
SimulationSpec default_spec();

// Reads a JSON spec file; unknown keys are rejected, missing ones keep their
// defaults.  Throws ConfigError with a human-readable message on parse or
// validation problems.
SimulationSpec load_spec(const std::string& path);
SimulationSpec parse_spec(const std::string& json_text);

// Full spec echo (JSON), written next to result files for provenance.
std::string spec_to_json(const SimulationSpec& spec);

}  // namespace svb
