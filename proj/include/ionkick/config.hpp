// config.hpp: experiment configuration (JSON) and its validation.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ionkick/protocols.hpp"

namespace ionkick {

inline const std::vector<std::string> protocol_names{"cat1d-pulses", "cat1d-adiabatic", "cat2d", "purity", "ramsey"};

struct ExperimentConfig {
  std::string protocol;
  std::string backend = "analytic";  // analytic, numeric or both

  struct Physics {
    double eta = 0.5;
    int n = 2;
    double omega_ratio = 100.0;
    double delta_over_omega = 10.0;
    double omega_tau = 40.0;      // duration of each ramp in units of 1/Omega
    std::vector<double> alphas;   // ramsey phases
    std::string input = "cat";    // purity input: cat or mixture
  } physics;

  struct Numeric {
    std::size_t truncation = 0;   // 0: default rule
    std::size_t ramp_steps = 0;   // 0: default rule
    bool verify_ramps = false;
    double leak_threshold = 1e-6;
    std::string timing = "pulse_centres";
    double wait = pi / 2.0;
    std::optional<double> boundary;  // ramsey field edge, default eta
    double smoothing = 0.0;
    bool ideal_adiabatic_endpoints = false;
  } numeric;

  struct Output {
    std::size_t grid_points = default_grid_points;
    double grid_extent = 0.0;  // 0: default rule
    std::vector<double> snapshot_times;
    std::string directory = "out";
  } output;
};

// Reference parameters of each experiment, e.g. Omega/nu = 300 for cat2d.
ExperimentConfig default_config(const std::string& protocol);

// Starts from default_config(protocol) and overlays the document. Throws
// ConfigError naming the field path on unknown keys or invalid values.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);
void validate(const ExperimentConfig& config);
nlohmann::json to_json(const ExperimentConfig& config);

std::vector<Backend> backends_of(const ExperimentConfig& config);
RunOptions run_options(const ExperimentConfig& config, Backend backend);

}  // namespace ionkick
