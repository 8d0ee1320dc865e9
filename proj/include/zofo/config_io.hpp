#pragma once

#include <optional>
#include <string>

#include "zofo/experiments.hpp"
#include "zofo/objective.hpp"
#include "zofo/plant.hpp"

namespace zofo {

// A plant/objective pair pinned to a file so experiments reproduce across
// machines: matrix entries are stored row-major together with dims, the
// generating seed and the target norms.
struct InstanceConfig {
    PlantModel plant;
    QuadraticObjective objective;
};

[[nodiscard]] std::string instance_to_json(const InstanceConfig& instance);
[[nodiscard]] InstanceConfig instance_from_json(const std::string& text);

void save_instance(const InstanceConfig& instance, const std::string& path);
[[nodiscard]] InstanceConfig load_instance(const std::string& path);

// Experiment settings may ride along in the same file under "experiment";
// command-line flags override any value found there.
struct ExperimentSettings {
    std::optional<long> seeds;
    std::optional<long> budget;
    std::optional<long> record_stride;
    std::optional<std::vector<ControllerConfig>> methods;
};

[[nodiscard]] ExperimentSettings experiment_settings_from_file(const std::string& path);

} // namespace zofo
