#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chiral/couplings.hpp"
#include "chiral/dynamics.hpp"

namespace chiral {

struct TimeGrid {
    double t_max = 100.0;
    int n_points = 400;
};

struct ObservableToggles {
    bool populations = true;
    bool correlations = true;
    bool third_order = true;
    bool trajectory = false;
    bool routing = true;
};

enum class SweepAxis { theta, directionality, xi };

std::string to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(const std::string& name);

struct SweepSpec {
    SweepAxis axis = SweepAxis::theta;
    std::vector<double> values;
};

struct JitterSpec {
    double sigma_theta = 0.0;
    int n_samples = 1;
    std::uint64_t seed = 1;
};

enum class ResidualPolicy { automatic, on, off };

struct SimulationConfig {
    CouplingParams params{40, 2, 3.141592653589793, 0.5, 1.0};
    InitialStateSpec initial = ProductState{{20, 21}};
    TimeGrid grid;
    ObservableToggles observables;
    bool renormalize = false;
    bool refine_tc = false;
    bool figures = false;
    ResidualPolicy residual = ResidualPolicy::automatic;
    int threads = 0;  // 0 = hardware concurrency
    std::string output_dir = "out";
    std::optional<SweepSpec> sweep;
    std::optional<JitterSpec> jitter;
};

nlohmann::json config_to_json(const SimulationConfig& config);
SimulationConfig config_from_json(const nlohmann::json& j);

SimulationConfig load_config(const std::filesystem::path& path);
void save_config(const SimulationConfig& config, const std::filesystem::path& path);

// Collects every violated field into one ValidationError.
void validate_config(const SimulationConfig& config);

}  // namespace chiral
