#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "chiral/config.hpp"
#include "chiral/lindblad.hpp"
#include "chiral/observables.hpp"

namespace chiral {

inline constexpr const char* kVersion = "0.1.0";

struct ManifestEntry {
    std::string name;  // path relative to the bundle directory
    std::uintmax_t bytes = 0;
    std::string checksum;  // fnv1a64 hex of the file contents
};

struct ResultBundle {
    std::filesystem::path directory;
    std::vector<ManifestEntry> manifest;
    std::vector<std::string> warnings;
};

// In-memory results of a single simulation, produced without touching disk.
struct RunOutcome {
    AmplitudeTrajectory trajectory;
    PopulationField populations;    // empty unless requested/needed
    CorrelationSeries correlations; // g2 for all separations, g3 with parts
    RoutingRecord routing;
    FrontSpeed front_speed;
    double entropy = 0.0;
    std::string method;
    bool fell_back = false;
    double residual = -1.0;  // < 0 when the check was skipped
    double wall_seconds = 0.0;
};

RunOutcome simulate(const SimulationConfig& config);

struct SweepPoint {
    double value = 0.0;
    RoutingRecord routing;
    double entropy = 0.0;
};

struct SweepOutcome {
    SweepAxis axis = SweepAxis::theta;
    std::vector<SweepPoint> points;
    double wall_seconds = 0.0;
};

SweepOutcome simulate_sweep(const SimulationConfig& config);

struct JitterOutcome {
    std::vector<double> thetas;  // perturbed values, one per sample
    std::vector<RoutingRecord> records;
    double mean_tc = 0.0;
    double std_tc = 0.0;
    double spread_tc = 0.0;  // max - min
    RoutingRecord unperturbed;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;
};

JitterOutcome simulate_jitter(const SimulationConfig& config);

// Bundle writers: deterministic data files, metadata echo, and a manifest
// listing every file under the output directory with its checksum.
ResultBundle run(const SimulationConfig& config);
ResultBundle run_sweep(const SimulationConfig& config);
ResultBundle run_jitter(const SimulationConfig& config);
ResultBundle run_oracle_check(const SimulationConfig& config, double tolerance = 1e-8);

// Reads whatever data files exist in bundle_dir and emits the matching
// figures; absent series produce per-figure warnings instead of failures.
ResultBundle emit_figures(const std::filesystem::path& bundle_dir);

nlohmann::json oracle_report_to_json(const OracleReport& report);

// Chunked index-parallel helper; threads <= 0 means hardware concurrency.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace chiral
