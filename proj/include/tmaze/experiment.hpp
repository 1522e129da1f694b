#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tmaze/plasticity.hpp"
#include "tmaze/trial.hpp"
#include "tmaze/world.hpp"

namespace tmaze {

enum class ControlMode { ga, hebbian };

std::string to_string(ControlMode mode);

// One named trial: a maze variant (light toggled for the turn direction,
// obstacles, luminosity) to run the genome in.
struct TrialSpec {
    std::string name;
    MazeSpec maze;
};

// Both turn directions for a maze variant: "<prefix>_right" keeps the light
// source, "<prefix>_left" removes it.
std::vector<TrialSpec> both_directions(const MazeSpec& maze,
                                       const std::string& prefix);

struct ExperimentConfig {
    Genotype genome;
    SimParams sim;
    ControlMode mode = ControlMode::ga;  // ga forces plasticity off
    PlasticityConfig plasticity;         // used in hebbian mode
    std::vector<TrialSpec> trials;
    std::uint64_t seed = 1;
    std::string out_dir;  // empty: nothing written
    // Recorded in summary.json when set (path -> content hash inputs).
    std::string world_file;
    std::string genome_file;
};

struct ExperimentRow {
    std::string name;
    TrialMetrics metrics;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    std::vector<TrialResult> trials;  // same order as rows
};

// Runs every trial, writes metrics.csv, per-trial trajectory/sensor/fitness
// CSVs (plus weights.csv in hebbian mode) and summary.json under out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct CorrelationReport {
    // Per-step (fitness, sum |dW|) pairs.
    std::vector<std::pair<double, double>> fitness_change_pairs;
    double fitness_change_corr = 0.0;
    bool fitness_corr_defined = false;  // false when either side is constant
    // Pearson correlation of sum |dW| against each of the 16 sensor
    // channels (8 light, then 8 proximity).
    std::array<double, 16> sensor_corr{};
    std::array<bool, 16> sensor_corr_defined{};
};

// Logs must come from the same trial (equal lengths).
CorrelationReport correlation_report(const WeightChangeLog& weight_log,
                                     const std::vector<SensorFrame>& sensors);

void write_correlation_csv(const CorrelationReport& report,
                           const std::string& path);

}  // namespace tmaze
