#pragma once

#include <vector>

#include "tmaze/network.hpp"

namespace tmaze {

struct PlasticityConfig {
    double base_rate = 0.002;
    double fitness_floor = 0.2;
    double trace_decay = 0.95;
    double trace_update = 0.05;
    double weight_clip = 2.0;
    bool enabled = true;

    void validate() const;
};

// N * max(floor, F), with F clamped to [0,1] first.
double effective_rate(double base_rate, double fitness,
                      double fitness_floor = 0.2);

// Per-layer Hebbian traces plus the snapshot/revert bookkeeping for one
// trial. Traces have one entry per synapse (bias columns excluded) and are
// updated from the outer product of post- and pre-synaptic activations.
class PlasticityState {
public:
    PlasticityState(const NetworkTopology& topology, PlasticityConfig config);

    // Snapshots the genome and zeroes traces and the change accumulator.
    void begin_trial(const Genotype& genotype);

    // Restores the controller's weights from the snapshot and returns the
    // cumulative |dW| accumulated during the trial.
    double end_trial(Controller& controller);

    // T <- decay*T + update*(post x pre) for every layer.
    void update_traces(const std::vector<std::vector<double>>& activations);

    // W <- clip(W + rate*T, +-clip) on synapse weights; biases untouched.
    // Accumulates pre-clip sum |dW|. Returns that step's sum |dW|.
    double apply_update(Controller& controller, double rate);

    const std::vector<std::vector<double>>& traces() const { return traces_; }
    double cumulative_abs_change() const { return cumulative_abs_change_; }
    const PlasticityConfig& config() const { return config_; }

private:
    NetworkTopology topology_;
    PlasticityConfig config_;
    std::vector<std::vector<double>> traces_;  // per layer, n_out x n_in
    Genotype original_genome_;
    double cumulative_abs_change_ = 0.0;
    bool trial_active_ = false;
};

}  // namespace tmaze
