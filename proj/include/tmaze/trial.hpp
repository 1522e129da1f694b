#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tmaze/fitness.hpp"
#include "tmaze/network.hpp"
#include "tmaze/plasticity.hpp"
#include "tmaze/world.hpp"

namespace tmaze {

struct TrialOutcome {
    bool success = false;
    int steps_taken = 0;
    std::vector<Vec2> trajectory;  // steps_taken + 1 points
    bool collided = false;
    double final_position_error = 0.0;
};

struct TrialMetrics {
    int success = 0;
    std::optional<double> time_to_goal;  // s, absent on failure
    double path_length = 0.0;            // m
    double average_speed = 0.0;          // m/s
    double final_position_error = 0.0;   // m, to the correct goal
    double min_position_error = 0.0;     // trajectory minimum
    std::optional<double> weight_change_cumulative;  // hebbian only
    std::optional<double> weight_change_per_step;
};

struct WeightChangeEntry {
    int step = 0;
    double fitness = 0.0;
    double effective_rate = 0.0;
    double sum_abs_delta = 0.0;
    double max_abs_weight = 0.0;
};
using WeightChangeLog = std::vector<WeightChangeEntry>;

// Latches the junction component of the behavior fitness: 0 while in the
// stem, 1 once the robot leaves the junction into the correct arm,
// permanently 0 once it enters the wrong arm. First arm entry decides.
class JunctionTracker {
public:
    JunctionTracker(Rect junction, bool right_is_correct)
        : junction_(junction), right_is_correct_(right_is_correct) {}

    void update(Vec2 position);
    int correct_turn() const { return state_ == State::correct ? 1 : 0; }
    bool wrong_arm_entered() const { return state_ == State::wrong; }

private:
    enum class State { pending, correct, wrong };
    Rect junction_;
    bool right_is_correct_;
    State state_ = State::pending;
};

struct TrialOptions {
    bool record_trajectory = true;
    bool record_sensors = false;
    bool record_fitness = false;
    bool record_weights = false;
};

struct TrialResult {
    TrialOutcome outcome;
    TrialMetrics metrics;
    double fitness = 0.0;  // trial_fitness aggregate used by the GA
    std::vector<double> headings;  // parallel to outcome.trajectory
    std::optional<WeightChangeLog> weight_log;
    std::vector<SensorFrame> sensor_log;
    std::vector<FitnessSample> fitness_log;
};

// Runs one trial: load the genotype, loop sense/forward/(hebbian)/step until
// the correct goal is reached or max_steps expire. The genotype is never
// mutated; with plasticity the controller's weights are restored from the
// snapshot afterwards.
TrialResult run_trial(const Genotype& genotype, const MazeSpec& maze,
                      const SimParams& params,
                      const std::optional<PlasticityConfig>& plasticity,
                      std::uint64_t seed, const TrialOptions& options = {});

}  // namespace tmaze
