#include "tmaze/trial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmaze {

void JunctionTracker::update(Vec2 position) {
    if (state_ != State::pending) return;
    // Arm entry: inside the bar's vertical band, past the junction sides.
    if (position.y < junction_.ymin || position.y > junction_.ymax) return;
    if (position.x > junction_.xmax)
        state_ = right_is_correct_ ? State::correct : State::wrong;
    else if (position.x < junction_.xmin)
        state_ = right_is_correct_ ? State::wrong : State::correct;
}

TrialResult run_trial(const Genotype& genotype, const MazeSpec& maze,
                      const SimParams& params,
                      const std::optional<PlasticityConfig>& plasticity,
                      std::uint64_t seed, const TrialOptions& options) {
    if (genotype.topology.inputs() != 16 || genotype.topology.outputs() != 2)
        throw std::invalid_argument(
            "run_trial: controller needs 16 inputs and 2 outputs");
    Controller controller(genotype.topology);
    controller.load_genotype(genotype);

    const bool hebbian = plasticity.has_value() && plasticity->enabled;
    std::optional<PlasticityState> plastic;
    if (hebbian) {
        plastic.emplace(genotype.topology, *plasticity);
        plastic->begin_trial(genotype);
    }

    World world(maze, params, seed);
    const Vec2 goal = maze.correct_goal();
    JunctionTracker junction(maze.junction, maze.turn_right_correct());

    TrialResult result;
    if (options.record_weights) result.weight_log.emplace();

    TrialOutcome& outcome = result.outcome;
    outcome.trajectory.push_back(world.robot().position);
    result.headings.push_back(world.robot().heading);

    double combined_sum = 0.0;
    int combined_count = 0;
    double path_length = 0.0;
    double min_error = distance(world.robot().position, goal);
    std::optional<double> time_to_goal;

    for (int t = 0; t < params.max_steps; ++t) {
        const SensorFrame frame = world.sense();
        const auto inputs = frame.as_inputs();
        const std::vector<double>& out = controller.forward(inputs);
        const double cmd_left = out[0];
        const double cmd_right = out[1];

        junction.update(world.robot().position);
        const FitnessSample sample = fitness_sample(
            cmd_left, cmd_right, frame.proximity, junction.correct_turn(),
            world.robot().position, goal);
        combined_sum += sample.combined;
        ++combined_count;

        if (hebbian) {
            plastic->update_traces(controller.layer_activations());
            const double rate =
                effective_rate(plasticity->base_rate, sample.final,
                               plasticity->fitness_floor);
            const double step_change =
                plastic->apply_update(controller, rate);
            if (result.weight_log) {
                double max_abs = 0.0;
                for (double w : controller.effective_weights())
                    max_abs = std::max(max_abs, std::abs(w));
                result.weight_log->push_back(
                    {t, sample.final, rate, step_change, max_abs});
            }
        }
        if (options.record_sensors) result.sensor_log.push_back(frame);
        if (options.record_fitness) result.fitness_log.push_back(sample);

        const Vec2 before = world.robot().position;
        world.step(cmd_left, cmd_right);
        const Vec2 after = world.robot().position;

        path_length += distance(before, after);
        outcome.collided = outcome.collided || world.collided_last_step();
        ++outcome.steps_taken;
        if (options.record_trajectory) {
            outcome.trajectory.push_back(after);
            result.headings.push_back(world.robot().heading);
        }

        const double err = distance(after, goal);
        min_error = std::min(min_error, err);
        if (err <= params.success_radius) {
            outcome.success = true;
            time_to_goal = world.time();
            break;
        }
    }
    if (!options.record_trajectory) {
        outcome.trajectory.clear();
        outcome.trajectory.push_back(world.robot().position);
        result.headings.assign(1, world.robot().heading);
    }

    outcome.final_position_error = distance(world.robot().position, goal);

    // GA aggregate. A zero-step trial has no behavior samples: score the
    // start pose as one motionless sample so the aggregate stays defined.
    double mean_combined;
    if (combined_count > 0) {
        mean_combined = combined_sum / combined_count;
    } else {
        const SensorFrame frame = world.sense();
        const FitnessSample s =
            fitness_sample(0.0, 0.0, frame.proximity, 0,
                           world.robot().position, goal);
        mean_combined = s.combined;
    }
    result.fitness = final_fitness(
        mean_combined, goal_reward(world.robot().position, goal));

    TrialMetrics& metrics = result.metrics;
    metrics.success = outcome.success ? 1 : 0;
    metrics.time_to_goal = time_to_goal;
    metrics.path_length = path_length;
    const double elapsed = outcome.steps_taken * params.dt;
    metrics.average_speed = elapsed > 0.0 ? path_length / elapsed : 0.0;
    metrics.final_position_error = outcome.final_position_error;
    metrics.min_position_error = min_error;

    if (hebbian) {
        const double change = plastic->end_trial(controller);
        metrics.weight_change_cumulative = change;
        metrics.weight_change_per_step =
            outcome.steps_taken > 0 ? change / outcome.steps_taken : 0.0;
    }
    return result;
}

}  // namespace tmaze
