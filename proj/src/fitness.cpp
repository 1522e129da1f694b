#include "tmaze/fitness.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tmaze {

BehaviorComponents behavior_components(double v_left, double v_right,
                                       std::span<const double> proximity,
                                       int correct_turn) {
    BehaviorComponents c;
    c.forward = std::clamp((v_left + v_right) / 1.5, 0.0, 1.0);
    double max_prox = 0.0;
    for (double p : proximity) max_prox = std::max(max_prox, p);
    c.avoid_collision = 1.0 - max_prox * max_prox * max_prox;
    c.spinning = 1.0 - std::abs(v_right - v_left) / 2.0;
    c.junction = correct_turn;
    return c;
}

double combined_fitness(const BehaviorComponents& c) {
    return (c.forward + 2.0 * c.avoid_collision + c.spinning + c.junction) /
           5.0;
}

double goal_reward(Vec2 position, Vec2 goal) {
    const double dist = distance(position, goal);
    const double scaled = 1.7 * dist;
    const double dist_scaled = std::min(1.0, scaled * scaled * scaled);
    return 1.0 - dist_scaled;
}

double final_fitness(double combined, double reward) {
    return (combined + reward) / 2.0;
}

FitnessSample fitness_sample(double v_left, double v_right,
                             std::span<const double> proximity,
                             int correct_turn, Vec2 position, Vec2 goal) {
    const BehaviorComponents c =
        behavior_components(v_left, v_right, proximity, correct_turn);
    FitnessSample s;
    s.forward = c.forward;
    s.avoid_collision = c.avoid_collision;
    s.spinning = c.spinning;
    s.junction = c.junction;
    s.combined = combined_fitness(c);
    s.reward = goal_reward(position, goal);
    s.final = final_fitness(s.combined, s.reward);
    return s;
}

double trial_fitness(std::span<const double> per_step_combined,
                     Vec2 final_position, Vec2 goal) {
    if (per_step_combined.empty())
        throw std::invalid_argument("trial_fitness: no fitness samples");
    const double sum = std::accumulate(per_step_combined.begin(),
                                       per_step_combined.end(), 0.0);
    const double mean_combined = sum / per_step_combined.size();
    return final_fitness(mean_combined, goal_reward(final_position, goal));
}

}  // namespace tmaze
