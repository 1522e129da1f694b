#pragma once

#include <span>

#include "tmaze/geometry.hpp"

namespace tmaze {

// One evaluated step of the dual fitness system. combined and final are
// always derived from the other fields:
//   combined = (forward + 2*avoid_collision + spinning + junction) / 5
//   final    = (combined + reward) / 2
struct FitnessSample {
    double forward = 0.0;
    double avoid_collision = 0.0;
    double spinning = 0.0;
    int junction = 0;
    double combined = 0.0;
    double reward = 0.0;
    double final = 0.0;
};

struct BehaviorComponents {
    double forward = 0.0;
    double avoid_collision = 0.0;
    double spinning = 0.0;
    int junction = 0;
};

// v_left/v_right are normalized wheel commands in [-1,1], proximity readings
// in [0,1]. forward is clamped to [0,1] so the combined fitness stays a
// weighted mean in [0,1].
BehaviorComponents behavior_components(double v_left, double v_right,
                                       std::span<const double> proximity,
                                       int correct_turn);

double combined_fitness(const BehaviorComponents& c);

// 1 - min(1, (1.7*dist)^3); saturates to 0 for dist >= 1/1.7.
double goal_reward(Vec2 position, Vec2 goal);

double final_fitness(double combined, double reward);

// Everything above in one step, with the reward taken at the current
// position. Feeds both GA aggregation and the live Hebbian signal.
FitnessSample fitness_sample(double v_left, double v_right,
                             std::span<const double> proximity,
                             int correct_turn, Vec2 position, Vec2 goal);

// Trial-level aggregate for GA selection: mean per-step combined fitness
// averaged with the end-of-trial goal reward. Throws on an empty sample list.
double trial_fitness(std::span<const double> per_step_combined,
                     Vec2 final_position, Vec2 goal);

}  // namespace tmaze
