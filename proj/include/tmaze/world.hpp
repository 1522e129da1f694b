#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "tmaze/geometry.hpp"

namespace tmaze {

struct LightSource {
    Vec2 position;
    double intensity = 1.0;
};

// T-maze description. Dimensions are configuration, loaded from a world
// file; default_maze() builds an e-puck-scale layout. The light source is
// the turn cue: present means the right goal is correct, absent the left.
struct MazeSpec {
    std::vector<Rect> walls;
    Rect junction;
    Vec2 goal_left;
    Vec2 goal_right;
    std::optional<LightSource> light;
    double ambient_luminosity = 0.2;
    std::vector<Rect> obstacles;          // active: part of the collision world
    std::vector<Rect> obstacle_catalog;   // latent: variants draw prefixes
    Vec2 start_position;
    double start_heading = 0.0;

    Vec2 correct_goal() const { return light ? goal_right : goal_left; }
    bool turn_right_correct() const { return light.has_value(); }

    // Same maze with the light source removed (left-turn condition).
    MazeSpec without_light() const;
    // Ambient and source intensity scaled by the given luminosity factor.
    MazeSpec with_luminosity(double scale) const;
    // Activates the first n catalog obstacles (replacing any active set).
    MazeSpec with_obstacle_count(std::size_t n) const;
};

MazeSpec default_maze();

struct SimParams {
    double dt = 0.032;             // s
    double v_max = 0.06;           // m/s at full command
    double axle_length = 0.053;    // m
    double body_radius = 0.037;    // m
    double proximity_range = 0.07; // m
    double light_falloff_k = 10.0;
    double success_radius = 0.05;  // m
    int max_steps = 8000;
    double sensor_noise_sigma = 0.0;  // off by default
};

// Body-frame sensor bearings in radians, shared by the light and proximity
// modalities. Symmetric e-puck-like fan: +-17, +-45, +-90, +-150 degrees.
const std::array<double, 8>& sensor_bearings();

struct RobotState {
    Vec2 position;
    double heading = 0.0;  // wrapped to (-pi, pi]
    double wheel_left = 0.0;
    double wheel_right = 0.0;
};

struct SensorFrame {
    std::array<double, 8> light{};
    std::array<double, 8> proximity{};

    // Controller input order: light sensors first, then proximity.
    std::array<double, 16> as_inputs() const;
};

// Deterministic fixed-timestep world. All randomness (only sensor noise,
// off by default) flows from the per-trial seed.
class World {
public:
    World(MazeSpec maze, SimParams params, std::uint64_t seed);

    // Differential-drive Euler step with slide-along-wall contact
    // resolution. Commands are normalized wheel speeds in [-1,1].
    void step(double cmd_left, double cmd_right);

    SensorFrame sense();

    const RobotState& robot() const { return robot_; }
    const MazeSpec& maze() const { return maze_; }
    const SimParams& params() const { return params_; }
    bool collided_last_step() const { return collided_; }
    double time() const { return step_count_ * params_.dt; }
    int step_count() const { return step_count_; }

    // Distance to the nearest solid along a unit direction (kNoHit if none).
    double raycast(Vec2 origin, Vec2 dir) const;

private:
    void resolve_collisions();

    MazeSpec maze_;
    SimParams params_;
    RobotState robot_;
    std::vector<Rect> solids_;  // walls + obstacles
    bool collided_ = false;
    int step_count_ = 0;
    std::mt19937_64 rng_;
};

}  // namespace tmaze
