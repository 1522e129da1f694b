#include "tmaze/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmaze {

MazeSpec MazeSpec::without_light() const {
    MazeSpec m = *this;
    m.light.reset();
    return m;
}

MazeSpec MazeSpec::with_luminosity(double scale) const {
    MazeSpec m = *this;
    m.ambient_luminosity = std::clamp(ambient_luminosity * scale, 0.0, 1.0);
    if (m.light) m.light->intensity *= scale;
    return m;
}

MazeSpec MazeSpec::with_obstacle_count(std::size_t n) const {
    if (n > obstacle_catalog.size())
        throw std::invalid_argument("maze: obstacle count exceeds catalog");
    MazeSpec m = *this;
    m.obstacles.assign(obstacle_catalog.begin(), obstacle_catalog.begin() + n);
    return m;
}

MazeSpec default_maze() {
    // Stem 0.25 m wide and 0.7 m long, arms 0.5 m long and 0.15 m wide,
    // wall thickness 0.04 m. Stem free space x in [-0.125, 0.125],
    // y in [0, 0.7]; bar free space x in [-0.625, 0.625], y in [0.7, 0.85].
    // The bar is narrow enough that every arm-end resting spot (end cap,
    // top corner, bottom corner) lies within the success radius of the
    // goal point.
    MazeSpec m;
    m.walls = {
        {-0.165, -0.040, -0.125, 0.700},  // stem left
        {0.125, -0.040, 0.165, 0.700},    // stem right
        {-0.165, -0.040, 0.165, 0.000},   // stem bottom cap
        {-0.665, 0.850, 0.665, 0.890},    // bar top
        {-0.665, 0.660, -0.125, 0.700},   // bar bottom, left of stem
        {0.125, 0.660, 0.665, 0.700},     // bar bottom, right of stem
        {-0.665, 0.660, -0.625, 0.890},   // left arm cap
        {0.625, 0.660, 0.665, 0.890},     // right arm cap
    };
    m.junction = {-0.125, 0.700, 0.125, 0.850};
    m.goal_left = {-0.560, 0.775};
    m.goal_right = {0.560, 0.775};
    m.light = LightSource{{0.600, 0.775}, 1.5};
    // High ambient makes the dark-maze light level informative: dimming
    // the rig shifts every light input far from its trained operating
    // point instead of merely scaling the source cue.
    m.ambient_luminosity = 0.4;
    // Corridor-narrowing obstacle candidates; none are active until a
    // variant selects a prefix. The first two pinch the arms from the top,
    // leaving a squeeze gap barely wider than the robot below; the next two
    // form a chicane in the stem that both turn directions must thread.
    m.obstacle_catalog = {
        {0.300, 0.780, 0.350, 0.850},
        {-0.350, 0.780, -0.300, 0.850},
        {-0.125, 0.380, -0.015, 0.440},
        {0.015, 0.540, 0.125, 0.600},
    };
    // Start clear of every wall's proximity range (the rear sensors would
    // see the bottom cap from closer in).
    m.start_position = {0.0, 0.12};
    m.start_heading = M_PI / 2.0;  // facing up the stem
    return m;
}

const std::array<double, 8>& sensor_bearings() {
    static const std::array<double, 8> bearings = [] {
        const double deg = M_PI / 180.0;
        return std::array<double, 8>{17.0 * deg,   -17.0 * deg, 45.0 * deg,
                                     -45.0 * deg,  90.0 * deg,  -90.0 * deg,
                                     150.0 * deg,  -150.0 * deg};
    }();
    return bearings;
}

std::array<double, 16> SensorFrame::as_inputs() const {
    std::array<double, 16> in{};
    std::copy(light.begin(), light.end(), in.begin());
    std::copy(proximity.begin(), proximity.end(), in.begin() + 8);
    return in;
}

World::World(MazeSpec maze, SimParams params, std::uint64_t seed)
    : maze_(std::move(maze)), params_(params), rng_(seed) {
    robot_.position = maze_.start_position;
    robot_.heading = wrap_angle(maze_.start_heading);
    solids_ = maze_.walls;
    solids_.insert(solids_.end(), maze_.obstacles.begin(),
                   maze_.obstacles.end());
    resolve_collisions();
    collided_ = false;
}

void World::step(double cmd_left, double cmd_right) {
    if (!std::isfinite(cmd_left) || !std::isfinite(cmd_right))
        throw std::invalid_argument("step: commands must be finite");
    cmd_left = std::clamp(cmd_left, -1.0, 1.0);
    cmd_right = std::clamp(cmd_right, -1.0, 1.0);
    robot_.wheel_left = cmd_left;
    robot_.wheel_right = cmd_right;

    const double v_left = cmd_left * params_.v_max;
    const double v_right = cmd_right * params_.v_max;
    const double v = (v_left + v_right) / 2.0;
    const double omega = (v_right - v_left) / params_.axle_length;

    robot_.position.x += v * std::cos(robot_.heading) * params_.dt;
    robot_.position.y += v * std::sin(robot_.heading) * params_.dt;
    robot_.heading = wrap_angle(robot_.heading + omega * params_.dt);

    collided_ = false;
    resolve_collisions();
    ++step_count_;
}

void World::resolve_collisions() {
    const double r = params_.body_radius;
    for (int iter = 0; iter < 16; ++iter) {
        bool moved = false;
        for (const Rect& rect : solids_) {
            Vec2 c = robot_.position;
            if (rect.contains(c)) {
                // Center inside the solid: push out through the nearest face.
                const double push_left = c.x - rect.xmin;
                const double push_right = rect.xmax - c.x;
                const double push_down = c.y - rect.ymin;
                const double push_up = rect.ymax - c.y;
                const double m = std::min({push_left, push_right, push_down,
                                           push_up});
                if (m == push_left)
                    robot_.position.x = rect.xmin - r;
                else if (m == push_right)
                    robot_.position.x = rect.xmax + r;
                else if (m == push_down)
                    robot_.position.y = rect.ymin - r;
                else
                    robot_.position.y = rect.ymax + r;
                moved = true;
                collided_ = true;
                continue;
            }
            const Vec2 q = rect.closest_point(c);
            const Vec2 n = c - q;
            const double d = n.norm();
            if (d < r - 1e-12) {
                robot_.position = q + n * (r / d);
                moved = true;
                collided_ = true;
            }
        }
        if (!moved) break;
    }
}

double World::raycast(Vec2 origin, Vec2 dir) const {
    double best = kNoHit;
    for (const Rect& rect : solids_)
        best = std::min(best, ray_rect(origin, dir, rect));
    return best;
}

SensorFrame World::sense() {
    SensorFrame frame;
    const auto& bearings = sensor_bearings();
    for (std::size_t i = 0; i < bearings.size(); ++i) {
        const double angle = robot_.heading + bearings[i];
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        const Vec2 origin = robot_.position + dir * params_.body_radius;

        const double d = raycast(origin, dir);
        const double prox =
            d == kNoHit ? 0.0 : 1.0 - d / params_.proximity_range;
        frame.proximity[i] = std::clamp(prox, 0.0, 1.0);

        double level = maze_.ambient_luminosity;
        if (maze_.light) {
            const Vec2 to_source = maze_.light->position - origin;
            const double r = to_source.norm();
            double cos_angle = 1.0;
            if (r > 1e-12)
                cos_angle = (dir.x * to_source.x + dir.y * to_source.y) / r;
            level += maze_.light->intensity /
                     (1.0 + params_.light_falloff_k * r * r) *
                     std::max(0.0, cos_angle);
        }
        frame.light[i] = std::clamp(level, 0.0, 1.0);
    }
    if (params_.sensor_noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0,
                                               params_.sensor_noise_sigma);
        for (auto& v : frame.light)
            v = std::clamp(v + noise(rng_), 0.0, 1.0);
        for (auto& v : frame.proximity)
            v = std::clamp(v + noise(rng_), 0.0, 1.0);
    }
    return frame;
}

}  // namespace tmaze
