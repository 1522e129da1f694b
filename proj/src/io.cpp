#include "tmaze/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace tmaze {

using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

Rect rect_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4)
        throw std::runtime_error("rect must be [xmin, ymin, xmax, ymax]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
            j[3].get<double>()};
}

json rect_to_json(const Rect& r) {
    return json::array({r.xmin, r.ymin, r.xmax, r.ymax});
}

Vec2 vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error("point must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json vec_to_json(Vec2 v) { return json::array({v.x, v.y}); }

}  // namespace

Genotype load_genome(const std::string& path) {
    const json j = read_json_file(path);
    if (!j.contains("topology") || !j.contains("weights"))
        throw std::runtime_error(path +
                                 ": genome needs 'topology' and 'weights'");
    Genotype g;
    try {
        g.topology.layer_sizes = j.at("topology").get<std::vector<int>>();
        g.weights = j.at("weights").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    if (!g.topology.valid())
        throw std::runtime_error(path + ": invalid topology");
    const std::size_t expected = genotype_length(g.topology);
    if (g.weights.size() != expected)
        throw std::runtime_error(
            path + ": genome has " + std::to_string(g.weights.size()) +
            " weights, topology needs " + std::to_string(expected));
    for (double w : g.weights)
        if (!std::isfinite(w))
            throw std::runtime_error(path + ": non-finite weight");
    return g;
}

void save_genome(const Genotype& genotype, const std::string& path) {
    json j;
    j["topology"] = genotype.topology.layer_sizes;
    j["weights"] = genotype.weights;
    write_json_file(j, path);
}

WorldFile load_world(const std::string& path) {
    const json j = read_json_file(path);
    WorldFile w;
    MazeSpec& m = w.maze;
    try {
        for (const auto& r : j.at("walls")) m.walls.push_back(rect_from_json(r));
        m.junction = rect_from_json(j.at("junction"));
        m.goal_left = vec_from_json(j.at("goal_left"));
        m.goal_right = vec_from_json(j.at("goal_right"));
        m.ambient_luminosity = j.at("ambient_luminosity").get<double>();
        if (j.contains("light") && !j.at("light").is_null()) {
            LightSource light;
            light.position = vec_from_json(j.at("light").at("position"));
            light.intensity = j.at("light").at("intensity").get<double>();
            m.light = light;
        }
        if (j.contains("obstacles"))
            for (const auto& r : j.at("obstacles"))
                m.obstacles.push_back(rect_from_json(r));
        if (j.contains("obstacle_catalog"))
            for (const auto& r : j.at("obstacle_catalog"))
                m.obstacle_catalog.push_back(rect_from_json(r));
        m.start_position = vec_from_json(j.at("start").at("position"));
        m.start_heading = j.at("start").at("heading").get<double>();
        if (j.contains("sim")) {
            const json& s = j.at("sim");
            SimParams& p = w.sim;
            p.dt = s.value("dt", p.dt);
            p.v_max = s.value("v_max", p.v_max);
            p.axle_length = s.value("axle_length", p.axle_length);
            p.body_radius = s.value("body_radius", p.body_radius);
            p.proximity_range = s.value("proximity_range", p.proximity_range);
            p.light_falloff_k = s.value("light_falloff_k", p.light_falloff_k);
            p.success_radius = s.value("success_radius", p.success_radius);
            p.max_steps = s.value("max_steps", p.max_steps);
            p.sensor_noise_sigma =
                s.value("sensor_noise_sigma", p.sensor_noise_sigma);
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    if (m.ambient_luminosity < 0.0 || m.ambient_luminosity > 1.0)
        throw std::runtime_error(path +
                                 ": ambient_luminosity must be in [0,1]");
    return w;
}

void save_world(const WorldFile& world, const std::string& path) {
    const MazeSpec& m = world.maze;
    json j;
    j["walls"] = json::array();
    for (const Rect& r : m.walls) j["walls"].push_back(rect_to_json(r));
    j["junction"] = rect_to_json(m.junction);
    j["goal_left"] = vec_to_json(m.goal_left);
    j["goal_right"] = vec_to_json(m.goal_right);
    j["ambient_luminosity"] = m.ambient_luminosity;
    if (m.light) {
        j["light"] = {{"position", vec_to_json(m.light->position)},
                      {"intensity", m.light->intensity}};
    }
    j["obstacles"] = json::array();
    for (const Rect& r : m.obstacles) j["obstacles"].push_back(rect_to_json(r));
    j["obstacle_catalog"] = json::array();
    for (const Rect& r : m.obstacle_catalog)
        j["obstacle_catalog"].push_back(rect_to_json(r));
    j["start"] = {{"position", vec_to_json(m.start_position)},
                  {"heading", m.start_heading}};
    const SimParams& p = world.sim;
    j["sim"] = {{"dt", p.dt},
                {"v_max", p.v_max},
                {"axle_length", p.axle_length},
                {"body_radius", p.body_radius},
                {"proximity_range", p.proximity_range},
                {"light_falloff_k", p.light_falloff_k},
                {"success_radius", p.success_radius},
                {"max_steps", p.max_steps},
                {"sensor_noise_sigma", p.sensor_noise_sigma}};
    write_json_file(j, path);
}

std::string csv_cell(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

std::string file_content_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace tmaze
