#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "tmaze/io.hpp"

using namespace tmaze;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& p, const char* text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("genome round-trip preserves topology and weights exactly") {
    Genotype g = zero_genotype(NetworkTopology::standard());
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-4.0, 4.0);
    for (auto& w : g.weights) w = dist(rng);

    const auto path = temp_file("genome_rt.json");
    save_genome(g, path.string());
    const Genotype loaded = load_genome(path.string());
    CHECK(loaded.topology == g.topology);
    CHECK(loaded.weights == g.weights);
    std::filesystem::remove(path);
}

TEST_CASE("genome loading validates structure") {
    const auto path = temp_file("genome_bad.json");
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)load_genome("/nonexistent/genome.json"),
                        std::runtime_error);
    }
    SUBCASE("not json") {
        write_text(path, "not json at all");
        CHECK_THROWS_AS((void)load_genome(path.string()),
                        std::runtime_error);
    }
    SUBCASE("wrong weight count") {
        write_text(path,
                   R"({"topology": [2, 1], "weights": [0.1, 0.2]})");
        CHECK_THROWS_AS((void)load_genome(path.string()),
                        std::runtime_error);
    }
    SUBCASE("invalid topology") {
        write_text(path, R"({"topology": [3], "weights": [1.0]})");
        CHECK_THROWS_AS((void)load_genome(path.string()),
                        std::runtime_error);
    }
    SUBCASE("non-finite weight") {
        write_text(path,
                   R"({"topology": [1, 1], "weights": [1.0, null]})");
        CHECK_THROWS_AS((void)load_genome(path.string()),
                        std::runtime_error);
    }
    std::filesystem::remove(path);
}

TEST_CASE("tiny genome file loads") {
    const auto path = temp_file("genome_tiny.json");
    write_text(path, R"({"topology": [2, 1], "weights": [0.5, -0.5, 0.25]})");
    const Genotype g = load_genome(path.string());
    CHECK(g.topology.layer_sizes == std::vector<int>{2, 1});
    CHECK(g.weights == std::vector<double>{0.5, -0.5, 0.25});
    std::filesystem::remove(path);
}

TEST_CASE("world round-trip preserves the maze and sim params") {
    WorldFile w;
    w.maze = default_maze();
    w.sim.max_steps = 1234;
    w.sim.sensor_noise_sigma = 0.01;

    const auto path = temp_file("world_rt.json");
    save_world(w, path.string());
    const WorldFile loaded = load_world(path.string());

    CHECK(loaded.maze.walls == w.maze.walls);
    CHECK(loaded.maze.junction == w.maze.junction);
    CHECK(loaded.maze.goal_left == w.maze.goal_left);
    CHECK(loaded.maze.goal_right == w.maze.goal_right);
    CHECK(loaded.maze.ambient_luminosity == w.maze.ambient_luminosity);
    REQUIRE(loaded.maze.light.has_value());
    CHECK(loaded.maze.light->position == w.maze.light->position);
    CHECK(loaded.maze.light->intensity == w.maze.light->intensity);
    CHECK(loaded.maze.obstacles == w.maze.obstacles);
    CHECK(loaded.maze.obstacle_catalog == w.maze.obstacle_catalog);
    CHECK(loaded.maze.start_position == w.maze.start_position);
    CHECK(loaded.maze.start_heading == w.maze.start_heading);
    CHECK(loaded.sim.max_steps == 1234);
    CHECK(loaded.sim.sensor_noise_sigma == 0.01);
    CHECK(loaded.sim.dt == w.sim.dt);
    std::filesystem::remove(path);
}

TEST_CASE("world without a light source round-trips to no light") {
    WorldFile w;
    w.maze = default_maze().without_light();
    const auto path = temp_file("world_dark.json");
    save_world(w, path.string());
    const WorldFile loaded = load_world(path.string());
    CHECK(!loaded.maze.light.has_value());
    std::filesystem::remove(path);
}

TEST_CASE("world loading validates required fields and ranges") {
    const auto path = temp_file("world_bad.json");
    SUBCASE("missing junction") {
        write_text(path, R"({"walls": [], "goal_left": [0,0]})");
        CHECK_THROWS_AS((void)load_world(path.string()),
                        std::runtime_error);
    }
    SUBCASE("ambient out of range") {
        write_text(path, R"({
            "walls": [[0,0,1,1]], "junction": [0,0,1,1],
            "goal_left": [0,0], "goal_right": [1,1],
            "ambient_luminosity": 1.5,
            "start": {"position": [0.5,0.5], "heading": 0}
        })");
        CHECK_THROWS_AS((void)load_world(path.string()),
                        std::runtime_error);
    }
    std::filesystem::remove(path);
}

TEST_CASE("csv_cell prints 6 decimal places") {
    CHECK(csv_cell(0.0) == "0.000000");
    CHECK(csv_cell(1.5) == "1.500000");
    CHECK(csv_cell(-0.1234567) == "-0.123457");
    CHECK(csv_cell(123.0) == "123.000000");
}

TEST_CASE("file content hash is stable and content-sensitive") {
    const auto a = temp_file("hash_a.txt");
    const auto b = temp_file("hash_b.txt");
    write_text(a, "identical");
    write_text(b, "identical");
    CHECK(file_content_hash(a.string()) == file_content_hash(b.string()));
    write_text(b, "different");
    CHECK(file_content_hash(a.string()) != file_content_hash(b.string()));
    CHECK_THROWS_AS((void)file_content_hash("/nonexistent/file"),
                    std::runtime_error);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}
