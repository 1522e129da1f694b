#pragma once

#include <string>

#include "tmaze/network.hpp"
#include "tmaze/world.hpp"

namespace tmaze {

// Genome file: JSON object { "topology": [ints], "weights": [floats] }.
// Loading validates the weight count against genotype_length.
Genotype load_genome(const std::string& path);
void save_genome(const Genotype& genotype, const std::string& path);

// World file: JSON with the maze geometry, light configuration, obstacle
// list, start pose, and an optional "sim" block overriding SimParams.
struct WorldFile {
    MazeSpec maze;
    SimParams sim;
};
WorldFile load_world(const std::string& path);
void save_world(const WorldFile& world, const std::string& path);

// Numeric CSV cell, fixed 6 decimal places.
std::string csv_cell(double value);

// FNV-1a 64-bit over a file's bytes, as hex. Used for reproducibility
// stamps in experiment summaries.
std::string file_content_hash(const std::string& path);

}  // namespace tmaze
