#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tmaze/network.hpp"
#include "tmaze/trial.hpp"
#include "tmaze/world.hpp"

namespace tmaze {

struct GaConfig {
    int population_size = 50;
    int generations = 30;
    int elitism_count = 6;
    int tournament_size = 3;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    double mutation_sigma = 0.2;
    double init_range = 1.0;   // genes initialized uniform in [-range, range]
    double gene_clip = 4.0;    // post-mutation clamp
    int trials_per_eval = 1;   // trials per maze variant
    std::uint64_t master_seed = 1;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double min_fitness = 0.0;
    Genotype best_genotype;
};

struct EvolutionRecord {
    std::vector<GenerationStats> generations;
    Genotype champion;
    double champion_fitness = 0.0;
};

// Mean trial_fitness over the evaluation mazes, plasticity disabled.
double evaluate(const Genotype& genotype,
                const std::vector<MazeSpec>& eval_mazes,
                const SimParams& params, std::uint64_t seed);

// Generational GA over flat weight genotypes. One step() evaluates the
// current population, records its stats, and breeds the next one; a run is
// a pure function of the config's master_seed (evaluations are parallel but
// reduce in index order). Checkpoints capture the full state mid-run.
class GaRun {
public:
    GaRun(GaConfig config, std::vector<MazeSpec> eval_mazes,
          SimParams params);

    static GaRun from_checkpoint(const std::string& path,
                                 std::vector<MazeSpec> eval_mazes,
                                 SimParams params);
    void save_checkpoint(const std::string& path) const;

    bool done() const { return generation_ >= config_.generations; }
    int generation() const { return generation_; }
    const GenerationStats& step();

    const EvolutionRecord& record() const { return record_; }
    // Finalizes champion = best generation so far.
    EvolutionRecord finish();

    const GaConfig& config() const { return config_; }

private:
    void breed_next();

    GaConfig config_;
    std::vector<MazeSpec> eval_mazes_;
    SimParams params_;
    NetworkTopology topology_;
    std::mt19937_64 rng_;
    std::vector<Genotype> population_;
    int generation_ = 0;
    EvolutionRecord record_;
};

using ProgressFn = std::function<void(const GenerationStats&)>;

// Runs a full GA from scratch.
EvolutionRecord evolve(const GaConfig& config,
                       const std::vector<MazeSpec>& eval_mazes,
                       const SimParams& params,
                       const ProgressFn& on_generation = nullptr);

}  // namespace tmaze
