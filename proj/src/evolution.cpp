#include "tmaze/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace tmaze {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-candidate evaluation seed, independent of generation so elites keep
// their scores.
std::uint64_t eval_seed(std::uint64_t master_seed, std::size_t index) {
    return splitmix64(master_seed ^ splitmix64(index + 1));
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
    unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                             : std::thread::hardware_concurrency();
    if (n <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    n = std::min<unsigned>(n, count);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count;
                 i = next.fetch_add(1))
                body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

void GaConfig::validate() const {
    if (population_size < 1)
        throw std::invalid_argument("ga: population_size must be >= 1");
    if (generations < 1)
        throw std::invalid_argument("ga: generations must be >= 1");
    if (elitism_count < 0 || elitism_count >= population_size)
        throw std::invalid_argument(
            "ga: elitism_count must be in [0, population_size)");
    if (tournament_size < 1)
        throw std::invalid_argument("ga: tournament_size must be >= 1");
    if (crossover_rate < 0.0 || crossover_rate > 1.0)
        throw std::invalid_argument("ga: crossover_rate must be in [0,1]");
    if (mutation_rate < 0.0 || mutation_rate > 1.0)
        throw std::invalid_argument("ga: mutation_rate must be in [0,1]");
    if (!(mutation_sigma >= 0.0))
        throw std::invalid_argument("ga: mutation_sigma must be >= 0");
    if (!(init_range >= 0.0))
        throw std::invalid_argument("ga: init_range must be >= 0");
    if (!(gene_clip > 0.0))
        throw std::invalid_argument("ga: gene_clip must be > 0");
    if (trials_per_eval < 1)
        throw std::invalid_argument("ga: trials_per_eval must be >= 1");
}

double evaluate(const Genotype& genotype,
                const std::vector<MazeSpec>& eval_mazes,
                const SimParams& params, std::uint64_t seed) {
    if (eval_mazes.empty())
        throw std::invalid_argument("evaluate: no evaluation mazes");
    TrialOptions lean;
    lean.record_trajectory = false;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t m = 0; m < eval_mazes.size(); ++m) {
        const TrialResult r = run_trial(genotype, eval_mazes[m], params,
                                        std::nullopt,
                                        splitmix64(seed ^ (m + 1)), lean);
        sum += r.fitness;
        ++n;
    }
    return sum / n;
}

GaRun::GaRun(GaConfig config, std::vector<MazeSpec> eval_mazes,
             SimParams params)
    : config_(std::move(config)),
      eval_mazes_(std::move(eval_mazes)),
      params_(params),
      topology_(NetworkTopology::standard()),
      rng_(config_.master_seed) {
    config_.validate();
    if (eval_mazes_.empty())
        throw std::invalid_argument("ga: no evaluation mazes");
    population_.assign(config_.population_size, zero_genotype(topology_));
    std::uniform_real_distribution<double> init(-config_.init_range,
                                                config_.init_range);
    for (auto& g : population_)
        for (auto& w : g.weights) w = init(rng_);
}

const GenerationStats& GaRun::step() {
    if (done()) throw std::logic_error("ga: run already complete");

    std::vector<double> fitness(population_.size(), 0.0);
    parallel_for(population_.size(), config_.threads, [&](std::size_t i) {
        const std::uint64_t base = eval_seed(config_.master_seed, i);
        double f = 0.0;
        for (int t = 0; t < config_.trials_per_eval; ++t) {
            const std::uint64_t s = t == 0 ? base : splitmix64(base + t);
            f += evaluate(population_[i], eval_mazes_, params_, s);
        }
        fitness[i] = f / config_.trials_per_eval;
    });

    std::vector<std::size_t> order(population_.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return fitness[a] > fitness[b];
                     });

    GenerationStats stats;
    stats.generation = generation_;
    stats.best_fitness = fitness[order.front()];
    stats.min_fitness = fitness[order.back()];
    stats.mean_fitness =
        std::accumulate(fitness.begin(), fitness.end(), 0.0) / fitness.size();
    stats.best_genotype = population_[order.front()];
    record_.generations.push_back(std::move(stats));

    if (generation_ + 1 < config_.generations) {
        const std::size_t genes = genotype_length(topology_);
        std::vector<Genotype> next;
        next.reserve(population_.size());
        for (int e = 0; e < config_.elitism_count; ++e)
            next.push_back(population_[order[e]]);

        std::uniform_int_distribution<std::size_t> pick(
            0, population_.size() - 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> gauss(0.0, config_.mutation_sigma);

        const auto tournament = [&]() -> std::size_t {
            std::size_t best = pick(rng_);
            for (int k = 1; k < config_.tournament_size; ++k) {
                const std::size_t idx = pick(rng_);
                if (fitness[idx] > fitness[best]) best = idx;
            }
            return best;
        };

        while (next.size() < population_.size()) {
            const std::size_t pa = tournament();
            const std::size_t pb = tournament();
            Genotype child = zero_genotype(topology_);
            if (unit(rng_) < config_.crossover_rate) {
                const Genotype& a = population_[pa];
                const Genotype& b = population_[pb];
                for (std::size_t g = 0; g < genes; ++g)
                    child.weights[g] =
                        unit(rng_) < 0.5 ? a.weights[g] : b.weights[g];
            } else {
                child = fitness[pa] >= fitness[pb] ? population_[pa]
                                                   : population_[pb];
            }
            for (std::size_t g = 0; g < genes; ++g) {
                if (unit(rng_) < config_.mutation_rate) {
                    child.weights[g] =
                        std::clamp(child.weights[g] + gauss(rng_),
                                   -config_.gene_clip, config_.gene_clip);
                }
            }
            next.push_back(std::move(child));
        }
        population_ = std::move(next);
    }

    ++generation_;
    return record_.generations.back();
}

EvolutionRecord GaRun::finish() {
    if (record_.generations.empty())
        throw std::logic_error("ga: no generations evaluated");
    const GenerationStats* best = &record_.generations.front();
    for (const auto& g : record_.generations)
        if (g.best_fitness > best->best_fitness) best = &g;
    record_.champion = best->best_genotype;
    record_.champion_fitness = best->best_fitness;
    return record_;
}

void GaRun::save_checkpoint(const std::string& path) const {
    nlohmann::json j;
    j["format"] = "ga-checkpoint";
    j["version"] = 1;
    j["generation"] = generation_;
    j["topology"] = topology_.layer_sizes;

    nlohmann::json cfg;
    cfg["population_size"] = config_.population_size;
    cfg["generations"] = config_.generations;
    cfg["elitism_count"] = config_.elitism_count;
    cfg["tournament_size"] = config_.tournament_size;
    cfg["crossover_rate"] = config_.crossover_rate;
    cfg["mutation_rate"] = config_.mutation_rate;
    cfg["mutation_sigma"] = config_.mutation_sigma;
    cfg["init_range"] = config_.init_range;
    cfg["gene_clip"] = config_.gene_clip;
    cfg["trials_per_eval"] = config_.trials_per_eval;
    cfg["master_seed"] = config_.master_seed;
    cfg["threads"] = config_.threads;
    j["config"] = cfg;

    std::ostringstream state;
    state << rng_;
    j["rng"] = state.str();

    nlohmann::json pop = nlohmann::json::array();
    for (const auto& g : population_) pop.push_back(g.weights);
    j["population"] = pop;

    nlohmann::json hist = nlohmann::json::array();
    for (const auto& g : record_.generations) {
        nlohmann::json row;
        row["generation"] = g.generation;
        row["best_fitness"] = g.best_fitness;
        row["mean_fitness"] = g.mean_fitness;
        row["min_fitness"] = g.min_fitness;
        row["best_weights"] = g.best_genotype.weights;
        hist.push_back(std::move(row));
    }
    j["history"] = hist;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << j.dump(2) << '\n';
}

GaRun GaRun::from_checkpoint(const std::string& path,
                             std::vector<MazeSpec> eval_mazes,
                             SimParams params) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": invalid JSON: " + e.what());
    }
    if (j.value("format", "") != "ga-checkpoint")
        throw std::runtime_error(path + ": not a GA checkpoint file");

    GaConfig cfg;
    const auto& c = j.at("config");
    cfg.population_size = c.at("population_size").get<int>();
    cfg.generations = c.at("generations").get<int>();
    cfg.elitism_count = c.at("elitism_count").get<int>();
    cfg.tournament_size = c.at("tournament_size").get<int>();
    cfg.crossover_rate = c.at("crossover_rate").get<double>();
    cfg.mutation_rate = c.at("mutation_rate").get<double>();
    cfg.mutation_sigma = c.at("mutation_sigma").get<double>();
    cfg.init_range = c.at("init_range").get<double>();
    cfg.gene_clip = c.at("gene_clip").get<double>();
    cfg.trials_per_eval = c.at("trials_per_eval").get<int>();
    cfg.master_seed = c.at("master_seed").get<std::uint64_t>();
    cfg.threads = c.at("threads").get<int>();

    GaRun run(cfg, std::move(eval_mazes), params);

    const auto topo = j.at("topology").get<std::vector<int>>();
    if (topo != run.topology_.layer_sizes)
        throw std::runtime_error(path + ": topology mismatch");

    const std::size_t genes = genotype_length(run.topology_);
    const auto& pop = j.at("population");
    if (pop.size() != static_cast<std::size_t>(cfg.population_size))
        throw std::runtime_error(path + ": population size mismatch");
    for (std::size_t i = 0; i < pop.size(); ++i) {
        auto w = pop[i].get<std::vector<double>>();
        if (w.size() != genes)
            throw std::runtime_error(path + ": genotype length mismatch");
        run.population_[i].weights = std::move(w);
    }

    run.generation_ = j.at("generation").get<int>();
    if (run.generation_ < 0 || run.generation_ > cfg.generations)
        throw std::runtime_error(path + ": generation out of range");

    std::istringstream state(j.at("rng").get<std::string>());
    state >> run.rng_;
    if (!state) throw std::runtime_error(path + ": bad RNG state");

    run.record_.generations.clear();
    for (const auto& row : j.at("history")) {
        GenerationStats g;
        g.generation = row.at("generation").get<int>();
        g.best_fitness = row.at("best_fitness").get<double>();
        g.mean_fitness = row.at("mean_fitness").get<double>();
        g.min_fitness = row.at("min_fitness").get<double>();
        g.best_genotype = zero_genotype(run.topology_);
        auto w = row.at("best_weights").get<std::vector<double>>();
        if (w.size() != genes)
            throw std::runtime_error(path + ": genotype length mismatch");
        g.best_genotype.weights = std::move(w);
        run.record_.generations.push_back(std::move(g));
    }
    if (run.record_.generations.size() !=
        static_cast<std::size_t>(run.generation_))
        throw std::runtime_error(path + ": history/generation mismatch");
    return run;
}

EvolutionRecord evolve(const GaConfig& config,
                       const std::vector<MazeSpec>& eval_mazes,
                       const SimParams& params,
                       const ProgressFn& on_generation) {
    GaRun run(config, eval_mazes, params);
    while (!run.done()) {
        const GenerationStats& stats = run.step();
        if (on_generation) on_generation(stats);
    }
    return run.finish();
}

}  // namespace tmaze
