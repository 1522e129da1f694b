// Command-line front end: `evolve` trains a controller with the GA, `run`
// executes an experiment from a genome, `report` computes correlation tables
// from a trial's logs, `world` exports the built-in maze as a world file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tmaze/evolution.hpp"
#include "tmaze/experiment.hpp"
#include "tmaze/io.hpp"
#include "tmaze/world.hpp"

namespace fs = std::filesystem;
using namespace tmaze;

namespace {

WorldFile load_world_or_default(const std::string& path) {
    if (path.empty()) {
        WorldFile w;
        w.maze = default_maze();
        return w;
    }
    return load_world(path);
}

std::string trim_float(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Variant name for output directories: "base", "obs2", "lum0.1", ...
std::string variant_prefix(int obstacles, double luminosity) {
    std::string name;
    if (obstacles > 0) name = "obs" + std::to_string(obstacles);
    if (luminosity != 1.0) {
        if (!name.empty()) name += '_';
        name += "lum" + trim_float(luminosity);
    }
    return name.empty() ? "base" : name;
}

MazeSpec make_variant(const MazeSpec& base, int obstacles, double luminosity) {
    return base.with_obstacle_count(static_cast<std::size_t>(obstacles))
        .with_luminosity(luminosity);
}

void write_stats_csv(const EvolutionRecord& record, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "generation,best_fitness,mean_fitness,min_fitness\n";
    for (const auto& g : record.generations)
        out << g.generation << ',' << csv_cell(g.best_fitness) << ','
            << csv_cell(g.mean_fitness) << ',' << csv_cell(g.min_fitness)
            << '\n';
}

int cmd_evolve(const std::string& world_path, const std::string& out_dir,
               const GaConfig& config, int obstacles, double luminosity,
               int checkpoint_every, const std::string& resume_path) {
    const WorldFile world = load_world_or_default(world_path);
    const MazeSpec variant = make_variant(world.maze, obstacles, luminosity);
    std::vector<MazeSpec> eval_mazes;
    for (const auto& t : both_directions(variant, "train"))
        eval_mazes.push_back(t.maze);

    fs::create_directories(out_dir);
    const std::string stats_path = out_dir + "/stats.csv";
    const std::string checkpoint_path = out_dir + "/checkpoint.json";
    const std::string champion_path = out_dir + "/champion.json";

    GaRun run = resume_path.empty()
                    ? GaRun(config, eval_mazes, world.sim)
                    : GaRun::from_checkpoint(resume_path, eval_mazes,
                                             world.sim);
    if (!resume_path.empty())
        std::cout << "resumed from " << resume_path << " at generation "
                  << run.generation() << " (GA flags from checkpoint)\n";

    while (!run.done()) {
        const GenerationStats& s = run.step();
        std::cout << "gen " << s.generation << "  best "
                  << csv_cell(s.best_fitness) << "  mean "
                  << csv_cell(s.mean_fitness) << '\n';
        write_stats_csv(run.record(), stats_path);
        if (checkpoint_every > 0 &&
            (run.generation() % checkpoint_every == 0 || run.done()))
            run.save_checkpoint(checkpoint_path);
    }
    const EvolutionRecord record = run.finish();
    write_stats_csv(record, stats_path);
    save_genome(record.champion, champion_path);
    std::cout << "champion fitness " << csv_cell(record.champion_fitness)
              << " -> " << champion_path << '\n';
    return 0;
}

int cmd_run(const std::string& world_path, const std::string& genome_path,
            const std::string& mode_name, double base_rate, int obstacles,
            double luminosity, std::uint64_t seed,
            const std::string& out_dir) {
    const WorldFile world = load_world_or_default(world_path);
    ExperimentConfig config;
    config.genome = load_genome(genome_path);
    config.sim = world.sim;
    config.mode = mode_name == "ga" ? ControlMode::ga : ControlMode::hebbian;
    config.plasticity.base_rate = base_rate;
    config.seed = seed;
    config.out_dir = out_dir;
    config.world_file = world_path;
    config.genome_file = genome_path;

    const MazeSpec variant = make_variant(world.maze, obstacles, luminosity);
    config.trials =
        both_directions(variant, variant_prefix(obstacles, luminosity));

    const ExperimentResult result = run_experiment(config);

    std::printf("%-16s %-8s %-12s %-12s %-12s %-12s %-12s\n", "trial",
                "success", "time_s", "path_m", "speed_mps", "final_err",
                "dw_cum");
    for (const auto& row : result.rows) {
        const TrialMetrics& m = row.metrics;
        std::printf("%-16s %-8d %-12s %-12s %-12s %-12s %-12s\n",
                    row.name.c_str(), m.success ? 1 : 0,
                    m.time_to_goal ? csv_cell(*m.time_to_goal).c_str() : "-",
                    csv_cell(m.path_length).c_str(),
                    csv_cell(m.average_speed).c_str(),
                    csv_cell(m.final_position_error).c_str(),
                    m.weight_change_cumulative
                        ? csv_cell(*m.weight_change_cumulative).c_str()
                        : "-");
    }
    return 0;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

int cmd_report(const std::string& trial_dir, std::string out_path) {
    const auto wrows = read_csv(trial_dir + "/weights.csv");
    const auto srows = read_csv(trial_dir + "/sensors.csv");
    if (wrows.size() < 2 || srows.size() < 2)
        throw std::runtime_error(trial_dir + ": empty trial logs");

    WeightChangeLog weight_log;
    for (std::size_t i = 1; i < wrows.size(); ++i) {
        const auto& r = wrows[i];
        if (r.size() < 5)
            throw std::runtime_error(trial_dir + ": malformed weights.csv");
        WeightChangeEntry e;
        e.step = std::stoi(r[0]);
        e.fitness = std::stod(r[1]);
        e.effective_rate = std::stod(r[2]);
        e.sum_abs_delta = std::stod(r[3]);
        e.max_abs_weight = std::stod(r[4]);
        weight_log.push_back(e);
    }
    std::vector<SensorFrame> sensors;
    for (std::size_t i = 1; i < srows.size(); ++i) {
        const auto& r = srows[i];
        if (r.size() < 17)
            throw std::runtime_error(trial_dir + ": malformed sensors.csv");
        SensorFrame f;
        for (int c = 0; c < 8; ++c) f.light[c] = std::stod(r[1 + c]);
        for (int c = 0; c < 8; ++c) f.proximity[c] = std::stod(r[9 + c]);
        sensors.push_back(f);
    }

    const CorrelationReport report = correlation_report(weight_log, sensors);
    if (out_path.empty()) out_path = trial_dir + "/correlations.csv";
    write_correlation_csv(report, out_path);

    const std::string pairs_path =
        fs::path(out_path).parent_path() / "fitness_change_pairs.csv";
    {
        std::ofstream out(pairs_path);
        if (!out) throw std::runtime_error("cannot write " + pairs_path);
        out << "step,F,sum_abs_delta\n";
        for (std::size_t i = 0; i < report.fitness_change_pairs.size(); ++i)
            out << weight_log[i].step << ','
                << csv_cell(report.fitness_change_pairs[i].first) << ','
                << csv_cell(report.fitness_change_pairs[i].second) << '\n';
    }

    std::cout << "fitness-change correlation: "
              << (report.fitness_corr_defined
                      ? csv_cell(report.fitness_change_corr)
                      : "undefined")
              << "\nwrote " << out_path << " and " << pairs_path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"T-maze navigation testbed: evolved MLP controllers with "
                 "fitness-modulated Hebbian adaptation"};
    app.require_subcommand(1);

    std::string world_path, out_dir, genome_path, resume_path, trial_dir;
    std::string report_out;
    std::string mode_name = "ga";
    GaConfig ga;
    double base_rate = 0.002;
    double luminosity = 1.0;
    int obstacles = 0;
    int checkpoint_every = 10;
    std::uint64_t seed = 1;

    CLI::App* evolve_cmd =
        app.add_subcommand("evolve", "train a controller with the GA");
    evolve_cmd->add_option("--world", world_path, "world JSON file");
    evolve_cmd->add_option("--out", out_dir, "output directory")->required();
    evolve_cmd->add_option("--seed", ga.master_seed, "GA master seed");
    evolve_cmd->add_option("--population", ga.population_size, "");
    evolve_cmd->add_option("--generations", ga.generations, "");
    evolve_cmd->add_option("--elitism", ga.elitism_count, "");
    evolve_cmd->add_option("--tournament", ga.tournament_size, "");
    evolve_cmd->add_option("--crossover-rate", ga.crossover_rate, "");
    evolve_cmd->add_option("--mutation-rate", ga.mutation_rate, "");
    evolve_cmd->add_option("--mutation-sigma", ga.mutation_sigma, "");
    evolve_cmd->add_option("--trials-per-eval", ga.trials_per_eval, "");
    evolve_cmd->add_option("--threads", ga.threads,
                           "evaluation threads (0 = all cores)");
    evolve_cmd->add_option("--luminosity", luminosity,
                           "training luminosity scale");
    evolve_cmd->add_option("--obstacles", obstacles,
                           "active obstacles from the catalog");
    evolve_cmd->add_option("--checkpoint-every", checkpoint_every,
                           "generations between checkpoints (0 = off)");
    evolve_cmd->add_option("--resume", resume_path,
                           "checkpoint file to resume from");

    CLI::App* run_cmd =
        app.add_subcommand("run", "run an experiment from a genome");
    run_cmd->add_option("--world", world_path, "world JSON file");
    run_cmd->add_option("--genome", genome_path, "genome JSON file")
        ->required();
    run_cmd->add_option("--mode", mode_name, "ga | hebbian")
        ->check(CLI::IsMember({"ga", "hebbian"}));
    run_cmd->add_option("--base-rate", base_rate,
                        "Hebbian base learning rate");
    run_cmd->add_option("--luminosity", luminosity, "luminosity scale");
    run_cmd->add_option("--obstacles", obstacles,
                        "active obstacles from the catalog");
    run_cmd->add_option("--seed", seed, "experiment seed");
    run_cmd->add_option("--out", out_dir, "output directory")->required();

    CLI::App* report_cmd = app.add_subcommand(
        "report", "correlation tables from a trial's logs");
    report_cmd
        ->add_option("--trial", trial_dir,
                     "trial directory with weights.csv and sensors.csv")
        ->required();
    report_cmd->add_option("--out", report_out,
                           "output CSV (default <trial>/correlations.csv)");

    CLI::App* world_cmd =
        app.add_subcommand("world", "export the built-in world file");
    world_cmd->add_option("--out", out_dir, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (evolve_cmd->parsed())
            return cmd_evolve(world_path, out_dir, ga, obstacles, luminosity,
                              checkpoint_every, resume_path);
        if (run_cmd->parsed())
            return cmd_run(world_path, genome_path, mode_name, base_rate,
                           obstacles, luminosity, seed, out_dir);
        if (report_cmd->parsed()) return cmd_report(trial_dir, report_out);
        if (world_cmd->parsed()) {
            WorldFile w;
            w.maze = default_maze();
            if (const fs::path p = fs::path(out_dir).parent_path();
                !p.empty())
                fs::create_directories(p);
            save_world(w, out_dir);
            std::cout << "wrote " << out_dir << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
