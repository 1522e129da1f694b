#include "tmaze/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "tmaze/io.hpp"

namespace tmaze {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(ControlMode mode) {
    return mode == ControlMode::ga ? "ga" : "hebbian";
}

std::vector<TrialSpec> both_directions(const MazeSpec& maze,
                                       const std::string& prefix) {
    std::vector<TrialSpec> trials;
    MazeSpec right = maze;
    if (!right.light) right.light = default_maze().light;
    trials.push_back({prefix + "_right", right});
    trials.push_back({prefix + "_left", maze.without_light()});
    return trials;
}

namespace {

void write_trajectory_csv(const TrialResult& trial, double dt,
                          const fs::path& path) {
    const TrialOutcome& outcome = trial.outcome;
    std::ofstream out(path);
    out << "step,t,x,y,heading,success_flag\n";
    for (std::size_t i = 0; i < outcome.trajectory.size(); ++i) {
        const Vec2 p = outcome.trajectory[i];
        const bool last = i + 1 == outcome.trajectory.size();
        out << i << ',' << csv_cell(i * dt) << ',' << csv_cell(p.x) << ','
            << csv_cell(p.y) << ',' << csv_cell(trial.headings[i]) << ','
            << (last && outcome.success ? 1 : 0) << '\n';
    }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult result;
    const bool hebbian = config.mode == ControlMode::hebbian;

    std::optional<PlasticityConfig> plasticity;
    if (hebbian) {
        plasticity = config.plasticity;
        plasticity->enabled = true;
    }

    const bool writing = !config.out_dir.empty();
    fs::path out_root(config.out_dir);
    if (writing) fs::create_directories(out_root / "trials");

    TrialOptions options;
    options.record_trajectory = true;
    options.record_sensors = true;
    options.record_fitness = true;
    options.record_weights = hebbian;

    for (const TrialSpec& spec : config.trials) {
        TrialResult trial = run_trial(config.genome, spec.maze, config.sim,
                                      plasticity, config.seed, options);
        if (writing) {
            const fs::path dir = out_root / "trials" / spec.name;
            fs::create_directories(dir);
            write_trajectory_csv(trial, config.sim.dt,
                                 dir / "trajectory.csv");
            {
                std::ofstream out(dir / "sensors.csv");
                out << "step";
                for (int i = 0; i < 8; ++i) out << ",light" << i;
                for (int i = 0; i < 8; ++i) out << ",prox" << i;
                out << '\n';
                for (std::size_t s = 0; s < trial.sensor_log.size(); ++s) {
                    out << s;
                    for (double v : trial.sensor_log[s].light)
                        out << ',' << csv_cell(v);
                    for (double v : trial.sensor_log[s].proximity)
                        out << ',' << csv_cell(v);
                    out << '\n';
                }
            }
            {
                std::ofstream out(dir / "fitness.csv");
                out << "step,forward,avoid,spinning,junction,combined,reward,"
                       "final\n";
                for (std::size_t s = 0; s < trial.fitness_log.size(); ++s) {
                    const FitnessSample& f = trial.fitness_log[s];
                    out << s << ',' << csv_cell(f.forward) << ','
                        << csv_cell(f.avoid_collision) << ','
                        << csv_cell(f.spinning) << ',' << f.junction << ','
                        << csv_cell(f.combined) << ',' << csv_cell(f.reward)
                        << ',' << csv_cell(f.final) << '\n';
                }
            }
            if (trial.weight_log) {
                std::ofstream out(dir / "weights.csv");
                out << "step,F,N_e,sum_abs_delta,max_abs_weight\n";
                for (const WeightChangeEntry& e : *trial.weight_log) {
                    out << e.step << ',' << csv_cell(e.fitness) << ','
                        << csv_cell(e.effective_rate) << ','
                        << csv_cell(e.sum_abs_delta) << ','
                        << csv_cell(e.max_abs_weight) << '\n';
                }
            }
        }
        result.rows.push_back({spec.name, trial.metrics});
        result.trials.push_back(std::move(trial));
    }

    if (writing) {
        {
            std::ofstream out(out_root / "metrics.csv");
            out << "trial,success,time_to_goal,path_length,average_speed,"
                   "final_position_error,min_position_error,"
                   "weight_change_cumulative,weight_change_per_step\n";
            for (const ExperimentRow& row : result.rows) {
                const TrialMetrics& m = row.metrics;
                out << row.name << ',' << m.success << ',';
                out << (m.time_to_goal ? csv_cell(*m.time_to_goal) : "nan");
                out << ',' << csv_cell(m.path_length) << ','
                    << csv_cell(m.average_speed) << ','
                    << csv_cell(m.final_position_error) << ','
                    << csv_cell(m.min_position_error) << ',';
                out << (m.weight_change_cumulative
                            ? csv_cell(*m.weight_change_cumulative)
                            : "NA");
                out << ','
                    << (m.weight_change_per_step
                            ? csv_cell(*m.weight_change_per_step)
                            : "NA")
                    << '\n';
            }
        }
        json summary;
        summary["mode"] = to_string(config.mode);
        summary["seed"] = config.seed;
        summary["trials"] = json::array();
        for (const ExperimentRow& row : result.rows)
            summary["trials"].push_back(row.name);
        if (hebbian) {
            summary["plasticity"] = {
                {"base_rate", config.plasticity.base_rate},
                {"fitness_floor", config.plasticity.fitness_floor},
                {"trace_decay", config.plasticity.trace_decay},
                {"trace_update", config.plasticity.trace_update},
                {"weight_clip", config.plasticity.weight_clip}};
        }
        summary["sim"] = {{"dt", config.sim.dt},
                          {"v_max", config.sim.v_max},
                          {"max_steps", config.sim.max_steps}};
        json inputs = json::object();
        if (!config.world_file.empty())
            inputs[config.world_file] = file_content_hash(config.world_file);
        if (!config.genome_file.empty())
            inputs[config.genome_file] = file_content_hash(config.genome_file);
        summary["input_hashes"] = inputs;
        std::ofstream out(out_root / "summary.json");
        out << summary.dump(2) << '\n';
    }
    return result;
}

namespace {

struct Pearson {
    double value = 0.0;
    bool defined = false;
};

bool all_equal(const std::vector<double>& v) {
    for (const double x : v)
        if (x != v.front()) return false;
    return true;
}

Pearson pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return {};
    // A constant side makes the correlation undefined; test exactly rather
    // than via the variance, which picks up mean-subtraction rounding.
    if (all_equal(x) || all_equal(y)) return {};
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return {};
    return {sxy / std::sqrt(sxx * syy), true};
}

}  // namespace

CorrelationReport correlation_report(const WeightChangeLog& weight_log,
                                     const std::vector<SensorFrame>& sensors) {
    if (weight_log.size() != sensors.size())
        throw std::invalid_argument(
            "correlation_report: log length mismatch");
    CorrelationReport report;
    std::vector<double> fitness(weight_log.size());
    std::vector<double> change(weight_log.size());
    for (std::size_t i = 0; i < weight_log.size(); ++i) {
        fitness[i] = weight_log[i].fitness;
        change[i] = weight_log[i].sum_abs_delta;
        report.fitness_change_pairs.emplace_back(fitness[i], change[i]);
    }
    const Pearson fc = pearson(fitness, change);
    report.fitness_change_corr =
        fc.defined ? fc.value : std::nan("");
    report.fitness_corr_defined = fc.defined;

    std::vector<double> channel(weight_log.size());
    for (int c = 0; c < 16; ++c) {
        for (std::size_t i = 0; i < sensors.size(); ++i)
            channel[i] = c < 8 ? sensors[i].light[c]
                               : sensors[i].proximity[c - 8];
        const Pearson p = pearson(channel, change);
        report.sensor_corr[c] = p.defined ? p.value : std::nan("");
        report.sensor_corr_defined[c] = p.defined;
    }
    return report;
}

void write_correlation_csv(const CorrelationReport& report,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "channel,pearson,defined\n";
    out << "fitness,"
        << (report.fitness_corr_defined ? csv_cell(report.fitness_change_corr)
                                        : "nan")
        << ',' << (report.fitness_corr_defined ? 1 : 0) << '\n';
    for (int c = 0; c < 16; ++c) {
        const std::string name =
            c < 8 ? "light" + std::to_string(c)
                  : "prox" + std::to_string(c - 8);
        out << name << ','
            << (report.sensor_corr_defined[c]
                    ? csv_cell(report.sensor_corr[c])
                    : "nan")
            << ',' << (report.sensor_corr_defined[c] ? 1 : 0) << '\n';
    }
}

}  // namespace tmaze
