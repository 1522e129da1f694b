#include "tmaze/plasticity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmaze {

void PlasticityConfig::validate() const {
    if (!(base_rate >= 0.0) || !std::isfinite(base_rate))
        throw std::invalid_argument("plasticity: base_rate must be >= 0");
    if (trace_decay < 0.0 || trace_decay >= 1.0)
        throw std::invalid_argument("plasticity: trace_decay must be in [0,1)");
    if (trace_update <= 0.0 || trace_update > 1.0)
        throw std::invalid_argument(
            "plasticity: trace_update must be in (0,1]");
    if (!(weight_clip > 0.0))
        throw std::invalid_argument("plasticity: weight_clip must be > 0");
    if (!std::isfinite(fitness_floor))
        throw std::invalid_argument("plasticity: fitness_floor must be finite");
}

double effective_rate(double base_rate, double fitness, double fitness_floor) {
    const double f = std::clamp(fitness, 0.0, 1.0);
    return base_rate * std::max(fitness_floor, f);
}

PlasticityState::PlasticityState(const NetworkTopology& topology,
                                 PlasticityConfig config)
    : topology_(topology), config_(config) {
    config_.validate();
    traces_.resize(topology_.layer_sizes.size() - 1);
    for (std::size_t l = 0; l + 1 < topology_.layer_sizes.size(); ++l) {
        const std::size_t n_in = topology_.layer_sizes[l];
        const std::size_t n_out = topology_.layer_sizes[l + 1];
        traces_[l].assign(n_in * n_out, 0.0);
    }
}

void PlasticityState::begin_trial(const Genotype& genotype) {
    if (genotype.topology != topology_)
        throw std::invalid_argument("begin_trial: topology mismatch");
    original_genome_ = genotype;
    for (auto& t : traces_) std::fill(t.begin(), t.end(), 0.0);
    cumulative_abs_change_ = 0.0;
    trial_active_ = true;
}

double PlasticityState::end_trial(Controller& controller) {
    if (!trial_active_)
        throw std::logic_error("end_trial: no trial in progress");
    controller.effective_weights() = original_genome_.weights;
    trial_active_ = false;
    return cumulative_abs_change_;
}

void PlasticityState::update_traces(
    const std::vector<std::vector<double>>& activations) {
    if (activations.size() != topology_.layer_sizes.size())
        throw std::invalid_argument("update_traces: layer count mismatch");
    for (std::size_t l = 0; l + 1 < activations.size(); ++l) {
        const std::vector<double>& pre = activations[l];
        const std::vector<double>& post = activations[l + 1];
        const std::size_t n_in = topology_.layer_sizes[l];
        const std::size_t n_out = topology_.layer_sizes[l + 1];
        if (pre.size() != n_in || post.size() != n_out)
            throw std::invalid_argument("update_traces: activation shape "
                                        "mismatch");
        std::vector<double>& trace = traces_[l];
        for (std::size_t j = 0; j < n_out; ++j) {
            const double post_j = post[j];
            double* row = trace.data() + j * n_in;
            for (std::size_t i = 0; i < n_in; ++i) {
                const double corr = post_j * pre[i];
                row[i] = config_.trace_decay * row[i] +
                         config_.trace_update * corr;
            }
        }
    }
}

double PlasticityState::apply_update(Controller& controller, double rate) {
    if (rate < 0.0)
        throw std::invalid_argument("apply_update: rate must be >= 0");
    double step_abs_change = 0.0;
    std::vector<double>& weights = controller.effective_weights();
    const double clip = config_.weight_clip;
    for (std::size_t l = 0; l + 1 < topology_.layer_sizes.size(); ++l) {
        const std::size_t n_in = topology_.layer_sizes[l];
        const std::size_t n_out = topology_.layer_sizes[l + 1];
        const std::vector<double>& trace = traces_[l];
        double* block = weights.data() + controller.layer_offset(l);
        for (std::size_t j = 0; j < n_out; ++j) {
            double* row = block + j * (n_in + 1);
            const double* trow = trace.data() + j * n_in;
            for (std::size_t i = 0; i < n_in; ++i) {
                const double delta = rate * trow[i];
                if (delta == 0.0) continue;
                step_abs_change += std::abs(delta);
                row[i] = std::clamp(row[i] + delta, -clip, clip);
            }
        }
    }
    cumulative_abs_change_ += step_abs_change;
    return step_abs_change;
}

}  // namespace tmaze
