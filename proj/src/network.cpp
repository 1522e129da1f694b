#include "tmaze/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tmaze {

bool NetworkTopology::valid() const {
    if (layer_sizes.size() < 2) return false;
    for (int n : layer_sizes)
        if (n < 1) return false;
    return true;
}

std::size_t genotype_length(const NetworkTopology& topology) {
    if (!topology.valid())
        throw std::invalid_argument("genotype_length: invalid topology");
    std::size_t total = 0;
    for (std::size_t l = 0; l + 1 < topology.layer_sizes.size(); ++l) {
        const std::size_t fan_in = topology.layer_sizes[l];
        const std::size_t fan_out = topology.layer_sizes[l + 1];
        total += (fan_in + 1) * fan_out;
    }
    return total;
}

Genotype zero_genotype(const NetworkTopology& topology) {
    return {topology, std::vector<double>(genotype_length(topology), 0.0)};
}

Controller::Controller(NetworkTopology topology)
    : topology_(std::move(topology)) {
    if (!topology_.valid())
        throw std::invalid_argument("Controller: invalid topology");
    weights_.assign(genotype_length(topology_), 0.0);
    activations_.resize(topology_.layer_sizes.size());
    for (std::size_t l = 0; l < topology_.layer_sizes.size(); ++l)
        activations_[l].assign(topology_.layer_sizes[l], 0.0);
    offsets_.resize(topology_.layer_sizes.size() - 1);
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < topology_.layer_sizes.size(); ++l) {
        offsets_[l] = off;
        off += (topology_.layer_sizes[l] + 1) * topology_.layer_sizes[l + 1];
    }
}

void Controller::load_genotype(const Genotype& genotype) {
    if (genotype.topology != topology_)
        throw std::invalid_argument("load_genotype: topology mismatch");
    if (genotype.weights.size() != weights_.size())
        throw std::invalid_argument("load_genotype: genome length " +
                                    std::to_string(genotype.weights.size()) +
                                    ", expected " +
                                    std::to_string(weights_.size()));
    weights_ = genotype.weights;
    for (auto& layer : activations_)
        std::fill(layer.begin(), layer.end(), 0.0);
}

const std::vector<double>& Controller::forward(std::span<const double> sensors) {
    if (sensors.size() != static_cast<std::size_t>(topology_.inputs()))
        throw std::invalid_argument("forward: expected " +
                                    std::to_string(topology_.inputs()) +
                                    " sensor values, got " +
                                    std::to_string(sensors.size()));
    std::copy(sensors.begin(), sensors.end(), activations_[0].begin());

    for (std::size_t l = 0; l + 1 < topology_.layer_sizes.size(); ++l) {
        const int n_in = topology_.layer_sizes[l];
        const int n_out = topology_.layer_sizes[l + 1];
        const double* w = weights_.data() + offsets_[l];
        const std::vector<double>& pre = activations_[l];
        std::vector<double>& post = activations_[l + 1];
        for (int j = 0; j < n_out; ++j) {
            const double* row = w + static_cast<std::size_t>(j) * (n_in + 1);
            double sum = row[n_in];  // bias
            for (int i = 0; i < n_in; ++i) sum += row[i] * pre[i];
            post[j] = std::tanh(sum);
        }
    }
    return activations_.back();
}

}  // namespace tmaze
