#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace tmaze {

// Layer sizes from input to output. The standard controller is
// [16, 7, 5, 8, 4, 2]: 16 sensor inputs, four hidden layers, 2 motor outputs.
struct NetworkTopology {
    std::vector<int> layer_sizes;

    static NetworkTopology standard() { return {{16, 7, 5, 8, 4, 2}}; }

    bool valid() const;
    int inputs() const { return layer_sizes.front(); }
    int outputs() const { return layer_sizes.back(); }
    int layer_count() const { return static_cast<int>(layer_sizes.size()); }

    bool operator==(const NetworkTopology&) const = default;
};

// Number of genes a topology needs: per layer pair, one weight per
// (post, pre) plus one bias per post neuron.
std::size_t genotype_length(const NetworkTopology& topology);

// Flat weight vector, layer-major. Within a layer the block is row-major by
// post-synaptic neuron: fan_in input weights followed by the bias. This is
// also the on-disk genome layout.
struct Genotype {
    NetworkTopology topology;
    std::vector<double> weights;

    bool matches(const NetworkTopology& t) const { return topology == t; }
    bool operator==(const Genotype&) const = default;
};

Genotype zero_genotype(const NetworkTopology& topology);

// MLP controller. Holds the effective weights (which plasticity may push
// away from the genotype) and the activations of the most recent forward
// pass. tanh at every non-input layer.
class Controller {
public:
    explicit Controller(NetworkTopology topology);

    void load_genotype(const Genotype& genotype);

    // sensors.size() must equal the input layer size. Returns the output
    // activations; for the standard topology these are the normalized
    // left/right wheel commands.
    const std::vector<double>& forward(std::span<const double> sensors);

    const NetworkTopology& topology() const { return topology_; }
    const std::vector<double>& effective_weights() const { return weights_; }
    std::vector<double>& effective_weights() { return weights_; }
    const std::vector<std::vector<double>>& layer_activations() const {
        return activations_;
    }

    // Offset of the weight block for the connections into layer+1.
    std::size_t layer_offset(int layer) const { return offsets_[layer]; }

private:
    NetworkTopology topology_;
    std::vector<double> weights_;
    std::vector<std::vector<double>> activations_;
    std::vector<std::size_t> offsets_;
};

}  // namespace tmaze
