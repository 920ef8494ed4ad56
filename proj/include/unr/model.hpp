#pragma once

#include <string>
#include <variant>
#include <vector>

namespace unr {

enum class Activation : uint8_t { none, relu, relu6, hard_sigmoid, hard_swish, leaky_relu };

Activation activation_from_string(const std::string& s);
std::string activation_to_string(Activation a);

using Matrix = std::vector<std::vector<double>>;

struct FlattenLayer {};

struct DenseLayer {
    Matrix weights;  // out x in
    std::vector<double> bias;
    Activation act = Activation::none;
    uint32_t leaky_shift = 2;  // slope 2^-shift for leaky_relu
};

// y = Wd * act(We * x) (+ x when square and residual)
struct EdLayer {
    Matrix we;  // k x n
    Matrix wd;  // m x k
    Activation act = Activation::relu;
    bool residual = false;
};

// channel gating via pooled statistics: s = hard_sigmoid(Wd relu(We z))
struct SeBlock {
    uint32_t reduction = 1;
    uint32_t grid_w = 1, grid_h = 1;
    Matrix we;  // (C/r) x C
    Matrix wd;  // C x (C/r)
};

// patchwise encoder-decoder convolution
struct EdConv {
    uint32_t patch = 1;
    uint32_t hidden = 1;
    uint32_t out_w = 0, out_h = 0, out_c = 0;
    Matrix we;  // hidden x (W*H*C/P^2)
    Matrix wd;  // (W'*H'*C'/P^2) x hidden
    Activation act = Activation::relu;
};

using LayerSpec = std::variant<FlattenLayer, DenseLayer, EdLayer, SeBlock, EdConv>;

struct ModelGraph {
    std::vector<uint32_t> input_shape;
    uint32_t rho = 16;
    std::vector<LayerSpec> layers;

    size_t input_count() const;
    // shape after each layer; validates chaining
    std::vector<std::vector<uint32_t>> shape_chain() const;
};

// Parses and shape-checks the model JSON document.
ModelGraph load_model(const std::string& json_text);
std::string model_to_json(const ModelGraph& g);

}  // namespace unr
