#include "unr/model.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace unr {

using nlohmann::json;

Activation activation_from_string(const std::string& s) {
    if (s == "none" || s.empty()) return Activation::none;
    if (s == "relu") return Activation::relu;
    if (s == "relu6") return Activation::relu6;
    if (s == "hard_sigmoid") return Activation::hard_sigmoid;
    if (s == "hard_swish") return Activation::hard_swish;
    if (s == "leaky_relu") return Activation::leaky_relu;
    throw std::invalid_argument("unknown activation: " + s);
}

std::string activation_to_string(Activation a) {
    switch (a) {
        case Activation::none: return "none";
        case Activation::relu: return "relu";
        case Activation::relu6: return "relu6";
        case Activation::hard_sigmoid: return "hard_sigmoid";
        case Activation::hard_swish: return "hard_swish";
        case Activation::leaky_relu: return "leaky_relu";
    }
    return "none";
}

size_t ModelGraph::input_count() const {
    size_t n = 1;
    for (uint32_t d : input_shape) n *= d;
    return n;
}

namespace {

size_t volume(const std::vector<uint32_t>& shape) {
    size_t n = 1;
    for (uint32_t d : shape) n *= d;
    return n;
}

void check_matrix(const Matrix& m, size_t rows, size_t cols, const std::string& what) {
    if (m.size() != rows) throw std::invalid_argument(what + ": expected " +
                                                      std::to_string(rows) + " rows");
    for (const auto& row : m) {
        if (row.size() != cols)
            throw std::invalid_argument(what + ": expected " + std::to_string(cols) + " columns");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument(what + ": non-finite weight");
    }
}

}  // namespace

std::vector<std::vector<uint32_t>> ModelGraph::shape_chain() const {
    if (layers.empty()) throw std::invalid_argument("model has no layers");
    if (input_shape.empty()) throw std::invalid_argument("model has no input shape");
    std::vector<std::vector<uint32_t>> chain{input_shape};
    for (size_t li = 0; li < layers.size(); ++li) {
        const std::vector<uint32_t>& cur = chain.back();
        const std::string at = "layer " + std::to_string(li);
        std::visit(
            [&](const auto& layer) {
                using T = std::decay_t<decltype(layer)>;
                if constexpr (std::is_same_v<T, FlattenLayer>) {
                    chain.push_back({uint32_t(volume(cur))});
                } else if constexpr (std::is_same_v<T, DenseLayer>) {
                    if (cur.size() != 1)
                        throw std::invalid_argument(at + ": dense needs a flat input");
                    check_matrix(layer.weights, layer.weights.size(), cur[0], at + " weights");
                    if (layer.weights.empty()) throw std::invalid_argument(at + ": empty dense");
                    if (!layer.bias.empty() && layer.bias.size() != layer.weights.size())
                        throw std::invalid_argument(at + ": bias length mismatch");
                    for (double v : layer.bias)
                        if (!std::isfinite(v)) throw std::invalid_argument(at + ": bad bias");
                    chain.push_back({uint32_t(layer.weights.size())});
                } else if constexpr (std::is_same_v<T, EdLayer>) {
                    if (cur.size() != 1)
                        throw std::invalid_argument(at + ": ed layer needs a flat input");
                    size_t k = layer.we.size();
                    if (k == 0) throw std::invalid_argument(at + ": empty encoder");
                    check_matrix(layer.we, k, cur[0], at + " we");
                    size_t m = layer.wd.size();
                    check_matrix(layer.wd, m, k, at + " wd");
                    if (layer.residual && m != cur[0])
                        throw std::invalid_argument(at + ": residual requires n == m");
                    chain.push_back({uint32_t(m)});
                } else if constexpr (std::is_same_v<T, SeBlock>) {
                    if (cur.size() != 3)
                        throw std::invalid_argument(at + ": se block needs a W x H x C volume");
                    uint32_t c = cur[2];
                    if (layer.reduction == 0 || c % layer.reduction)
                        throw std::invalid_argument(at + ": reduction must divide channels");
                    if (layer.grid_w == 0 || layer.grid_h == 0 || cur[0] % layer.grid_w ||
                        cur[1] % layer.grid_h)
                        throw std::invalid_argument(at + ": grid must divide spatial dims");
                    check_matrix(layer.we, c / layer.reduction, c, at + " we");
                    check_matrix(layer.wd, c, c / layer.reduction, at + " wd");
                    chain.push_back(cur);
                } else if constexpr (std::is_same_v<T, EdConv>) {
                    if (cur.size() != 3)
                        throw std::invalid_argument(at + ": edconv needs a W x H x C volume");
                    uint32_t p = layer.patch;
                    if (p == 0 || cur[0] % p || cur[1] % p)
                        throw std::invalid_argument(at + ": patch must divide input dims");
                    if (layer.out_w % p || layer.out_h % p)
                        throw std::invalid_argument(at + ": patch must divide output dims");
                    size_t in_block = volume(cur) / (p * p);
                    size_t out_block =
                        size_t(layer.out_w) * layer.out_h * layer.out_c / (p * p);
                    check_matrix(layer.we, layer.hidden, in_block, at + " we");
                    check_matrix(layer.wd, out_block, layer.hidden, at + " wd");
                    chain.push_back({layer.out_w, layer.out_h, layer.out_c});
                }
            },
            layers[li]);
    }
    return chain;
}

namespace {

Matrix parse_matrix(const json& j) {
    Matrix m;
    for (const auto& row : j) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(v.get<double>());
        m.push_back(std::move(r));
    }
    return m;
}

json matrix_json(const Matrix& m) {
    json j = json::array();
    for (const auto& row : m) j.push_back(row);
    return j;
}

}  // namespace

ModelGraph load_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("model json: ") + e.what());
    }
    ModelGraph g;
    if (!j.contains("input_shape") || !j.contains("layers"))
        throw std::invalid_argument("model json: missing input_shape or layers");
    for (const auto& d : j.at("input_shape")) g.input_shape.push_back(d.get<uint32_t>());
    g.rho = j.value("rho", 16u);
    if (g.rho == 0) throw std::invalid_argument("model json: rho must be positive");
    for (const auto& lj : j.at("layers")) {
        std::string type = lj.at("type").get<std::string>();
        if (type == "flatten") {
            g.layers.push_back(FlattenLayer{});
        } else if (type == "dense") {
            DenseLayer l;
            l.weights = parse_matrix(lj.at("weights"));
            if (lj.contains("bias"))
                for (const auto& v : lj.at("bias")) l.bias.push_back(v.get<double>());
            l.act = activation_from_string(lj.value("activation", "none"));
            l.leaky_shift = lj.value("leaky_shift", 2u);
            g.layers.push_back(std::move(l));
        } else if (type == "ed") {
            EdLayer l;
            l.we = parse_matrix(lj.at("we"));
            l.wd = parse_matrix(lj.at("wd"));
            l.act = activation_from_string(lj.value("activation", "relu"));
            l.residual = lj.value("residual", false);
            g.layers.push_back(std::move(l));
        } else if (type == "se") {
            SeBlock l;
            l.reduction = lj.at("r").get<uint32_t>();
            if (lj.contains("grid")) {
                l.grid_w = lj.at("grid").at(0).get<uint32_t>();
                l.grid_h = lj.at("grid").at(1).get<uint32_t>();
            }
            l.we = parse_matrix(lj.at("we"));
            l.wd = parse_matrix(lj.at("wd"));
            g.layers.push_back(std::move(l));
        } else if (type == "edconv") {
            EdConv l;
            l.patch = lj.at("p").get<uint32_t>();
            l.hidden = lj.at("k").get<uint32_t>();
            l.out_w = lj.at("out").at(0).get<uint32_t>();
            l.out_h = lj.at("out").at(1).get<uint32_t>();
            l.out_c = lj.at("out").at(2).get<uint32_t>();
            l.we = parse_matrix(lj.at("we"));
            l.wd = parse_matrix(lj.at("wd"));
            l.act = activation_from_string(lj.value("activation", "relu"));
            g.layers.push_back(std::move(l));
        } else {
            throw std::invalid_argument("model json: unknown layer type " + type);
        }
    }
    g.shape_chain();  // validates
    return g;
}

std::string model_to_json(const ModelGraph& g) {
    json j;
    j["input_shape"] = g.input_shape;
    j["rho"] = g.rho;
    json layers = json::array();
    for (const auto& l : g.layers) {
        json lj;
        std::visit(
            [&](const auto& layer) {
                using T = std::decay_t<decltype(layer)>;
                if constexpr (std::is_same_v<T, FlattenLayer>) {
                    lj["type"] = "flatten";
                } else if constexpr (std::is_same_v<T, DenseLayer>) {
                    lj["type"] = "dense";
                    lj["weights"] = matrix_json(layer.weights);
                    lj["bias"] = layer.bias;
                    lj["activation"] = activation_to_string(layer.act);
                    if (layer.act == Activation::leaky_relu) lj["leaky_shift"] = layer.leaky_shift;
                } else if constexpr (std::is_same_v<T, EdLayer>) {
                    lj["type"] = "ed";
                    lj["we"] = matrix_json(layer.we);
                    lj["wd"] = matrix_json(layer.wd);
                    lj["activation"] = activation_to_string(layer.act);
                    lj["residual"] = layer.residual;
                } else if constexpr (std::is_same_v<T, SeBlock>) {
                    lj["type"] = "se";
                    lj["r"] = layer.reduction;
                    lj["grid"] = {layer.grid_w, layer.grid_h};
                    lj["we"] = matrix_json(layer.we);
                    lj["wd"] = matrix_json(layer.wd);
                } else if constexpr (std::is_same_v<T, EdConv>) {
                    lj["type"] = "edconv";
                    lj["p"] = layer.patch;
                    lj["k"] = layer.hidden;
                    lj["out"] = {layer.out_w, layer.out_h, layer.out_c};
                    lj["we"] = matrix_json(layer.we);
                    lj["wd"] = matrix_json(layer.wd);
                    lj["activation"] = activation_to_string(layer.act);
                }
            },
            l);
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    return j.dump();
}

}  // namespace unr
