#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "unr/compiler.hpp"
#include "unr/fields.hpp"
#include "unr/mock_engine.hpp"
#include "unr/proving.hpp"
#include "unr/rng.hpp"

using namespace unr;

namespace {

Matrix random_matrix(RandomSource& rng, size_t rows, size_t cols, double scale) {
    Matrix m(rows, std::vector<double>(cols));
    for (auto& row : m)
        for (double& v : row) v = rng.sample_range(-scale, scale);
    return m;
}

Matrix constant_matrix(size_t rows, size_t cols, double v) {
    return Matrix(rows, std::vector<double>(cols, v));
}

ModelGraph dense_model(RandomSource& rng, uint32_t rho, std::vector<uint32_t> widths,
                       uint32_t input, Activation act, double scale = 0.2) {
    ModelGraph g;
    g.input_shape = {input};
    g.rho = rho;
    uint32_t prev = input;
    for (size_t i = 0; i < widths.size(); ++i) {
        DenseLayer l;
        l.weights = random_matrix(rng, widths[i], prev, scale);
        l.bias.assign(widths[i], 0.0);
        for (double& b : l.bias) b = rng.sample_range(-scale, scale);
        l.act = (i + 1 < widths.size()) ? act : Activation::none;
        g.layers.push_back(std::move(l));
        prev = widths[i];
    }
    return g;
}

std::vector<double> random_input(RandomSource& rng, size_t n, double lo = -1, double hi = 1) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.sample_range(lo, hi);
    return v;
}

ChallengeFill random_challenges(RandomSource& rng) {
    return [&rng](uint32_t, const Assignment& a) {
        return std::vector<Fp>{rng.sample(a.values[0].field())};
    };
}

size_t activation_total(const CompiledCircuit& c) {
    size_t n = 0;
    for (const auto& r : c.report) n += r.activation_constraints;
    return n;
}

}  // namespace

TEST_CASE("model json roundtrip and validation errors") {
    SeededRng rng(1);
    ModelGraph g = dense_model(rng, 8, {5, 3}, 4, Activation::relu);
    std::string js = model_to_json(g);
    ModelGraph back = load_model(js);
    CHECK(back.layers.size() == 2);
    CHECK(back.rho == 8);
    CHECK(model_to_json(back) == js);

    CHECK_THROWS(load_model("{"));
    CHECK_THROWS(load_model(R"({"input_shape":[4],"rho":8,"layers":[]})"));
    // dense weight column count must match the input
    CHECK_THROWS(load_model(
        R"({"input_shape":[3],"rho":8,"layers":[{"type":"dense","weights":[[1,2]],"bias":[0]}]})"));
    // non-finite weights rejected at the json layer
    CHECK_THROWS(load_model(
        R"({"input_shape":[1],"rho":8,"layers":[{"type":"dense","weights":[[1e999]],"bias":[0]}]})"));
    // unknown activation
    CHECK_THROWS(load_model(
        R"({"input_shape":[1],"rho":8,"layers":[{"type":"dense","weights":[[1]],"activation":"gelu"}]})"));
}

TEST_CASE("model-1 shape fixture: flatten; dense(relu); dense") {
    SeededRng rng(2);
    ModelGraph g;
    g.input_shape = {28, 28};
    g.rho = 15;
    g.layers.push_back(FlattenLayer{});
    DenseLayer d1;
    d1.weights = random_matrix(rng, 100, 784, 0.05);
    d1.bias.assign(100, 0.01);
    d1.act = Activation::relu;
    g.layers.push_back(std::move(d1));
    DenseLayer d2;
    d2.weights = random_matrix(rng, 10, 100, 0.1);
    d2.bias.assign(10, 0.0);
    g.layers.push_back(std::move(d2));
    auto chain = g.shape_chain();
    CHECK(chain.back() == std::vector<uint32_t>{10});

    CompiledCircuit c = compile(g, ProofMode::groth16);
    // dense layer report: exactly sites*(B+1) activation constraints
    const LayerReport* dense_rep = nullptr;
    for (const auto& r : c.report)
        if (r.activation_sites == 100) dense_rep = &r;
    REQUIRE(dense_rep);
    CHECK(dense_rep->activation_constraints == 100 * (dense_rep->width_b + 1));
    // output bindings: one per output
    CHECK(c.report.back().name == "output-binding");
    CHECK(c.report.back().binding_constraints == 10);
}

TEST_CASE("linear regression: one constraint, witness n+2") {
    SeededRng rng(3);
    for (uint32_t n : {2u, 8u, 32u}) {
        ModelGraph g;
        g.input_shape = {n};
        g.rho = 16;
        DenseLayer d;
        d.weights = random_matrix(rng, 1, n, 0.5);
        d.bias = {0.25};
        g.layers.push_back(std::move(d));
        CompiledCircuit c = compile(g, ProofMode::groth16);
        CHECK(c.cs.num_constraints() == 1);
        CHECK(c.cs.num_wires() == n + 2);
        // witness satisfies; output equals the reference dot product
        auto a = generate_witness(c, random_input(rng, n), {});
        CHECK(c.cs.is_satisfied(a).satisfied);
    }
}

TEST_CASE("pure linear stack: one binding constraint per output, zero per weight") {
    SeededRng rng(4);
    ModelGraph g = dense_model(rng, 16, {12, 7}, 9, Activation::none);
    CompiledCircuit c = compile(g, ProofMode::groth16);
    CHECK(c.cs.num_constraints() == 7);
    CHECK(activation_total(c) == 0);
}

TEST_CASE("encoder-decoder speedup: activation ratio is exactly 1/gamma") {
    for (auto [m, k] : std::vector<std::pair<uint32_t, uint32_t>>{{20, 4}, {32, 8}}) {
        // matched infinity-norm rows so both layers see the same width B
        ModelGraph fc;
        fc.input_shape = {m};
        fc.rho = 12;
        DenseLayer d;
        d.weights = constant_matrix(m, m, 0.1);
        d.act = Activation::relu;
        fc.layers.push_back(std::move(d));
        DenseLayer out;
        out.weights = constant_matrix(1, m, 0.1);
        fc.layers.push_back(std::move(out));

        ModelGraph ed;
        ed.input_shape = {m};
        ed.rho = 12;
        EdLayer e;
        e.we = constant_matrix(k, m, 0.1);
        e.wd = constant_matrix(m, k, 0.1);
        e.act = Activation::relu;
        ed.layers.push_back(std::move(e));
        DenseLayer out2;
        out2.weights = constant_matrix(1, m, 0.1);
        ed.layers.push_back(std::move(out2));

        CompiledCircuit cfc = compile(fc, ProofMode::groth16);
        CompiledCircuit ced = compile(ed, ProofMode::groth16);
        size_t afc = activation_total(cfc);
        size_t aed = activation_total(ced);
        CHECK(afc * k == aed * m);  // ratio m/k exactly
        CHECK(afc == aed * (m / k));
    }
}

TEST_CASE("ed residual witness correctness") {
    SeededRng rng(5);
    ModelGraph g;
    g.input_shape = {6};
    g.rho = 12;
    EdLayer e;
    e.we = random_matrix(rng, 2, 6, 0.3);
    e.wd = random_matrix(rng, 6, 2, 0.3);
    e.act = Activation::relu;
    e.residual = true;
    g.layers.push_back(std::move(e));
    CompiledCircuit c = compile(g, ProofMode::groth16);
    auto in = random_input(rng, 6);
    auto a = generate_witness(c, in, {});
    CHECK(c.cs.is_satisfied(a).satisfied);
    auto ref = reference_eval(g, bn254_fr(), in);
    for (size_t i = 0; i < c.output_wires.size(); ++i)
        CHECK(a.values[c.output_wires[i]] == ref.outputs[i].value);
    CHECK(c.output_precision == ref.precision);
}

TEST_CASE("witness equals reference bit for bit, all activations, both modes") {
    SeededRng rng(6);
    for (Activation act : {Activation::relu, Activation::leaky_relu, Activation::relu6,
                           Activation::hard_sigmoid, Activation::hard_swish}) {
        ModelGraph g = dense_model(rng, 10, {8, 4}, 6, act, 0.3);
        for (ProofMode mode : {ProofMode::groth16, ProofMode::ultragroth}) {
            CompiledCircuit c = compile(g, mode, mode == ProofMode::ultragroth ? 4 : 0);
            for (int t = 0; t < 20; ++t) {
                auto in = random_input(rng, 6);
                auto a = generate_witness(c, in, random_challenges(rng));
                auto sat = c.cs.is_satisfied(a);
                CHECK(sat.satisfied);
                auto ref = reference_eval(g, bn254_fr(), in);
                for (size_t i = 0; i < c.output_wires.size(); ++i)
                    CHECK(a.values[c.output_wires[i]] == ref.outputs[i].value);
            }
        }
    }
}

TEST_CASE("tampered witness fails") {
    SeededRng rng(7);
    ModelGraph g = dense_model(rng, 12, {6, 3}, 5, Activation::relu);
    CompiledCircuit c = compile(g, ProofMode::groth16);
    auto a = generate_witness(c, random_input(rng, 5), {});
    REQUIRE(c.cs.is_satisfied(a).satisfied);
    a.values[c.output_wires[0]] = a.values[c.output_wires[0]] + bn254_fr().one();
    CHECK(!c.cs.is_satisfied(a).satisfied);
}

TEST_CASE("weight embedding: counts and layout invariant under weight changes") {
    SeededRng rng(8);
    ModelGraph g1 = dense_model(rng, 12, {10, 4}, 8, Activation::relu, 0.2);
    ModelGraph g2 = dense_model(rng, 12, {10, 4}, 8, Activation::relu, 0.2);
    CompiledCircuit c1 = compile(g1, ProofMode::groth16);
    CompiledCircuit c2 = compile(g2, ProofMode::groth16);
    CHECK(c1.cs.num_constraints() == c2.cs.num_constraints());
    CHECK(c1.cs.num_wires() == c2.cs.num_wires());
    CHECK(c1.cs.layout() == c2.cs.layout());
}

TEST_CASE("deterministic compilation: identical json, identical bytes") {
    SeededRng rng(9);
    ModelGraph g = dense_model(rng, 12, {6, 3}, 5, Activation::relu);
    std::string js = model_to_json(g);
    Bytes b1 = compile(load_model(js), ProofMode::ultragroth, 4).serialize();
    Bytes b2 = compile(load_model(js), ProofMode::ultragroth, 4).serialize();
    CHECK(b1 == b2);
    CompiledCircuit back = CompiledCircuit::deserialize(b1);
    CHECK(back.serialize() == b1);
    CHECK(back.digest() == compile(load_model(js), ProofMode::ultragroth, 4).digest());
}

TEST_CASE("ultragroth pipeline end to end through the prover") {
    SeededRng rng(10);
    ModelGraph g = dense_model(rng, 10, {6, 3}, 5, Activation::relu, 0.3);
    CompiledCircuit c = compile(g, ProofMode::ultragroth, 4);
    REQUIRE(c.lookup.has_value());
    CHECK(c.cs.layout().rounds_d() == 1);
    const PrimeField& f = bn254_fr();
    MockEngine eng(f);
    auto sr = setup(eng, c.cs, c.digest(), rng);
    auto in = random_input(rng, 5);
    auto pr = prove(eng, sr.pk, c.cs, make_round_filler(c, in), rng);
    auto vr = verify(eng, sr.vk, pr.public_inputs, pr.proof, pr.challenges);
    CHECK(vr.accepted);
    CHECK(vr.pairings == 4);
    CHECK(vr.hashes == 1);
    // groth16 mode over the same model: 3 pairings, larger circuit
    CompiledCircuit cg = compile(g, ProofMode::groth16);
    auto sg = setup(eng, cg.cs, cg.digest(), rng);
    auto pg = prove(eng, sg.pk, cg.cs, make_round_filler(cg, in), rng);
    auto vg = verify(eng, sg.vk, pg.public_inputs, pg.proof);
    CHECK(vg.accepted);
    CHECK(vg.pairings == 3);
    CHECK(cg.cs.num_constraints() > c.cs.num_constraints());
    // same statement on both paths
    CHECK(pg.public_inputs[0] == pr.public_inputs[0]);
}

TEST_CASE("se block: counts within 10% of (1+1/r)CB + HWC") {
    SeededRng rng(11);
    ModelGraph g;
    g.input_shape = {8, 8, 16};
    g.rho = 15;
    SeBlock se;
    se.reduction = 4;
    se.we = random_matrix(rng, 4, 16, 0.3);
    se.wd = random_matrix(rng, 16, 4, 0.3);
    g.layers.push_back(std::move(se));
    g.layers.push_back(FlattenLayer{});
    DenseLayer out;
    out.weights = random_matrix(rng, 4, 8 * 8 * 16, 0.02);
    g.layers.push_back(std::move(out));
    CompiledCircuit c = compile(g, ProofMode::groth16);
    const LayerReport* rep = nullptr;
    for (const auto& r : c.report)
        if (r.name.rfind("se", 0) == 0) rep = &r;
    REQUIRE(rep);
    CHECK(rep->formula_prediction > 0);
    double ratio = double(rep->constraints) / rep->formula_prediction;
    INFO("actual ", rep->constraints, " predicted ", rep->formula_prediction, " B ",
         rep->width_b);
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
}

TEST_CASE("edconv: counts within 10% of P^2 K B") {
    SeededRng rng(12);
    ModelGraph g;
    g.input_shape = {8, 8, 4};
    g.rho = 15;
    EdConv conv;
    conv.patch = 2;
    conv.hidden = 8;
    conv.out_w = 8;
    conv.out_h = 8;
    conv.out_c = 2;
    conv.we = random_matrix(rng, 8, 8 * 8 * 4 / 4, 0.1);
    conv.wd = random_matrix(rng, 8 * 8 * 2 / 4, 8, 0.1);
    conv.act = Activation::relu;
    g.layers.push_back(std::move(conv));
    g.layers.push_back(FlattenLayer{});
    DenseLayer out;
    out.weights = random_matrix(rng, 3, 8 * 8 * 2, 0.05);
    g.layers.push_back(std::move(out));
    CompiledCircuit c = compile(g, ProofMode::groth16);
    const LayerReport* rep = nullptr;
    for (const auto& r : c.report)
        if (r.name.rfind("edconv", 0) == 0) rep = &r;
    REQUIRE(rep);
    double ratio = double(rep->constraints) / rep->formula_prediction;
    INFO("actual ", rep->constraints, " predicted ", rep->formula_prediction);
    CHECK(ratio > 0.9);
    CHECK(ratio < 1.1);
    // witness correctness through the volume path
    auto in = random_input(rng, 8 * 8 * 4);
    auto a = generate_witness(c, in, {});
    CHECK(c.cs.is_satisfied(a).satisfied);
    auto ref = reference_eval(g, bn254_fr(), in);
    for (size_t i = 0; i < c.output_wires.size(); ++i)
        CHECK(a.values[c.output_wires[i]] == ref.outputs[i].value);
}

TEST_CASE("se witness equals reference") {
    SeededRng rng(13);
    ModelGraph g;
    g.input_shape = {4, 4, 4};
    g.rho = 12;
    SeBlock se;
    se.reduction = 2;
    se.grid_w = 2;
    se.grid_h = 2;
    se.we = random_matrix(rng, 2, 4, 0.3);
    se.wd = random_matrix(rng, 4, 2, 0.3);
    g.layers.push_back(std::move(se));
    g.layers.push_back(FlattenLayer{});
    DenseLayer out;
    out.weights = random_matrix(rng, 2, 64, 0.05);
    g.layers.push_back(std::move(out));
    for (ProofMode mode : {ProofMode::groth16, ProofMode::ultragroth}) {
        CompiledCircuit c = compile(g, mode, mode == ProofMode::ultragroth ? 5 : 0);
        auto in = random_input(rng, 64);
        auto a = generate_witness(c, in, random_challenges(rng));
        CHECK(c.cs.is_satisfied(a).satisfied);
        auto ref = reference_eval(g, bn254_fr(), in);
        for (size_t i = 0; i < c.output_wires.size(); ++i)
            CHECK(a.values[c.output_wires[i]] == ref.outputs[i].value);
    }
}

TEST_CASE("proving over a one-constraint circuit (domain size 1)") {
    SeededRng rng(22);
    ModelGraph g;
    g.input_shape = {3};
    g.rho = 16;
    DenseLayer d;
    d.weights = random_matrix(rng, 1, 3, 0.5);
    d.bias = {0.1};
    g.layers.push_back(std::move(d));
    CompiledCircuit c = compile(g, ProofMode::groth16);
    REQUIRE(c.cs.num_constraints() == 1);
    MockEngine eng(bn254_fr());
    auto sr = setup(eng, c.cs, c.digest(), rng);
    auto pr = prove(eng, sr.pk, c.cs, make_round_filler(c, random_input(rng, 3)), rng);
    CHECK(verify(eng, sr.vk, pr.public_inputs, pr.proof).accepted);
}

TEST_CASE("ultragroth with no activations still carries a consistent lookup round") {
    SeededRng rng(21);
    ModelGraph g = dense_model(rng, 10, {3}, 4, Activation::none);
    CompiledCircuit c = compile(g, ProofMode::ultragroth, 3);
    REQUIRE(c.lookup.has_value());
    CHECK(c.lookup->u_wires.empty());
    auto a = generate_witness(c, random_input(rng, 4), random_challenges(rng));
    CHECK(c.cs.is_satisfied(a).satisfied);
}

TEST_CASE("chunk width optimizer") {
    // integer argmin within [16,20] for L in 2^17..2^21 at b=254, and the
    // stationary point within 1 of the scan argmin
    for (uint32_t lg : {17u, 18u, 19u, 20u, 21u}) {
        auto ch = optimal_chunk_width(uint64_t(1) << lg, 254);
        CHECK(ch.w_int >= 16);
        CHECK(ch.w_int <= 20);
        CHECK(std::abs(double(ch.w_int) - ch.w_real) <= 1.0);
        // exhaustive scan oracle
        double best = 1e300;
        uint32_t bw = 0;
        for (uint32_t w = 2; w <= 24; ++w) {
            double c = std::ldexp(1.0, int(w) + 1) + 254.0 * double(uint64_t(1) << lg) / w;
            if (c < best) {
                best = c;
                bw = w;
            }
        }
        CHECK(ch.w_int == bw);
        CHECK(ch.cost == doctest::Approx(best));
    }
    // degenerate L = 1
    auto tiny = optimal_chunk_width(1, 254);
    CHECK(tiny.w_int <= 6);
    CHECK_THROWS(optimal_chunk_width(0, 254));
    // convexity of the scan in the examined range: positive second difference
    for (uint32_t lg : {17u, 21u}) {
        uint64_t L = uint64_t(1) << lg;
        for (uint32_t w = 3; w <= 23; ++w) {
            double c0 = lookup_cost_formula(254, w - 1, L);
            double c1 = lookup_cost_formula(254, w, L);
            double c2 = lookup_cost_formula(254, w + 1, L);
            CHECK(c2 - 2 * c1 + c0 > 0);
        }
    }
    // the worked overhead formula: b=254, w=8, r'=100 evaluates near 3700
    CHECK(lookup_cost_formula(254, 8, 100) == doctest::Approx(3687.5).epsilon(0.01));
}

TEST_CASE("auto chunk width is recorded in the circuit") {
    SeededRng rng(14);
    ModelGraph g = dense_model(rng, 10, {16, 3}, 8, Activation::relu, 0.2);
    CompiledCircuit c = compile(g, ProofMode::ultragroth, 0);
    CHECK(c.chunk_width >= 2);
    CHECK(c.chunk_width <= 16);
    auto expect = optimal_chunk_width(16, 254);
    CHECK(c.chunk_width == std::min(expect.w_int, 16u));
}

TEST_CASE("dequantized output accuracy on a reduced dense model") {
    SeededRng rng(15);
    ModelGraph g = dense_model(rng, 15, {32, 10}, 40, Activation::relu, 0.2);
    CompiledCircuit c = compile(g, ProofMode::groth16);
    double worst = 0;
    for (int t = 0; t < 50; ++t) {
        auto in = random_input(rng, 40, -2, 2);
        auto a = generate_witness(c, in, {});
        auto exact = reference_float(g, in);
        double num = 0, den = 0;
        for (size_t i = 0; i < c.output_wires.size(); ++i) {
            double got = QuantizedValue{a.values[c.output_wires[i]], c.output_precision}
                             .dequantize();
            num += (got - exact[i]) * (got - exact[i]);
            den += exact[i] * exact[i];
        }
        worst = std::max(worst, std::sqrt(num / std::max(den, 1e-30)));
    }
    CHECK(worst < 1e-2);
}

TEST_CASE("schedule infeasibility reports a usable error") {
    SeededRng rng(16);
    ModelGraph g = dense_model(rng, 60, {4, 4, 4, 4, 4, 4}, 4, Activation::hard_swish, 0.5);
    // hard_swish precision growth at rho=60 exhausts the field quickly
    CHECK_THROWS_WITH_AS(compile(g, ProofMode::groth16),
                         doctest::Contains("schedule infeasible"), std::invalid_argument);
}
