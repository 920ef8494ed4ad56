#pragma once

#include <optional>

#include "unr/gadgets.hpp"
#include "unr/model.hpp"
#include "unr/r1cs.hpp"
#include "unr/witness.hpp"

namespace unr {

enum class ProofMode : uint8_t { groth16, ultragroth };

struct LayerReport {
    std::string name;
    size_t constraints = 0;
    size_t activation_constraints = 0;
    size_t activation_sites = 0;
    size_t lookup_tags = 0;
    size_t product_constraints = 0;
    size_t binding_constraints = 0;
    uint32_t width_b = 0;
    double formula_prediction = 0;  // paper-style estimate with B in place of b
    std::string formula;
};

struct CompiledCircuit {
    ConstraintSystem cs;
    WitnessProgram program;
    ProofMode mode = ProofMode::groth16;
    uint32_t rho = 0;
    uint32_t chunk_width = 0;  // 0 in binary mode
    std::vector<uint32_t> input_shape;
    std::vector<WireId> output_wires;
    uint32_t output_precision = 0;
    std::optional<LookupTableSpec> lookup;
    std::vector<LayerReport> report;

    Bytes serialize() const;
    Bytes digest() const;
    static CompiledCircuit deserialize(const Bytes& data);

    size_t total_constraints() const { return cs.num_constraints(); }
};

// Lowers the model to a constraint system plus its witness program. w = 0
// selects the chunk width by the cost scan (ultragroth mode only).
CompiledCircuit compile(const ModelGraph& graph, ProofMode mode, uint32_t chunk_width = 0);

// Two-phase witness generation: phase 0 fills everything challenge-independent,
// the callback supplies challenge values per round, remaining phases fill the
// challenge-dependent columns.
using ChallengeFill = std::function<std::vector<Fp>(uint32_t round, const Assignment& partial)>;
Assignment generate_witness(const CompiledCircuit& c, std::span<const double> inputs,
                            const ChallengeFill& fill);

// Adapter for the prover: stateful per-round filler over the witness program.
std::function<void(uint32_t, std::vector<Fp>&)> make_round_filler(const CompiledCircuit& c,
                                                                  std::vector<double> inputs);

// Reference pipeline over quantized values; the circuit witness must reproduce
// these outputs bit for bit.
struct ReferenceOutput {
    std::vector<QuantizedValue> outputs;
    uint32_t precision = 0;
};
ReferenceOutput reference_eval(const ModelGraph& g, const PrimeField& f,
                               std::span<const double> inputs);
// Plain double-precision forward pass.
std::vector<double> reference_float(const ModelGraph& g, std::span<const double> inputs);

// Chunk-width cost scan: c(w; L) = 2^(w+1) + b*L/w over integer w in [2, 24],
// plus the real stationary point of 2^w w^2 = L*b / (2 ln 2) by bisection.
struct ChunkWidthChoice {
    uint32_t w_int = 0;
    double w_real = 0;
    double cost = 0;
};
ChunkWidthChoice optimal_chunk_width(uint64_t lookups, uint32_t field_bits);
double lookup_cost_formula(uint32_t field_bits, uint32_t w, uint64_t lookups);

// interval-analysis input assumption, documented in the README
inline constexpr double kInputBound = 8.0;

}  // namespace unr
