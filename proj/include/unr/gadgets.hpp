#pragma once

#include <string>
#include <vector>

#include "unr/quantize.hpp"
#include "unr/r1cs.hpp"
#include "unr/witness.hpp"

namespace unr {

enum class GadgetMode : uint8_t { binary, chunked };

// Bit layout of one signed decomposition: total width B, binary bits or
// lookup-checked chunks of width at most w. Cut positions and other required
// split points are forced onto chunk edges; each forced edge introduces at
// most one chunk narrower than w.
struct DecompositionSpec {
    uint32_t total_width = 0;  // B
    GadgetMode mode = GadgetMode::binary;
    uint32_t chunk_width = 0;              // w, chunked mode
    std::vector<uint32_t> boundaries;      // forced split positions below B-1
    uint32_t cut_bits = 0;

    static DecompositionSpec binary(uint32_t B, uint32_t cut);
    static DecompositionSpec chunked(uint32_t B, uint32_t w, uint32_t cut,
                                     std::vector<uint32_t> extra_boundaries = {});
    // piece layout over [0, B-1), low to high: (offset, width)
    std::vector<std::pair<uint32_t, uint32_t>> pieces() const;
};

// Registry of range-checked chunks for the logarithmic-derivative argument.
struct LookupRegistry {
    uint32_t chunk_width = 0;  // w in [2, 24]
    std::vector<LinearCombination> tags;
    std::vector<std::string> sites;
    bool finalized = false;

    explicit LookupRegistry(uint32_t w);
    // registers chunk in [0, 2^width); narrow chunks are scaled by 2^(w-width)
    void tag(const PrimeField& f, const LinearCombination& chunk, uint32_t width,
             const std::string& site);
};

struct LookupTableSpec {
    uint32_t chunk_width = 0;
    WireId challenge_wire = 0;
    std::vector<WireId> mu_wires;
    std::vector<WireId> u_wires;
    std::vector<WireId> v_wires;
};

// Shared emission context: constraints and the witness program grow together.
struct GadgetCtx {
    ConstraintSystemBuilder& builder;
    WitnessProgram& program;
    LookupRegistry* lookup = nullptr;  // non-null in chunked mode
};

// One signed decomposition of src (value in (-2^(B-1), 2^(B-1))):
// s = src + 2^(B-1) split into pieces plus the top bit. The highest piece is
// derived from the binding linear relation, so the decomposition binds for
// free; the top bit costs one boolean constraint.
struct SignedDecomposition {
    LinearCombination top_bit;  // 1 iff src >= 0
    std::vector<LinearCombination> piece_lcs;
    std::vector<std::pair<uint32_t, uint32_t>> piece_pos;  // (offset, width)
    uint32_t total_width = 0;

    // floor(max(0, src) / 2^cut): pieces at offset >= cut, top bit excluded
    LinearCombination nonneg_shifted(const PrimeField& f, uint32_t cut) const;
    // floor(src / 2^cut) for either sign (includes the top bit term)
    LinearCombination signed_shifted(const PrimeField& f, uint32_t cut) const;
};

SignedDecomposition emit_signed_decomposition(GadgetCtx& ctx, const LinearCombination& src,
                                              const DecompositionSpec& spec,
                                              const std::string& site);

struct ActivationResult {
    WireId out = 0;
    uint32_t out_precision = 0;
    size_t constraints_emitted = 0;
    size_t lookup_tags_emitted = 0;
};

// max(0, x) >> cut
ActivationResult relu(GadgetCtx& ctx, const LinearCombination& x, const DecompositionSpec& spec,
                      uint32_t x_precision, const std::string& site);
// max(2^-l * x, x) >> cut
ActivationResult leaky_relu(GadgetCtx& ctx, const LinearCombination& x, DecompositionSpec spec,
                            uint32_t slope_shift, uint32_t x_precision, const std::string& site);
// min(6, max(0, x)) >> cut; six = 6 quantized at the input precision
ActivationResult relu6(GadgetCtx& ctx, const LinearCombination& x, const DecompositionSpec& spec,
                       uint32_t x_precision, uint32_t bound_log2, const std::string& site);
// ReLU6(x+3)/6 with exact saturation endpoints; output precision
// (x_precision - cut) + sigma
ActivationResult hard_sigmoid(GadgetCtx& ctx, const LinearCombination& x, DecompositionSpec spec,
                              uint32_t x_precision, uint32_t bound_log2, uint32_t sigma,
                              const std::string& site);
// x * ReLU6(x+3)/6: hard_sigmoid plus one product
ActivationResult hard_swish(GadgetCtx& ctx, const LinearCombination& x, DecompositionSpec spec,
                            uint32_t x_precision, uint32_t bound_log2, uint32_t sigma,
                            const std::string& site);

// Allocates the challenge, multiplicities (round 0) and inverse columns
// (round d), and emits u_j (alpha + z_j) = 1, v_i (alpha + i) = mu_i and the
// balance sum u - sum v = 0: 2^w + #tags + 1 constraints.
LookupTableSpec lookup_finalize(GadgetCtx& ctx);

// Reference activation semantics over quantized values; gadget witnesses must
// reproduce these bit for bit.
namespace ref {
QuantizedValue relu(const QuantizedValue& x, uint32_t cut);
QuantizedValue leaky_relu(const QuantizedValue& x, uint32_t slope_shift, uint32_t cut);
QuantizedValue relu6(const QuantizedValue& x, uint32_t cut);
QuantizedValue hard_sigmoid(const QuantizedValue& x, uint32_t sigma, uint32_t cut);
QuantizedValue hard_swish(const QuantizedValue& x, uint32_t sigma, uint32_t cut);
}  // namespace ref

// power-of-two field constant
Fp pow2(const PrimeField& f, uint32_t k);

}  // namespace unr
