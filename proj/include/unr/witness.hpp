#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "unr/quantize.hpp"
#include "unr/r1cs.hpp"

namespace unr {

// Ordered evaluation program that fills an assignment. Steps before the first
// round barrier are phase 0 (challenge-independent); steps after a barrier may
// read that round's challenge wires.
struct WitnessProgram {
    struct StepInput {
        uint32_t input_index;
        WireId out;
        uint32_t rho;
    };
    struct StepLc {
        LinearCombination lc;
        WireId out;
    };
    // out = a*b + offset
    struct StepMul {
        LinearCombination a, b, offset;
        WireId out;
    };
    // split src + 2^(width-1) into pieces at (offset, width); wires may cover
    // only a subset of the bit range (derived pieces are linear combinations
    // and are not written)
    struct StepDecompose {
        LinearCombination src;
        uint32_t width;
        std::vector<WireId> wires;
        std::vector<uint32_t> offsets;
        std::vector<uint32_t> widths;
        std::string site;
    };
    struct StepMultiplicities {
        uint32_t chunk_width;
        std::vector<LinearCombination> tags;
        std::vector<std::string> sites;
        std::vector<WireId> mu;
    };
    struct StepRoundBarrier {
        uint32_t next_round;
    };
    struct StepLookupInverses {
        WireId challenge;
        uint32_t chunk_width;
        std::vector<LinearCombination> tags;
        std::vector<WireId> mu;
        std::vector<WireId> u;
        std::vector<WireId> v;
    };
    using Step = std::variant<StepInput, StepLc, StepMul, StepDecompose, StepMultiplicities,
                              StepRoundBarrier, StepLookupInverses>;

    std::vector<Step> steps;

    void remap(std::span<const WireId> perm);
    void serialize(ByteWriter& w, const PrimeField& f) const;
    static WitnessProgram deserialize(ByteReader& r, const PrimeField& f);
};

// Executes steps for one phase; returns the index one past the barrier (or
// steps.size()). phase 0 starts at step 0.
size_t run_witness_phase(const WitnessProgram& prog, size_t start, const PrimeField& f,
                         std::span<const double> inputs, std::vector<Fp>& assignment);

}  // namespace unr
