#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unr/fp.hpp"

namespace unr {

using WireId = uint32_t;

// Sparse linear combination over witness wires. Index 0 is the constant-one
// wire. Zero coefficients are never stored.
class LinearCombination {
public:
    LinearCombination() = default;

    static LinearCombination wire(WireId w, const Fp& coeff);
    static LinearCombination constant(const Fp& c) { return wire(0, c); }

    LinearCombination& add_term(WireId w, const Fp& coeff);
    LinearCombination operator+(const LinearCombination& o) const;
    LinearCombination operator-(const LinearCombination& o) const;
    LinearCombination scaled(const Fp& c) const;

    bool empty() const { return terms_.empty(); }
    const std::vector<std::pair<WireId, Fp>>& terms() const { return terms_; }
    Fp evaluate(std::span<const Fp> assignment) const;
    void remap(std::span<const WireId> perm);
    WireId max_wire() const;

private:
    // kept sorted by wire id
    std::vector<std::pair<WireId, Fp>> terms_;
};

struct Constraint {
    LinearCombination l, r, o;
};

// Canonical block order of the witness: [1 | x | a_0 .. a_{d-1} | w_0 .. w_d].
struct WitnessLayout {
    uint32_t total = 0;
    uint32_t num_public = 0;                  // statement wires, constant excluded
    std::vector<uint32_t> challenge_sizes;    // per challenge round, d entries
    std::vector<uint32_t> round_sizes;        // private rounds, d+1 entries

    uint32_t rounds_d() const { return uint32_t(challenge_sizes.size()); }
    uint32_t public_offset() const { return 1; }
    uint32_t challenge_offset(uint32_t round) const;
    uint32_t round_offset(uint32_t round) const;
    // indices covered by the verifier's input commitment: constant, statement
    // and every challenge wire
    std::vector<WireId> ic_indices() const;
    std::vector<WireId> round_indices(uint32_t round) const;
    bool operator==(const WitnessLayout& o) const = default;
};

struct Assignment {
    std::vector<Fp> values;
};

struct SatisfactionResult {
    bool satisfied = true;
    size_t first_failing = 0;
};

class ConstraintSystem {
public:
    ConstraintSystem(const PrimeField& f, std::vector<Constraint> constraints,
                     WitnessLayout layout);

    const PrimeField& field() const { return *f_; }
    const std::vector<Constraint>& constraints() const { return constraints_; }
    const WitnessLayout& layout() const { return layout_; }
    size_t num_constraints() const { return constraints_.size(); }
    uint32_t num_wires() const { return layout_.total; }

    SatisfactionResult is_satisfied(const Assignment& a) const;
    // rows of the L, R, O matrices, as sparse entry lists
    struct Matrices {
        std::vector<std::vector<std::pair<WireId, Fp>>> l, r, o;
    };
    Matrices matrices() const;

    void serialize(ByteWriter& w) const;
    static ConstraintSystem deserialize(ByteReader& r, const PrimeField& f);

private:
    const PrimeField* f_;
    std::vector<Constraint> constraints_;
    WitnessLayout layout_;
};

// Wire allocator with deferred block placement: gadget code allocates wires in
// any order; finalize() permutes them into the canonical block layout and
// rewrites the constraints. Gadgets must never depend on raw indices.
class ConstraintSystemBuilder {
public:
    ConstraintSystemBuilder(const PrimeField& f, uint32_t num_challenge_rounds);

    WireId alloc_public();
    WireId alloc_challenge(uint32_t round);
    WireId alloc_private(uint32_t round);
    void enforce(LinearCombination l, LinearCombination r, LinearCombination o);

    const PrimeField& field() const { return *f_; }
    uint32_t rounds_d() const { return d_; }
    size_t num_constraints() const { return constraints_.size(); }
    uint32_t num_wires_allocated() const { return next_; }

    struct Finalized {
        ConstraintSystem cs;
        std::vector<WireId> permutation;  // provisional id -> canonical id
    };
    Finalized finalize();

private:
    enum class Kind : uint8_t { constant, pub, challenge, priv };
    const PrimeField* f_;
    uint32_t d_;
    WireId next_ = 1;
    std::vector<std::pair<Kind, uint32_t>> wires_{{Kind::constant, 0}};
    std::vector<Constraint> constraints_;
    bool finalized_ = false;
};

}  // namespace unr
