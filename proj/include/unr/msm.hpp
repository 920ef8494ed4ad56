#pragma once

#include <span>
#include <vector>

#include "unr/fp.hpp"

namespace unr {

// Generic double-and-add; scalars are canonical field integers.
template <class G>
G scalar_mul(const G& base, const Fp& scalar) {
    U256 e = scalar.canonical();
    uint32_t bits = u256::bit_length(e);
    G acc = base.group_zero();
    for (uint32_t i = bits; i-- > 0;) {
        acc = acc.dbl();
        if (u256::bit(e, i)) acc = acc.add(base);
    }
    return acc;
}

template <class G>
G msm_naive(const G& zero, std::span<const G> bases, std::span<const Fp> scalars) {
    G acc = zero;
    for (size_t i = 0; i < bases.size(); ++i) acc = acc.add(scalar_mul(bases[i], scalars[i]));
    return acc;
}

// Pippenger bucket method above a small-size threshold; equals the naive
// product of powers. Deterministic for any input order.
template <class G>
G msm(const G& zero, std::span<const G> bases, std::span<const Fp> scalars) {
    if (bases.size() != scalars.size())
        throw std::invalid_argument("msm: bases/scalars length mismatch");
    if (bases.empty()) return zero;
    if (bases.size() < 32) return msm_naive(zero, bases, scalars);

    std::vector<U256> es(scalars.size());
    uint32_t max_bits = 1;
    for (size_t i = 0; i < scalars.size(); ++i) {
        es[i] = scalars[i].canonical();
        max_bits = std::max(max_bits, u256::bit_length(es[i]));
    }
    uint32_t c = 3;
    while ((size_t(1) << (c + 3)) < bases.size() && c < 16) ++c;

    G result = zero;
    uint32_t windows = (max_bits + c - 1) / c;
    std::vector<G> buckets(size_t(1) << c, zero);
    for (uint32_t w = windows; w-- > 0;) {
        for (uint32_t k = 0; k < c; ++k) result = result.dbl();
        std::fill(buckets.begin(), buckets.end(), zero);
        for (size_t i = 0; i < es.size(); ++i) {
            uint32_t idx = 0;
            for (uint32_t k = 0; k < c; ++k) {
                uint32_t bit_pos = w * c + k;
                if (bit_pos < 256 && u256::bit(es[i], bit_pos)) idx |= 1u << k;
            }
            if (idx) buckets[idx] = buckets[idx].add(bases[i]);
        }
        G running = zero;
        G sum = zero;
        for (size_t b = buckets.size(); b-- > 1;) {
            running = running.add(buckets[b]);
            sum = sum.add(running);
        }
        result = result.add(sum);
    }
    return result;
}

}  // namespace unr
