#pragma once

#include <random>

#include "unr/fp.hpp"

namespace unr {

// Injectable randomness so failing runs can be replayed from a seed.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual uint64_t next_u64() = 0;

    Fp sample(const PrimeField& f) {
        uint32_t bits = f.bit_size();
        uint64_t top_mask = (bits % 64) ? ((uint64_t(1) << (bits % 64)) - 1) : ~uint64_t(0);
        while (true) {
            U256 v{};
            uint32_t limbs = (bits + 63) / 64;
            for (uint32_t i = 0; i < limbs; ++i) v[i] = next_u64();
            v[limbs - 1] &= top_mask;
            if (u256::cmp(v, f.modulus()) < 0) return f.from_canonical(v);
        }
    }

    Fp sample_nonzero(const PrimeField& f) {
        while (true) {
            Fp v = sample(f);
            if (!v.is_zero()) return v;
        }
    }

    double sample_unit() {  // [0, 1)
        return double(next_u64() >> 11) * (1.0 / 9007199254740992.0);
    }

    double sample_range(double lo, double hi) { return lo + (hi - lo) * sample_unit(); }
};

class SeededRng final : public RandomSource {
public:
    explicit SeededRng(uint64_t seed) : seed_(seed), gen_(seed) {}
    uint64_t next_u64() override { return gen_(); }
    uint64_t seed() const { return seed_; }

private:
    uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace unr
