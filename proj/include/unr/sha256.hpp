#pragma once

#include <array>
#include <cstdint>
#include <cstring>

#include "unr/bytes.hpp"

namespace unr {

// Plain SHA-256 (FIPS 180-4). The Fiat-Shamir transcript and all file digests
// go through this, so the implementation is kept self-contained and is pinned
// by a fixed test vector.
class Sha256 {
public:
    Sha256() { reset(); }

    void reset();
    void update(const uint8_t* data, size_t len);
    void update(const Bytes& b) { update(b.data(), b.size()); }
    std::array<uint8_t, 32> finish();

    static std::array<uint8_t, 32> digest(const uint8_t* data, size_t len);
    static std::array<uint8_t, 32> digest(const Bytes& b) { return digest(b.data(), b.size()); }

private:
    void compress(const uint8_t* block);

    uint32_t h_[8];
    uint64_t total_ = 0;
    uint8_t buf_[64];
    size_t buflen_ = 0;
};

}  // namespace unr
