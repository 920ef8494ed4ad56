#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "unr/bytes.hpp"

namespace unr {

// 256-bit little-endian limb vector. All moduli in this project fit 254 bits,
// which leaves the two spare top bits the Montgomery reduction relies on.
using U256 = std::array<uint64_t, 4>;

namespace u256 {

int cmp(const U256& a, const U256& b);
bool is_zero(const U256& a);
// returns carry
uint64_t add(U256& a, const U256& b);
// returns borrow
uint64_t sub(U256& a, const U256& b);
void shr1(U256& a);
bool bit(const U256& a, uint32_t i);
uint32_t bit_length(const U256& a);
U256 from_u64(uint64_t v);
U256 from_decimal(const std::string& s);
U256 from_hex(const std::string& s);
std::string to_decimal(const U256& a);

}  // namespace u256

class Fp;

// Runtime description of a prime field F_p, p odd and at most 254 bits.
// Instances are immutable after construction and are referenced by every
// element, so they must outlive the elements (the canonical fields in
// fields.hpp are process-lifetime statics).
class PrimeField {
public:
    static std::shared_ptr<const PrimeField> create(const U256& modulus, std::string name);
    static std::shared_ptr<const PrimeField> create_from_decimal(const std::string& dec,
                                                                 std::string name);

    const U256& modulus() const { return p_; }
    uint32_t bit_size() const { return bit_size_; }
    uint32_t byte_size() const { return byte_size_; }
    uint32_t two_adicity() const { return two_adicity_; }
    const std::string& name() const { return name_; }

    Fp zero() const;
    Fp one() const;
    Fp from_u64(uint64_t v) const;
    Fp from_canonical(const U256& v) const;
    Fp from_decimal(const std::string& s) const;
    // Fixed-width little-endian canonical bytes, byte_size() long.
    Fp from_bytes(std::span<const uint8_t> b) const;
    // Interprets arbitrary bytes as a little-endian integer reduced mod p.
    Fp from_bytes_reduce(std::span<const uint8_t> b) const;
    // Generator of the 2^two_adicity subgroup.
    Fp two_adic_generator() const;
    // Primitive 2^k-th root of unity; throws if k > two_adicity.
    Fp root_of_unity(uint32_t k) const;

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

private:
    friend class Fp;
    PrimeField() = default;

    U256 p_{};
    U256 p_minus_2_{};
    U256 r1_{};   // 2^256 mod p, Montgomery form of 1
    U256 r2_{};   // 2^512 mod p
    uint64_t inv_ = 0;  // -p^{-1} mod 2^64
    uint32_t bit_size_ = 0;
    uint32_t byte_size_ = 0;
    uint32_t two_adicity_ = 0;
    U256 odd_part_{};      // (p-1) >> two_adicity
    U256 root_m_{};        // 2^two_adicity subgroup generator, Montgomery form
    std::string name_;
};

// Prime field element, always reduced, stored in Montgomery form.
class Fp {
public:
    Fp() : f_(nullptr), v_{} {}

    bool valid() const { return f_ != nullptr; }
    const PrimeField& field() const {
        assert(f_);
        return *f_;
    }

    bool is_zero() const { return u256::is_zero(v_); }
    bool operator==(const Fp& o) const { return v_ == o.v_ && same_field(o); }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    Fp operator+(const Fp& o) const;
    Fp operator-(const Fp& o) const;
    Fp operator*(const Fp& o) const;
    Fp operator-() const;
    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }

    Fp square() const { return *this * *this; }
    Fp pow(const U256& e) const;
    Fp pow(uint64_t e) const { return pow(u256::from_u64(e)); }
    Fp pow_bits(std::span<const uint64_t> limbs) const;
    // Fermat inversion; throws on zero.
    Fp inverse() const;
    // Tonelli-Shanks; nullopt when *this is a non-residue.
    std::optional<Fp> sqrt() const;

    U256 canonical() const;
    uint64_t canonical_u64() const;
    Bytes to_bytes() const;
    void write_bytes(ByteWriter& w) const { w.raw(to_bytes()); }

private:
    friend class PrimeField;
    Fp(const PrimeField* f, const U256& mont) : f_(f), v_(mont) {}
    bool same_field(const Fp& o) const {
        assert(f_ && o.f_ && *f_ == *o.f_);
        return true;
    }

    const PrimeField* f_;
    U256 v_;
};

// Signed view of a field element under the 2^(b-1) negativity threshold.
struct SignedValue {
    bool negative = false;
    U256 magnitude{};

    // Checked narrowing; throws when the magnitude exceeds 126 bits.
    __int128 to_i128() const;
    double to_double() const;
};

// Embedding of signed integers with |x| < 2^(b-1) into F_p.
Fp signed_encode(const PrimeField& f, __int128 x);
Fp signed_encode_big(const PrimeField& f, const SignedValue& x);
SignedValue signed_decode(const Fp& x);

// One field inversion total (Montgomery batch trick). Throws, naming the
// offending index, if any input is zero.
std::vector<Fp> batch_invert(std::span<const Fp> values);

}  // namespace unr
