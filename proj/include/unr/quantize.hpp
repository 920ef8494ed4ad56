#pragma once

#include <cstdint>
#include <vector>

#include "unr/fp.hpp"

namespace unr {

// Exact dyadic rational num / 2^log2_den. Reference computations compare these
// exactly; floats appear only at the API surface.
struct Dyadic {
    __int128 num = 0;
    uint32_t log2_den = 0;

    double to_double() const;
    // align two dyadics to a common denominator and compare |a - b| <= |c|
    static Dyadic sub(const Dyadic& a, const Dyadic& b);
    Dyadic abs() const { return {num < 0 ? -num : num, log2_den}; }
    bool operator<=(const Dyadic& o) const;
    bool operator==(const Dyadic& o) const;
};

struct QuantParams {
    const PrimeField* field = nullptr;
    uint32_t rho = 0;  // precision bits, 1 <= rho < b-1

    QuantParams(const PrimeField& f, uint32_t rho_);
};

// Field-encoded fixed-point value. effective_precision tracks the accumulated
// scale exponent: the represented real is signed_decode(value) / 2^precision.
struct QuantizedValue {
    Fp value;
    uint32_t effective_precision = 0;

    Dyadic dequantize_exact() const;
    double dequantize() const { return dequantize_exact().to_double(); }
};

// round-half-away-from-zero of 2^rho * x, computed exactly from the double's
// mantissa/exponent decomposition
__int128 scale_round(double x, uint32_t rho);

QuantizedValue quantize(const QuantParams& qp, double x);
QuantizedValue quantize_at(const PrimeField& f, double x, uint32_t precision);

// mul adds precisions (guarded by sum < b-1); add requires equal precision.
QuantizedValue q_mul(const QuantizedValue& a, const QuantizedValue& b);
QuantizedValue q_add(const QuantizedValue& a, const QuantizedValue& b);
// floor(signed / 2^cut_bits); precision drops by cut_bits. cut_bits = 0 is the
// identity, otherwise 0 < cut_bits < effective_precision.
QuantizedValue precision_cut(const QuantizedValue& v, uint32_t cut_bits);

struct QuantizedTensor {
    std::vector<uint32_t> shape;
    std::vector<QuantizedValue> values;  // flat, row-major, uniform precision

    size_t count() const;
};

QuantizedTensor quantize_tensor(const PrimeField& f, std::span<const double> data,
                                std::span<const uint32_t> shape, uint32_t precision);

}  // namespace unr
