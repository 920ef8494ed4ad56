#include "unr/quantize.hpp"

#include <cmath>

namespace unr {

double Dyadic::to_double() const {
    return std::ldexp(double(num), -int(log2_den));
}

Dyadic Dyadic::sub(const Dyadic& a, const Dyadic& b) {
    uint32_t den = std::max(a.log2_den, b.log2_den);
    __int128 an = a.num << (den - a.log2_den);
    __int128 bn = b.num << (den - b.log2_den);
    return {an - bn, den};
}

bool Dyadic::operator<=(const Dyadic& o) const {
    uint32_t den = std::max(log2_den, o.log2_den);
    return (num << (den - log2_den)) <= (o.num << (den - o.log2_den));
}

bool Dyadic::operator==(const Dyadic& o) const {
    uint32_t den = std::max(log2_den, o.log2_den);
    return (num << (den - log2_den)) == (o.num << (den - o.log2_den));
}

QuantParams::QuantParams(const PrimeField& f, uint32_t rho_) : field(&f), rho(rho_) {
    if (rho == 0 || rho >= f.bit_size() - 1)
        throw std::invalid_argument("precision must satisfy 1 <= rho < b-1");
}

__int128 scale_round(double x, uint32_t rho) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite input to quantize");
    if (x == 0.0) return 0;
    int exp;
    double frac = std::frexp(x, &exp);  // x = frac * 2^exp, |frac| in [0.5, 1)
    // 53-bit integer mantissa: x = mant * 2^(exp - 53) exactly
    __int128 mant = (__int128)std::llround(std::ldexp(frac, 53));
    int shift = exp - 53 + int(rho);
    if (shift >= 0) {
        if (shift > 120) throw std::out_of_range("quantize: scale overflow");
        return mant << shift;
    }
    // round half away from zero on the dropped bits
    int drop = -shift;
    if (drop > 126) return 0;
    bool neg = mant < 0;
    unsigned __int128 mag = neg ? (unsigned __int128)(-mant) : (unsigned __int128)mant;
    unsigned __int128 half = (unsigned __int128)1 << (drop - 1);
    unsigned __int128 q = (mag + half) >> drop;
    __int128 r = (__int128)q;
    return neg ? -r : r;
}

QuantizedValue quantize_at(const PrimeField& f, double x, uint32_t precision) {
    __int128 scaled = scale_round(x, precision);
    return QuantizedValue{signed_encode(f, scaled), precision};
}

QuantizedValue quantize(const QuantParams& qp, double x) {
    return quantize_at(*qp.field, x, qp.rho);
}

Dyadic QuantizedValue::dequantize_exact() const {
    SignedValue sv = signed_decode(value);
    return Dyadic{sv.to_i128(), effective_precision};
}

QuantizedValue q_mul(const QuantizedValue& a, const QuantizedValue& b) {
    const PrimeField& f = a.value.field();
    uint32_t prec = a.effective_precision + b.effective_precision;
    if (prec >= f.bit_size() - 1)
        throw std::out_of_range("q_mul: combined precision reaches b-1");
    return QuantizedValue{a.value * b.value, prec};
}

QuantizedValue q_add(const QuantizedValue& a, const QuantizedValue& b) {
    if (a.effective_precision != b.effective_precision)
        throw std::invalid_argument("q_add: precision mismatch (align with precision_cut)");
    return QuantizedValue{a.value + b.value, a.effective_precision};
}

QuantizedValue precision_cut(const QuantizedValue& v, uint32_t cut_bits) {
    if (cut_bits == 0) return v;
    if (cut_bits >= v.effective_precision)
        throw std::invalid_argument("precision_cut: cut reaches effective precision");
    SignedValue sv = signed_decode(v.value);
    U256 mag = sv.magnitude;
    if (sv.negative) {
        // floor for negatives: -ceil(mag / 2^k) = -((mag + 2^k - 1) >> k)
        U256 bias{};
        bias[cut_bits / 64] = uint64_t(1) << (cut_bits % 64);
        u256::sub(bias, u256::from_u64(1));
        u256::add(mag, bias);
    }
    for (uint32_t i = 0; i < cut_bits; ++i) u256::shr1(mag);
    SignedValue out{sv.negative && !u256::is_zero(mag), mag};
    return QuantizedValue{signed_encode_big(v.value.field(), out),
                          v.effective_precision - cut_bits};
}

size_t QuantizedTensor::count() const {
    size_t n = 1;
    for (uint32_t d : shape) n *= d;
    return n;
}

QuantizedTensor quantize_tensor(const PrimeField& f, std::span<const double> data,
                                std::span<const uint32_t> shape, uint32_t precision) {
    QuantizedTensor t;
    t.shape.assign(shape.begin(), shape.end());
    if (data.size() != t.count()) throw std::invalid_argument("tensor data/shape mismatch");
    t.values.reserve(data.size());
    for (double x : data) t.values.push_back(quantize_at(f, x, precision));
    return t;
}

}  // namespace unr
