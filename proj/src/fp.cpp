#include "unr/fp.hpp"

#include <algorithm>

namespace unr {

namespace u256 {

int cmp(const U256& a, const U256& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[i] < b[i]) return -1;
        if (a[i] > b[i]) return 1;
    }
    return 0;
}

bool is_zero(const U256& a) { return !(a[0] | a[1] | a[2] | a[3]); }

uint64_t add(U256& a, const U256& b) {
    unsigned __int128 c = 0;
    for (int i = 0; i < 4; ++i) {
        c += (unsigned __int128)a[i] + b[i];
        a[i] = (uint64_t)c;
        c >>= 64;
    }
    return (uint64_t)c;
}

uint64_t sub(U256& a, const U256& b) {
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 d = (unsigned __int128)a[i] - b[i] - borrow;
        a[i] = (uint64_t)d;
        borrow = (d >> 64) & 1;
    }
    return (uint64_t)borrow;
}

void shr1(U256& a) {
    for (int i = 0; i < 3; ++i) a[i] = (a[i] >> 1) | (a[i + 1] << 63);
    a[3] >>= 1;
}

bool bit(const U256& a, uint32_t i) { return (a[i / 64] >> (i % 64)) & 1; }

uint32_t bit_length(const U256& a) {
    for (int i = 3; i >= 0; --i)
        if (a[i]) return uint32_t(64 * i + 64 - __builtin_clzll(a[i]));
    return 0;
}

U256 from_u64(uint64_t v) { return U256{v, 0, 0, 0}; }

static void mul_small_add(U256& a, uint64_t mul, uint64_t add_v) {
    unsigned __int128 c = add_v;
    for (int i = 0; i < 4; ++i) {
        c += (unsigned __int128)a[i] * mul;
        a[i] = (uint64_t)c;
        c >>= 64;
    }
    if (c) throw std::runtime_error("u256: overflow while parsing");
}

U256 from_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty decimal string");
    U256 v{};
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw std::invalid_argument("bad decimal digit");
        mul_small_add(v, 10, uint64_t(ch - '0'));
    }
    return v;
}

U256 from_hex(const std::string& s) {
    U256 v{};
    size_t start = (s.rfind("0x", 0) == 0) ? 2 : 0;
    for (size_t i = start; i < s.size(); ++i) {
        char ch = s[i];
        uint64_t d;
        if (ch >= '0' && ch <= '9') d = uint64_t(ch - '0');
        else if (ch >= 'a' && ch <= 'f') d = uint64_t(ch - 'a' + 10);
        else if (ch >= 'A' && ch <= 'F') d = uint64_t(ch - 'A' + 10);
        else throw std::invalid_argument("bad hex digit");
        mul_small_add(v, 16, d);
    }
    return v;
}

std::string to_decimal(const U256& a) {
    if (is_zero(a)) return "0";
    U256 v = a;
    std::string out;
    while (!is_zero(v)) {
        // divide by 10, collect remainder
        unsigned __int128 rem = 0;
        for (int i = 3; i >= 0; --i) {
            unsigned __int128 cur = (rem << 64) | v[i];
            v[i] = (uint64_t)(cur / 10);
            rem = cur % 10;
        }
        out.push_back(char('0' + (int)rem));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace u256

namespace {

// CIOS Montgomery product: a*b*2^{-256} mod p. Requires p < 2^254 so the
// 6-limb accumulator never overflows and one final subtraction reduces.
U256 mont_mul(const U256& a, const U256& b, const U256& p, uint64_t inv) {
    uint64_t t[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        unsigned __int128 carry = 0;
        for (int j = 0; j < 4; ++j) {
            unsigned __int128 cur = (unsigned __int128)a[i] * b[j] + t[j] + carry;
            t[j] = (uint64_t)cur;
            carry = cur >> 64;
        }
        unsigned __int128 cur = (unsigned __int128)t[4] + carry;
        t[4] = (uint64_t)cur;
        t[5] = (uint64_t)(cur >> 64);

        uint64_t m = t[0] * inv;
        carry = ((unsigned __int128)m * p[0] + t[0]) >> 64;
        for (int j = 1; j < 4; ++j) {
            unsigned __int128 cur2 = (unsigned __int128)m * p[j] + t[j] + carry;
            t[j - 1] = (uint64_t)cur2;
            carry = cur2 >> 64;
        }
        unsigned __int128 cur3 = (unsigned __int128)t[4] + carry;
        t[3] = (uint64_t)cur3;
        t[4] = t[5] + (uint64_t)(cur3 >> 64);
        t[5] = 0;
    }
    U256 r{t[0], t[1], t[2], t[3]};
    if (t[4] || u256::cmp(r, p) >= 0) u256::sub(r, p);
    return r;
}

U256 mod_add(const U256& a, const U256& b, const U256& p) {
    U256 r = a;
    uint64_t carry = u256::add(r, b);
    if (carry || u256::cmp(r, p) >= 0) u256::sub(r, p);
    return r;
}

U256 mod_sub(const U256& a, const U256& b, const U256& p) {
    U256 r = a;
    if (u256::sub(r, b)) u256::add(r, p);
    return r;
}

}  // namespace

std::shared_ptr<const PrimeField> PrimeField::create(const U256& modulus, std::string name) {
    if (u256::is_zero(modulus) || !(modulus[0] & 1))
        throw std::invalid_argument("modulus must be odd");
    uint32_t bits = u256::bit_length(modulus);
    if (bits > 254) throw std::invalid_argument("modulus exceeds 254 bits");

    auto f = std::shared_ptr<PrimeField>(new PrimeField());
    f->p_ = modulus;
    f->bit_size_ = bits;
    f->byte_size_ = (bits + 7) / 8;
    f->name_ = std::move(name);

    f->p_minus_2_ = modulus;
    u256::sub(f->p_minus_2_, u256::from_u64(2));

    // -p^{-1} mod 2^64 by Newton iteration
    uint64_t x = modulus[0];
    for (int i = 0; i < 6; ++i) x *= 2 - modulus[0] * x;
    f->inv_ = ~x + 1;

    // r1 = 2^256 mod p by shifting 1 up 256 times
    U256 r{1, 0, 0, 0};
    for (int i = 0; i < 256; ++i) {
        uint64_t carry = u256::add(r, r);
        if (carry || u256::cmp(r, modulus) >= 0) u256::sub(r, modulus);
    }
    f->r1_ = r;
    // r2 = 2^512 mod p, doubling r1 another 256 times
    for (int i = 0; i < 256; ++i) {
        uint64_t carry = u256::add(r, r);
        if (carry || u256::cmp(r, modulus) >= 0) u256::sub(r, modulus);
    }
    f->r2_ = r;

    U256 pm1 = modulus;
    u256::sub(pm1, u256::from_u64(1));
    uint32_t t = 0;
    while (!u256::bit(pm1, t)) ++t;
    f->two_adicity_ = t;
    U256 odd = pm1;
    for (uint32_t i = 0; i < t; ++i) u256::shr1(odd);
    f->odd_part_ = odd;

    // 2^t subgroup generator: first small c where (c^odd)^(2^(t-1)) != 1
    for (uint64_t c = 2;; ++c) {
        Fp cand = f->from_u64(c).pow(odd);
        Fp probe = cand;
        for (uint32_t i = 0; i + 1 < t; ++i) probe = probe.square();
        if (!(probe == f->one())) {
            f->root_m_ = cand.v_;
            break;
        }
        if (c > 1000) throw std::runtime_error("no 2-adic generator found");
    }
    return f;
}

std::shared_ptr<const PrimeField> PrimeField::create_from_decimal(const std::string& dec,
                                                                  std::string name) {
    return create(u256::from_decimal(dec), std::move(name));
}

Fp PrimeField::zero() const { return Fp(this, U256{}); }
Fp PrimeField::one() const { return Fp(this, r1_); }

Fp PrimeField::from_canonical(const U256& v) const {
    if (u256::cmp(v, p_) >= 0) throw std::invalid_argument("value not reduced mod p");
    return Fp(this, mont_mul(v, r2_, p_, inv_));
}

Fp PrimeField::from_u64(uint64_t v) const {
    U256 c = u256::from_u64(v);
    while (u256::cmp(c, p_) >= 0) u256::sub(c, p_);
    return Fp(this, mont_mul(c, r2_, p_, inv_));
}

Fp PrimeField::from_decimal(const std::string& s) const {
    U256 c = u256::from_decimal(s);
    while (u256::cmp(c, p_) >= 0) u256::sub(c, p_);
    return Fp(this, mont_mul(c, r2_, p_, inv_));
}

Fp PrimeField::from_bytes(std::span<const uint8_t> b) const {
    if (b.size() != byte_size_)
        throw std::invalid_argument("field element bytes: wrong width");
    U256 c{};
    for (size_t i = 0; i < b.size(); ++i) c[i / 8] |= uint64_t(b[i]) << (8 * (i % 8));
    return from_canonical(c);
}

Fp PrimeField::from_bytes_reduce(std::span<const uint8_t> b) const {
    // little-endian fold: process from the top byte down, v = v*256 + byte
    Fp v = zero();
    Fp base = from_u64(256);
    for (size_t i = b.size(); i-- > 0;) v = v * base + from_u64(b[i]);
    return v;
}

Fp PrimeField::two_adic_generator() const { return Fp(this, root_m_); }

Fp PrimeField::root_of_unity(uint32_t k) const {
    if (k > two_adicity_) throw std::invalid_argument("field lacks 2-adicity for domain");
    Fp r = two_adic_generator();
    for (uint32_t i = k; i < two_adicity_; ++i) r = r.square();
    return r;
}

Fp Fp::operator+(const Fp& o) const {
    same_field(o);
    return Fp(f_, mod_add(v_, o.v_, f_->p_));
}

Fp Fp::operator-(const Fp& o) const {
    same_field(o);
    return Fp(f_, mod_sub(v_, o.v_, f_->p_));
}

Fp Fp::operator*(const Fp& o) const {
    same_field(o);
    return Fp(f_, mont_mul(v_, o.v_, f_->p_, f_->inv_));
}

Fp Fp::operator-() const { return Fp(f_, mod_sub(U256{}, v_, f_->p_)); }

Fp Fp::pow(const U256& e) const {
    return pow_bits(std::span<const uint64_t>(e.data(), e.size()));
}

Fp Fp::pow_bits(std::span<const uint64_t> limbs) const {
    Fp acc = f_->one();
    bool seen = false;
    for (size_t li = limbs.size(); li-- > 0;) {
        for (int bi = 63; bi >= 0; --bi) {
            if (seen) acc = acc.square();
            if ((limbs[li] >> bi) & 1) {
                acc = acc * *this;
                seen = true;
            }
        }
    }
    return acc;
}

Fp Fp::inverse() const {
    if (is_zero()) throw std::domain_error("field inversion of zero");
    return pow(f_->p_minus_2_);
}

std::optional<Fp> Fp::sqrt() const {
    if (is_zero()) return *this;
    // Euler criterion
    U256 e = f_->p_;
    u256::sub(e, u256::from_u64(1));
    u256::shr1(e);
    if (!(pow(e) == f_->one())) return std::nullopt;

    // Tonelli-Shanks with precomputed 2-adic generator
    U256 q1 = f_->odd_part_;  // odd
    uint64_t carry = u256::add(q1, u256::from_u64(1));
    (void)carry;
    u256::shr1(q1);  // (q+1)/2
    Fp r = pow(q1);
    Fp t = pow(f_->odd_part_);
    Fp c = f_->two_adic_generator();
    uint32_t m = f_->two_adicity_;
    while (!(t == f_->one())) {
        Fp probe = t;
        uint32_t i = 0;
        while (!(probe == f_->one())) {
            probe = probe.square();
            ++i;
            if (i == m) return std::nullopt;
        }
        Fp b = c;
        for (uint32_t j = 0; j + i + 1 < m; ++j) b = b.square();
        m = i;
        c = b.square();
        t = t * c;
        r = r * b;
    }
    return r;
}

U256 Fp::canonical() const {
    return mont_mul(v_, U256{1, 0, 0, 0}, f_->p_, f_->inv_);
}

uint64_t Fp::canonical_u64() const {
    U256 c = canonical();
    if (c[1] || c[2] || c[3]) throw std::runtime_error("field value exceeds 64 bits");
    return c[0];
}

Bytes Fp::to_bytes() const {
    U256 c = canonical();
    Bytes out(f_->byte_size_);
    for (size_t i = 0; i < out.size(); ++i) out[i] = uint8_t(c[i / 8] >> (8 * (i % 8)));
    return out;
}

__int128 SignedValue::to_i128() const {
    if (magnitude[2] || magnitude[3] || (magnitude[1] >> 62))
        throw std::runtime_error("signed value exceeds 126 bits");
    __int128 m = ((__int128)magnitude[1] << 64) | magnitude[0];
    return negative ? -m : m;
}

double SignedValue::to_double() const {
    double m = 0;
    for (int i = 3; i >= 0; --i) m = m * 18446744073709551616.0 + double(magnitude[i]);
    return negative ? -m : m;
}

Fp signed_encode(const PrimeField& f, __int128 x) {
    bool neg = x < 0;
    unsigned __int128 mag = neg ? (unsigned __int128)(-x) : (unsigned __int128)x;
    SignedValue sv;
    sv.negative = neg;
    sv.magnitude = U256{(uint64_t)mag, (uint64_t)(mag >> 64), 0, 0};
    return signed_encode_big(f, sv);
}

Fp signed_encode_big(const PrimeField& f, const SignedValue& x) {
    // Exact injectivity domain under the 2^(b-1) threshold: positives below
    // 2^(b-1), negative magnitudes at most p - 2^(b-1) (p < 2^b, so the
    // negative side is the narrower one).
    uint32_t half_bits = f.bit_size() - 1;
    U256 lim{};
    lim[half_bits / 64] = uint64_t(1) << (half_bits % 64);
    if (x.negative) {
        U256 neg_lim = f.modulus();
        u256::sub(neg_lim, lim);
        if (u256::cmp(x.magnitude, neg_lim) > 0)
            throw std::out_of_range("signed_encode: negative magnitude exceeds p - 2^(b-1)");
    } else if (u256::cmp(x.magnitude, lim) >= 0) {
        throw std::out_of_range("signed_encode: value >= 2^(b-1)");
    }
    Fp v = f.from_canonical(x.magnitude);
    return x.negative ? -v : v;
}

SignedValue signed_decode(const Fp& x) {
    const PrimeField& f = x.field();
    U256 c = x.canonical();
    uint32_t half = f.bit_size() - 1;
    U256 threshold{};
    threshold[half / 64] = uint64_t(1) << (half % 64);
    SignedValue sv;
    if (u256::cmp(c, threshold) < 0) {
        sv.negative = false;
        sv.magnitude = c;
    } else {
        sv.negative = true;
        U256 m = f.modulus();
        u256::sub(m, c);
        sv.magnitude = m;
    }
    return sv;
}

std::vector<Fp> batch_invert(std::span<const Fp> values) {
    std::vector<Fp> out(values.begin(), values.end());
    if (out.empty()) return out;
    const PrimeField& f = out[0].field();
    std::vector<Fp> prefix(out.size());
    Fp acc = f.one();
    for (size_t i = 0; i < out.size(); ++i) {
        if (out[i].is_zero())
            throw std::domain_error("batch_invert: zero at index " + std::to_string(i));
        prefix[i] = acc;
        acc = acc * out[i];
    }
    Fp inv = acc.inverse();
    for (size_t i = out.size(); i-- > 0;) {
        Fp cur = out[i];
        out[i] = inv * prefix[i];
        inv = inv * cur;
    }
    return out;
}

}  // namespace unr
