#include "unr/bn254.hpp"

namespace unr {

namespace {

const PrimeField& FQ() { return bn254_fq(); }

// ---- wide unsigned integers for the final exponentiation ------------------

using Big = std::vector<uint64_t>;

Big big_from_u256(const U256& v) {
    Big b(v.begin(), v.end());
    while (b.size() > 1 && b.back() == 0) b.pop_back();
    return b;
}

Big big_mul(const Big& a, const Big& b) {
    Big r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        unsigned __int128 carry = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            unsigned __int128 cur = (unsigned __int128)a[i] * b[j] + r[i + j] + carry;
            r[i + j] = (uint64_t)cur;
            carry = cur >> 64;
        }
        r[i + b.size()] += (uint64_t)carry;
    }
    while (r.size() > 1 && r.back() == 0) r.pop_back();
    return r;
}

void big_sub_small(Big& a, uint64_t v) {
    unsigned __int128 borrow = v;
    for (size_t i = 0; i < a.size() && borrow; ++i) {
        unsigned __int128 d = (unsigned __int128)a[i] - borrow;
        a[i] = (uint64_t)d;
        borrow = (d >> 64) & 1;
    }
}

int big_cmp(const Big& a, const Big& b) {
    size_t n = std::max(a.size(), b.size());
    for (size_t i = n; i-- > 0;) {
        uint64_t av = i < a.size() ? a[i] : 0;
        uint64_t bv = i < b.size() ? b[i] : 0;
        if (av != bv) return av < bv ? -1 : 1;
    }
    return 0;
}

void big_sub(Big& a, const Big& b) {
    unsigned __int128 borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t bv = i < b.size() ? b[i] : 0;
        unsigned __int128 d = (unsigned __int128)a[i] - bv - borrow;
        a[i] = (uint64_t)d;
        borrow = (d >> 64) & 1;
    }
}

size_t big_bits(const Big& a) {
    for (size_t i = a.size(); i-- > 0;)
        if (a[i]) return 64 * i + 64 - __builtin_clzll(a[i]);
    return 0;
}

bool big_bit(const Big& a, size_t i) {
    return i / 64 < a.size() && ((a[i / 64] >> (i % 64)) & 1);
}

// binary long division, quotient only (exact division is asserted by caller)
Big big_div(const Big& num, const Big& den) {
    size_t nb = big_bits(num);
    Big q((nb + 63) / 64 + 1, 0);
    Big rem{0};
    for (size_t i = nb; i-- > 0;) {
        // rem = rem*2 + bit
        uint64_t carry = big_bit(num, i) ? 1 : 0;
        for (size_t j = 0; j < rem.size(); ++j) {
            uint64_t nv = (rem[j] << 1) | carry;
            carry = rem[j] >> 63;
            rem[j] = nv;
        }
        if (carry) rem.push_back(carry);
        if (big_cmp(rem, den) >= 0) {
            big_sub(rem, den);
            q[i / 64] |= uint64_t(1) << (i % 64);
        }
    }
    while (q.size() > 1 && q.back() == 0) q.pop_back();
    return q;
}

Fp fq_u64(uint64_t v) { return FQ().from_u64(v); }

}  // namespace

// ---- tower ------------------------------------------------------------------

std::optional<Fq2> Fq2::sqrt() const {
    const PrimeField& f = FQ();
    if (is_zero()) return *this;
    if (b.is_zero()) {
        if (auto r = a.sqrt()) return Fq2{*r, f.zero()};
        // a is a non-residue: sqrt(a) = sqrt(-a) * u since u^2 = -1
        auto r = (-a).sqrt();
        if (!r) return std::nullopt;
        return Fq2{f.zero(), *r};
    }
    // complex method over Fq[u]/(u^2+1)
    auto norm_sqrt = (a * a + b * b).sqrt();
    if (!norm_sqrt) return std::nullopt;
    Fp half = f.from_u64(2).inverse();
    Fp t = (a + *norm_sqrt) * half;
    auto x0 = t.sqrt();
    if (!x0) {
        t = (a - *norm_sqrt) * half;
        x0 = t.sqrt();
        if (!x0) return std::nullopt;
    }
    Fp x1 = b * half * x0->inverse();
    Fq2 cand{*x0, x1};
    if (cand * cand == *this) return cand;
    return std::nullopt;
}

Fq2 Fq6::mul_xi(const Fq2& x) {
    // (9 + u)(a + bu) = (9a - b) + (a + 9b)u
    Fp nine = fq_u64(9);
    return {nine * x.a - x.b, x.a + nine * x.b};
}

Fq6 Fq6::operator*(const Fq6& o) const {
    Fq2 a0 = c0 * o.c0, a1 = c1 * o.c1, a2 = c2 * o.c2;
    Fq2 t0 = a0 + mul_xi((c1 + c2) * (o.c1 + o.c2) - a1 - a2);
    Fq2 t1 = (c0 + c1) * (o.c0 + o.c1) - a0 - a1 + mul_xi(a2);
    Fq2 t2 = (c0 + c2) * (o.c0 + o.c2) - a0 - a2 + a1;
    return {t0, t1, t2};
}

Fq6 Fq6::inverse() const {
    Fq2 t0 = c0 * c0 - mul_xi(c1 * c2);
    Fq2 t1 = mul_xi(c2 * c2) - c0 * c1;
    Fq2 t2 = c1 * c1 - c0 * c2;
    Fq2 denom = (c0 * t0 + mul_xi(c2 * t1) + mul_xi(c1 * t2)).inverse();
    return {t0 * denom, t1 * denom, t2 * denom};
}

Fq12 Fq12::pow_bits(std::span<const uint64_t> limbs) const {
    Fq12 one{{{FQ().one(), FQ().zero()}, {FQ().zero(), FQ().zero()}, {FQ().zero(), FQ().zero()}},
             {{FQ().zero(), FQ().zero()}, {FQ().zero(), FQ().zero()}, {FQ().zero(), FQ().zero()}}};
    Fq12 acc = one;
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

// ---- Jacobian arithmetic, generic over the coordinate field -----------------

namespace {

template <class F>
struct Jac {
    F x, y, z;  // infinity iff z == 0

    bool inf() const { return z.is_zero(); }
    Jac group_zero() const {
        F zero = x - x;
        F one_like = y;  // any value; x/y unused at infinity
        return {one_like, one_like, zero};
    }
    Jac neg() const { return {x, -y, z}; }

    Jac dbl() const {
        if (inf()) return *this;
        F a = x * x;
        F b = y * y;
        F c = b * b;
        F xb = x + b;
        F d = (xb * xb - a - c);
        d = d + d;
        F e = a + a + a;
        F fe = e * e;
        F x3 = fe - (d + d);
        F eight_c = c + c;
        eight_c = eight_c + eight_c;
        eight_c = eight_c + eight_c;
        F y3 = e * (d - x3) - eight_c;
        F z3 = y * z;
        z3 = z3 + z3;
        return {x3, y3, z3};
    }

    Jac add(const Jac& o) const {
        if (inf()) return o;
        if (o.inf()) return *this;
        F z1z1 = z * z, z2z2 = o.z * o.z;
        F u1 = x * z2z2, u2 = o.x * z1z1;
        F s1 = y * o.z * z2z2, s2 = o.y * z * z1z1;
        F h = u2 - u1;
        if (h.is_zero()) {
            if ((s2 - s1).is_zero()) return dbl();
            F zero = x - x;
            return {x, y, zero};
        }
        F hh = h + h;
        F i = hh * hh;
        F j = h * i;
        F rr = s2 - s1;
        rr = rr + rr;
        F v = u1 * i;
        F x3 = rr * rr - j - (v + v);
        F s1j = s1 * j;
        F y3 = rr * (v - x3) - (s1j + s1j);
        F zs = z + o.z;
        F z3 = (zs * zs - z1z1 - z2z2) * h;
        return {x3, y3, z3};
    }
};

template <class F, class A>
Jac<F> to_jac(const A& p, const F& one) {
    if (p.infinity) return Jac<F>{one, one, one - one};
    return Jac<F>{p.x, p.y, one};
}

template <class F, class A>
A to_affine(const Jac<F>& j) {
    A out;
    if (j.inf()) {
        out.infinity = true;
        out.x = j.x;
        out.y = j.y;
        return out;
    }
    F zi = j.z.inverse();
    F zi2 = zi * zi;
    out.x = j.x * zi2;
    out.y = j.y * zi2 * zi;
    out.infinity = false;
    return out;
}

}  // namespace

bool G1Affine::operator==(const G1Affine& o) const {
    if (infinity || o.infinity) return infinity == o.infinity;
    return x == o.x && y == o.y;
}

bool G2Affine::operator==(const G2Affine& o) const {
    if (infinity || o.infinity) return infinity == o.infinity;
    return x == o.x && y == o.y;
}

// ---- engine ------------------------------------------------------------------

Bn254Engine::Bn254Engine() {
    const PrimeField& fq = FQ();
    b1_ = fq.from_u64(3);
    Fq2 xi{fq.from_u64(9), fq.one()};
    b2_ = Fq2{fq.from_u64(3), fq.zero()} * xi.inverse();

    g1_gen_ = G1Affine{fq.one(), fq.from_u64(2), false};
    g2_gen_ = G2Affine{
        {fq.from_decimal("10857046999023057135944570762232829481370756359578518086990519993285"
                         "655852781"),
         fq.from_decimal("11559732032986387107991004021392285783925812861821192530917403151452"
                         "391805634")},
        {fq.from_decimal("84956539231234314176049732474892724384181905872636001487702806493069"
                         "58101930"),
         fq.from_decimal("40823678758634336813322034031454355683168513275934012081057410762141"
                         "20093531")},
        false};
    if (!g1_on_curve(g1_gen_) || !g2_on_curve(g2_gen_))
        throw std::logic_error("bn254 generators fail the curve equation");

    // final exponentiation (q^12 - 1) / r
    Big q = big_from_u256(fq.modulus());
    Big q12{1};
    for (int i = 0; i < 12; ++i) q12 = big_mul(q12, q);
    big_sub_small(q12, 1);
    final_exp_ = big_div(q12, big_from_u256(bn254_fr().modulus()));
}

const Bn254Engine& Bn254Engine::instance() {
    static Bn254Engine eng;
    return eng;
}

Bn254Engine::G1 Bn254Engine::g1_zero() const {
    return G1Affine{FQ().zero(), FQ().zero(), true};
}

Bn254Engine::G2 Bn254Engine::g2_zero() const {
    Fq2 z{FQ().zero(), FQ().zero()};
    return G2Affine{z, z, true};
}

bool Bn254Engine::g1_on_curve(const G1& p) const {
    if (p.infinity) return true;
    return p.y * p.y == p.x * p.x * p.x + b1_;
}

bool Bn254Engine::g2_on_curve(const G2& p) const {
    if (p.infinity) return true;
    return p.y * p.y == p.x * p.x * p.x + b2_;
}

Bn254Engine::G1 Bn254Engine::g1_add(const G1& a, const G1& b) const {
    auto j = to_jac(a, FQ().one()).add(to_jac(b, FQ().one()));
    return to_affine<Fp, G1Affine>(j);
}

Bn254Engine::G2 Bn254Engine::g2_add(const G2& a, const G2& b) const {
    Fq2 one{FQ().one(), FQ().zero()};
    auto j = to_jac(a, one).add(to_jac(b, one));
    return to_affine<Fq2, G2Affine>(j);
}

Bn254Engine::G1 Bn254Engine::g1_neg(const G1& a) const {
    if (a.infinity) return a;
    return {a.x, -a.y, false};
}

Bn254Engine::G2 Bn254Engine::g2_neg(const G2& a) const {
    if (a.infinity) return a;
    return {a.x, -a.y, false};
}

Bn254Engine::G1 Bn254Engine::g1_mul(const G1& a, const Fp& s) const {
    auto j = scalar_mul(to_jac(a, FQ().one()), s);
    return to_affine<Fp, G1Affine>(j);
}

Bn254Engine::G2 Bn254Engine::g2_mul(const G2& a, const Fp& s) const {
    Fq2 one{FQ().one(), FQ().zero()};
    auto j = scalar_mul(to_jac(a, one), s);
    return to_affine<Fq2, G2Affine>(j);
}

Bn254Engine::G1 Bn254Engine::g1_msm(std::span<const G1> bases, std::span<const Fp> scalars) const {
    std::vector<Jac<Fp>> jb;
    jb.reserve(bases.size());
    for (const auto& p : bases) jb.push_back(to_jac(p, FQ().one()));
    Jac<Fp> zero{FQ().one(), FQ().one(), FQ().zero()};
    auto r = msm(zero, std::span<const Jac<Fp>>(jb), scalars);
    return to_affine<Fp, G1Affine>(r);
}

Bn254Engine::G2 Bn254Engine::g2_msm(std::span<const G2> bases, std::span<const Fp> scalars) const {
    Fq2 one{FQ().one(), FQ().zero()};
    std::vector<Jac<Fq2>> jb;
    jb.reserve(bases.size());
    for (const auto& p : bases) jb.push_back(to_jac(p, one));
    Jac<Fq2> zero{one, one, one - one};
    auto r = msm(zero, std::span<const Jac<Fq2>>(jb), scalars);
    return to_affine<Fq2, G2Affine>(r);
}

// Reduced Tate pairing. T walks multiples of P over Fq; the line is evaluated
// at psi(Q) = (x_Q w^2, y_Q w^3) in Fq12. Vertical lines land in Fq6 and are
// killed by the final exponentiation, so they are skipped outright.
Fq12 Bn254Engine::miller_tate(const G1& p, const G2& q) const {
    const PrimeField& fq = FQ();
    Fp zero = fq.zero(), one = fq.one();
    Fq2 z2{zero, zero};
    Fq6 z6{z2, z2, z2};
    auto fq12_one = [&] {
        return Fq12{{{one, zero}, z2, z2}, z6};
    };

    // psi(Q): x component sits at c0.c1 (the v slot), y at c1.c1 (the v*w slot)
    Fq12 xq{{z2, q.x, z2}, z6};
    Fq12 yq{z6, {z2, q.y, z2}};

    // line through T with slope lambda, evaluated at psi(Q):
    // yq - y_T - lambda*(xq - x_T)
    auto line_eval = [&](const Fp& xt, const Fp& yt, const Fp& lambda) {
        Fq12 acc = yq - xq * Fq12{{{lambda, zero}, z2, z2}, z6};
        Fp c = lambda * xt - yt;
        acc.c0.c0.a = acc.c0.c0.a + c;
        return acc;
    };

    Fq12 f = fq12_one();
    Fp tx = p.x, ty = p.y;
    bool t_inf = false;
    const U256 order = bn254_fr().modulus();
    uint32_t bits = u256::bit_length(order);
    Fp two = fq.from_u64(2), three = fq.from_u64(3);

    for (uint32_t i = bits - 1; i-- > 0;) {
        f = f.square();
        if (!t_inf) {
            // tangent at T
            Fp lambda = (three * tx * tx) * (two * ty).inverse();
            f = f * line_eval(tx, ty, lambda);
            Fp nx = lambda * lambda - two * tx;
            Fp ny = lambda * (tx - nx) - ty;
            tx = nx;
            ty = ny;
        }
        if (u256::bit(order, i)) {
            if (t_inf) {
                tx = p.x;
                ty = p.y;
                t_inf = false;
            } else if (tx == p.x) {
                if (ty == p.y) {
                    Fp lambda = (three * tx * tx) * (two * ty).inverse();
                    f = f * line_eval(tx, ty, lambda);
                    Fp nx = lambda * lambda - two * tx;
                    ty = lambda * (tx - nx) - ty;
                    tx = nx;
                } else {
                    // vertical chord: denominator-eliminated
                    t_inf = true;
                }
            } else {
                Fp lambda = (p.y - ty) * (p.x - tx).inverse();
                f = f * line_eval(tx, ty, lambda);
                Fp nx = lambda * lambda - tx - p.x;
                ty = lambda * (tx - nx) - ty;
                tx = nx;
            }
        }
    }
    return f;
}

Bn254Engine::GT Bn254Engine::pair(const G1& p, const G2& q) const {
    if (p.infinity || q.infinity) return gt_one();
    Fq12 f = miller_tate(p, q);
    return f.pow_bits(final_exp_);
}

Bn254Engine::GT Bn254Engine::gt_one() const {
    const PrimeField& fq = FQ();
    Fq2 z2{fq.zero(), fq.zero()};
    Fq6 z6{z2, z2, z2};
    return Fq12{{{fq.one(), fq.zero()}, z2, z2}, z6};
}

Bn254Engine::GT Bn254Engine::gt_pow(const GT& a, const Fp& e) const {
    U256 bits = e.canonical();
    return a.pow_bits(std::span<const uint64_t>(bits.data(), bits.size()));
}

// ---- serialization -----------------------------------------------------------
// Compressed points: little-endian x with two flag bits in the top byte
// (bit7 infinity, bit6 y parity). The base field is 254 bits so both are free.

namespace {

constexpr uint8_t kFlagInf = 0x80;
constexpr uint8_t kFlagOdd = 0x40;

bool parity(const Fp& y) { return y.canonical()[0] & 1; }

bool parity2(const Fq2& y) {
    return y.a.is_zero() ? (y.b.canonical()[0] & 1) : (y.a.canonical()[0] & 1);
}

}  // namespace

Bytes Bn254Engine::g1_to_bytes(const G1& p) const {
    Bytes out(32, 0);
    if (p.infinity) {
        out[31] = kFlagInf;
        return out;
    }
    Bytes xb = p.x.to_bytes();
    std::copy(xb.begin(), xb.end(), out.begin());
    if (parity(p.y)) out[31] |= kFlagOdd;
    return out;
}

Bn254Engine::G1 Bn254Engine::g1_from_bytes(std::span<const uint8_t> b) const {
    if (b.size() != 32) throw std::runtime_error("g1 bytes: wrong length");
    Bytes xb(b.begin(), b.end());
    uint8_t flags = xb[31] & 0xc0;
    xb[31] &= 0x3f;
    if (flags & kFlagInf) {
        for (uint8_t v : xb)
            if (v) throw std::runtime_error("g1 bytes: nonzero infinity encoding");
        return g1_zero();
    }
    Fp x = FQ().from_bytes(xb);
    auto y2 = x * x * x + b1_;
    auto y = y2.sqrt();
    if (!y) throw std::runtime_error("g1 bytes: x not on curve");
    Fp yy = *y;
    if (parity(yy) != bool(flags & kFlagOdd)) yy = -yy;
    return G1Affine{x, yy, false};
}

Bytes Bn254Engine::g2_to_bytes(const G2& p) const {
    Bytes out(64, 0);
    if (p.infinity) {
        out[63] = kFlagInf;
        return out;
    }
    Bytes xa = p.x.a.to_bytes();
    Bytes xb = p.x.b.to_bytes();
    std::copy(xa.begin(), xa.end(), out.begin());
    std::copy(xb.begin(), xb.end(), out.begin() + 32);
    if (parity2(p.y)) out[63] |= kFlagOdd;
    return out;
}

Bn254Engine::G2 Bn254Engine::g2_from_bytes(std::span<const uint8_t> b) const {
    if (b.size() != 64) throw std::runtime_error("g2 bytes: wrong length");
    Bytes buf(b.begin(), b.end());
    uint8_t flags = buf[63] & 0xc0;
    buf[63] &= 0x3f;
    if (flags & kFlagInf) {
        for (uint8_t v : buf)
            if (v) throw std::runtime_error("g2 bytes: nonzero infinity encoding");
        return g2_zero();
    }
    Fq2 x{FQ().from_bytes(std::span(buf).subspan(0, 32)),
          FQ().from_bytes(std::span(buf).subspan(32, 32))};
    auto y = (x * x * x + b2_).sqrt();
    if (!y) throw std::runtime_error("g2 bytes: x not on curve");
    Fq2 yy = *y;
    if (parity2(yy) != bool(flags & kFlagOdd)) yy = -yy;
    return G2Affine{x, yy, false};
}

Bytes Bn254Engine::gt_to_bytes(const GT& x) const {
    ByteWriter w;
    for (const Fq6* h : {&x.c0, &x.c1})
        for (const Fq2* q2 : {&h->c0, &h->c1, &h->c2}) {
            w.raw(q2->a.to_bytes());
            w.raw(q2->b.to_bytes());
        }
    return w.take();
}

Bn254Engine::GT Bn254Engine::gt_from_bytes(std::span<const uint8_t> b) const {
    if (b.size() != gt_size()) throw std::runtime_error("gt bytes: wrong length");
    ByteReader r(b.data(), b.size());
    auto rd = [&] { return FQ().from_bytes(r.raw(32)); };
    GT out;
    for (Fq6* h : {&out.c0, &out.c1})
        for (Fq2* q2 : {&h->c0, &h->c1, &h->c2}) {
            q2->a = rd();
            q2->b = rd();
        }
    return out;
}

}  // namespace unr
