#pragma once

#include <optional>
#include <span>
#include <string>

#include "unr/fields.hpp"
#include "unr/fp.hpp"
#include "unr/msm.hpp"

namespace unr {

// BN254 (alt_bn128) tower: Fq2 = Fq[u]/(u^2+1), Fq6 = Fq2[v]/(v^3 - (9+u)),
// Fq12 = Fq6[w]/(w^2 - v). Elements hold Fp over the bn254 base field.

struct Fq2 {
    Fp a, b;  // a + b*u

    Fq2 operator+(const Fq2& o) const { return {a + o.a, b + o.b}; }
    Fq2 operator-(const Fq2& o) const { return {a - o.a, b - o.b}; }
    Fq2 operator-() const { return {-a, -b}; }
    Fq2 operator*(const Fq2& o) const {
        // (a + bu)(c + du) = (ac - bd) + (ad + bc)u
        Fp ac = a * o.a, bd = b * o.b;
        return {ac - bd, (a + b) * (o.a + o.b) - ac - bd};
    }
    Fq2 square() const { return *this * *this; }
    Fq2 scale(const Fp& s) const { return {a * s, b * s}; }
    Fq2 conj() const { return {a, -b}; }
    Fq2 inverse() const {
        Fp norm_inv = (a * a + b * b).inverse();
        return {a * norm_inv, -b * norm_inv};
    }
    bool is_zero() const { return a.is_zero() && b.is_zero(); }
    bool operator==(const Fq2& o) const { return a == o.a && b == o.b; }
    std::optional<Fq2> sqrt() const;
};

struct Fq6 {
    Fq2 c0, c1, c2;  // c0 + c1*v + c2*v^2

    static Fq2 mul_xi(const Fq2& x);  // multiply by xi = 9 + u

    Fq6 operator+(const Fq6& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    Fq6 operator-(const Fq6& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    Fq6 operator-() const { return {-c0, -c1, -c2}; }
    Fq6 operator*(const Fq6& o) const;
    Fq6 mul_by_v() const { return {mul_xi(c2), c0, c1}; }
    Fq6 inverse() const;
    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    bool operator==(const Fq6& o) const { return c0 == o.c0 && c1 == o.c1 && c2 == o.c2; }
};

struct Fq12 {
    Fq6 c0, c1;  // c0 + c1*w

    Fq12 operator+(const Fq12& o) const { return {c0 + o.c0, c1 + o.c1}; }
    Fq12 operator-(const Fq12& o) const { return {c0 - o.c0, c1 - o.c1}; }
    Fq12 operator*(const Fq12& o) const {
        Fq6 t0 = c0 * o.c0, t1 = c1 * o.c1;
        return {t0 + t1.mul_by_v(), (c0 + c1) * (o.c0 + o.c1) - t0 - t1};
    }
    Fq12 square() const { return *this * *this; }
    Fq12 inverse() const {
        Fq6 denom = (c0 * c0 - (c1 * c1).mul_by_v()).inverse();
        return {c0 * denom, -(c1 * denom)};
    }
    Fq12 pow_bits(std::span<const uint64_t> limbs) const;
    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    bool operator==(const Fq12& o) const { return c0 == o.c0 && c1 == o.c1; }
};

struct G1Affine {
    Fp x, y;
    bool infinity = false;
    bool operator==(const G1Affine& o) const;
};

struct G2Affine {
    Fq2 x, y;
    bool infinity = false;
    bool operator==(const G2Affine& o) const;
};

// Real pairing backend. Group operations run in Jacobian coordinates behind
// the affine value types; the pairing is the reduced Tate pairing with
// denominator elimination (T stays over Fq, so Miller slopes cost one base
// field inversion each), followed by the full (q^12-1)/r exponentiation.
class Bn254Engine {
public:
    using G1 = G1Affine;
    using G2 = G2Affine;
    using GT = Fq12;

    Bn254Engine();
    static const Bn254Engine& instance();

    const PrimeField& scalar_field() const { return bn254_fr(); }
    const PrimeField& base_field() const { return bn254_fq(); }
    std::string id() const { return "bn254"; }

    G1 g1() const { return g1_gen_; }
    G2 g2() const { return g2_gen_; }
    G1 g1_zero() const;
    G2 g2_zero() const;

    G1 g1_add(const G1& a, const G1& b) const;
    G2 g2_add(const G2& a, const G2& b) const;
    G1 g1_neg(const G1& a) const;
    G2 g2_neg(const G2& a) const;
    G1 g1_mul(const G1& a, const Fp& s) const;
    G2 g2_mul(const G2& a, const Fp& s) const;
    bool g1_eq(const G1& a, const G1& b) const { return a == b; }
    bool g2_eq(const G2& a, const G2& b) const { return a == b; }
    G1 g1_msm(std::span<const G1> bases, std::span<const Fp> scalars) const;
    G2 g2_msm(std::span<const G2> bases, std::span<const Fp> scalars) const;

    bool g1_on_curve(const G1& p) const;
    bool g2_on_curve(const G2& p) const;

    GT pair(const G1& p, const G2& q) const;
    GT gt_one() const;
    GT gt_mul(const GT& a, const GT& b) const { return a * b; }
    bool gt_eq(const GT& a, const GT& b) const { return a == b; }
    GT gt_pow(const GT& a, const Fp& e) const;

    size_t g1_size() const { return 32; }
    size_t g2_size() const { return 64; }
    size_t gt_size() const { return 12 * 32; }
    Bytes g1_to_bytes(const G1& p) const;
    Bytes g2_to_bytes(const G2& p) const;
    Bytes gt_to_bytes(const GT& x) const;
    G1 g1_from_bytes(std::span<const uint8_t> b) const;
    G2 g2_from_bytes(std::span<const uint8_t> b) const;
    GT gt_from_bytes(std::span<const uint8_t> b) const;

    const Fq2& twist_b() const { return b2_; }

private:
    Fq12 miller_tate(const G1& p, const G2& q) const;

    G1Affine g1_gen_;
    G2Affine g2_gen_;
    Fp b1_;    // 3
    Fq2 b2_;   // 3 / (9 + u)
    std::vector<uint64_t> final_exp_;  // (q^12 - 1) / r
};

}  // namespace unr
