#pragma once

// Independent reference implementations the test suites check against. These
// deliberately avoid the library's fast paths: plain integer extended GCD,
// O(m^2) Lagrange interpolation, schoolbook rational arithmetic.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "unr/fp.hpp"
#include "unr/poly.hpp"

namespace oracle {

// extended-GCD modular inverse over small moduli
inline uint64_t inverse_u64(uint64_t a, uint64_t p) {
    int64_t t = 0, new_t = 1;
    int64_t r = int64_t(p), new_r = int64_t(a % p);
    while (new_r != 0) {
        int64_t q = r / new_r;
        std::swap(t -= q * new_t, new_t);
        std::swap(r -= q * new_r, new_r);
    }
    if (r != 1) throw std::runtime_error("not invertible");
    return uint64_t(t < 0 ? t + int64_t(p) : t);
}

// naive Lagrange interpolation over arbitrary points
inline unr::Polynomial lagrange(const unr::PrimeField& f, const std::vector<unr::Fp>& xs,
                                const std::vector<unr::Fp>& ys) {
    unr::Polynomial acc = unr::Polynomial::zero(f);
    for (size_t i = 0; i < xs.size(); ++i) {
        unr::Polynomial num = unr::Polynomial::constant(f.one());
        unr::Fp den = f.one();
        for (size_t j = 0; j < xs.size(); ++j) {
            if (i == j) continue;
            num = num * unr::Polynomial(f, {-xs[j], f.one()});
            den = den * (xs[i] - xs[j]);
        }
        acc = acc + num * unr::Polynomial::constant(ys[i] * den.inverse());
    }
    return acc;
}

// exact rational with int128 components, for quantization error bounds;
// lcm-based alignment keeps intermediates inside int128
struct Rat {
    __int128 num = 0;
    __int128 den = 1;

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static Rat of(__int128 n, __int128 d) {
        Rat r{n, d};
        r.normalize();
        return r;
    }
    void normalize() {
        if (den < 0) {
            den = -den;
            num = -num;
        }
        __int128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    Rat operator-(const Rat& o) const {
        __int128 g = gcd128(den, o.den);
        return of(num * (o.den / g) - o.num * (den / g), (den / g) * o.den);
    }
    Rat operator+(const Rat& o) const {
        __int128 g = gcd128(den, o.den);
        return of(num * (o.den / g) + o.num * (den / g), (den / g) * o.den);
    }
    Rat operator*(const Rat& o) const {
        __int128 g1 = gcd128(num, o.den), g2 = gcd128(o.num, den);
        return of((num / g1) * (o.num / g2), (den / g2) * (o.den / g1));
    }
    Rat abs() const { return {num < 0 ? -num : num, den}; }
    bool operator<=(const Rat& o) const {
        __int128 g = gcd128(den, o.den);
        return num * (o.den / g) <= o.num * (den / g);
    }
    double to_double() const { return double(num) / double(den); }
};

// exact rational view of a double (doubles are dyadic rationals)
inline Rat rat_of_double(double x) {
    if (x == 0) return Rat{0, 1};
    int exp;
    double frac = std::frexp(x, &exp);
    __int128 mant = (__int128)std::llround(std::ldexp(frac, 53));
    int e = exp - 53;
    if (e >= 0) return Rat::of(mant << e, 1);
    return Rat::of(mant, (__int128)1 << (-e));
}

}  // namespace oracle
