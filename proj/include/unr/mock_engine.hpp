#pragma once

#include <span>
#include <string>

#include "unr/fp.hpp"
#include "unr/msm.hpp"

namespace unr {

// Transparent bilinear engine: every group element is stored as its discrete
// log, and the pairing multiplies exponents in the scalar field. Protocol
// algebra over this engine is exact, which is what the mock-backend test
// suites rely on. Works over any PrimeField.
class MockEngine {
public:
    template <int TAG>
    struct Elt {
        Fp log;
        Elt add(const Elt& o) const { return {log + o.log}; }
        Elt dbl() const { return {log + log}; }
        Elt neg() const { return {-log}; }
        Elt group_zero() const { return {log - log}; }
        bool operator==(const Elt& o) const { return log == o.log; }
    };
    using G1 = Elt<1>;
    using G2 = Elt<2>;
    using GT = Elt<3>;

    explicit MockEngine(const PrimeField& fr) : fr_(&fr) {}

    const PrimeField& scalar_field() const { return *fr_; }
    std::string id() const { return "mock/" + fr_->name(); }

    G1 g1() const { return {fr_->one()}; }
    G2 g2() const { return {fr_->one()}; }
    G1 g1_zero() const { return {fr_->zero()}; }
    G2 g2_zero() const { return {fr_->zero()}; }

    G1 g1_add(const G1& a, const G1& b) const { return a.add(b); }
    G2 g2_add(const G2& a, const G2& b) const { return a.add(b); }
    G1 g1_neg(const G1& a) const { return a.neg(); }
    G2 g2_neg(const G2& a) const { return a.neg(); }
    G1 g1_mul(const G1& a, const Fp& s) const { return {a.log * s}; }
    G2 g2_mul(const G2& a, const Fp& s) const { return {a.log * s}; }
    bool g1_eq(const G1& a, const G1& b) const { return a == b; }
    bool g2_eq(const G2& a, const G2& b) const { return a == b; }

    G1 g1_msm(std::span<const G1> bases, std::span<const Fp> scalars) const {
        return msm(g1_zero(), bases, scalars);
    }
    G2 g2_msm(std::span<const G2> bases, std::span<const Fp> scalars) const {
        return msm(g2_zero(), bases, scalars);
    }

    GT pair(const G1& a, const G2& b) const { return {a.log * b.log}; }
    GT gt_one() const { return {fr_->zero()}; }
    GT gt_mul(const GT& a, const GT& b) const { return {a.log + b.log}; }
    bool gt_eq(const GT& a, const GT& b) const { return a == b; }

    size_t g1_size() const { return fr_->byte_size(); }
    size_t g2_size() const { return fr_->byte_size(); }
    size_t gt_size() const { return fr_->byte_size(); }
    Bytes g1_to_bytes(const G1& a) const { return a.log.to_bytes(); }
    Bytes g2_to_bytes(const G2& a) const { return a.log.to_bytes(); }
    Bytes gt_to_bytes(const GT& a) const { return a.log.to_bytes(); }
    G1 g1_from_bytes(std::span<const uint8_t> b) const { return {fr_->from_bytes(b)}; }
    G2 g2_from_bytes(std::span<const uint8_t> b) const { return {fr_->from_bytes(b)}; }
    GT gt_from_bytes(std::span<const uint8_t> b) const { return {fr_->from_bytes(b)}; }

private:
    const PrimeField* fr_;
};

}  // namespace unr
