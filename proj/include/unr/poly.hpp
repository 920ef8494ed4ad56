#pragma once

#include <vector>

#include "unr/fp.hpp"

namespace unr {

// Dense polynomial, coefficients low-to-high, no trailing zeros except for the
// zero polynomial (empty coefficient vector).
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(const PrimeField& f, std::vector<Fp> coeffs);

    static Polynomial zero(const PrimeField& f) { return Polynomial(f, {}); }
    static Polynomial constant(const Fp& c);

    bool is_zero() const { return coeffs_.empty(); }
    // degree of the zero polynomial reported as -1
    int64_t degree() const { return int64_t(coeffs_.size()) - 1; }
    const std::vector<Fp>& coeffs() const { return coeffs_; }
    const PrimeField& field() const { return *f_; }

    Fp eval(const Fp& x) const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;  // naive, oracle-grade
    // Euclidean division; returns (quotient, remainder).
    std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;
    bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

private:
    void trim();
    const PrimeField* f_ = nullptr;
    std::vector<Fp> coeffs_;
};

// Power-of-two multiplicative subgroup {w^0, ..., w^(m-1)}. Uses the radix-2
// transform when the field's two-adicity covers m and O(m^2) Lagrange
// otherwise (tiny domains over low-adicity fields such as F_9967).
class EvaluationDomain {
public:
    EvaluationDomain(const PrimeField& f, size_t size);

    size_t size() const { return m_; }
    const Fp& root() const { return omega_; }
    Fp element(size_t j) const;  // w^j
    const PrimeField& field() const { return *f_; }

    Polynomial interpolate(std::span<const Fp> evals) const;
    std::vector<Fp> evaluate(const Polynomial& p) const;
    // Evaluations over the coset shift*{w^j}.
    std::vector<Fp> evaluate_coset(const Polynomial& p, const Fp& shift) const;
    Polynomial interpolate_coset(std::span<const Fp> evals, const Fp& shift) const;
    // t(X) = X^m - 1 evaluated at x
    Fp vanishing_at(const Fp& x) const;

private:
    void ntt(std::vector<Fp>& a, bool inverse) const;

    const PrimeField* f_;
    size_t m_;
    uint32_t log2_m_;
    Fp omega_;
    Fp omega_inv_;
    Fp m_inv_;
};

}  // namespace unr
