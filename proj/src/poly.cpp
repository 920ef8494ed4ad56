#include "unr/poly.hpp"

#include <algorithm>

namespace unr {

Polynomial::Polynomial(const PrimeField& f, std::vector<Fp> coeffs)
    : f_(&f), coeffs_(std::move(coeffs)) {
    trim();
}

Polynomial Polynomial::constant(const Fp& c) {
    if (c.is_zero()) return Polynomial(c.field(), {});
    return Polynomial(c.field(), {c});
}

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Fp Polynomial::eval(const Fp& x) const {
    Fp acc = f_->zero();
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Fp> c(std::max(coeffs_.size(), o.coeffs_.size()), f_->zero());
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] = c[i] + coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) c[i] = c[i] + o.coeffs_[i];
    return Polynomial(*f_, std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    std::vector<Fp> c(std::max(coeffs_.size(), o.coeffs_.size()), f_->zero());
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] = c[i] + coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) c[i] = c[i] - o.coeffs_[i];
    return Polynomial(*f_, std::move(c));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return Polynomial(*f_, {});
    std::vector<Fp> c(coeffs_.size() + o.coeffs_.size() - 1, f_->zero());
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] = c[i + j] + coeffs_[i] * o.coeffs_[j];
    return Polynomial(*f_, std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
    if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
    if (degree() < divisor.degree()) return {Polynomial(*f_, {}), *this};
    std::vector<Fp> rem = coeffs_;
    std::vector<Fp> quot(size_t(degree() - divisor.degree() + 1), f_->zero());
    Fp lead_inv = divisor.coeffs_.back().inverse();
    for (size_t i = quot.size(); i-- > 0;) {
        Fp q = rem[i + divisor.coeffs_.size() - 1] * lead_inv;
        quot[i] = q;
        for (size_t j = 0; j < divisor.coeffs_.size(); ++j)
            rem[i + j] = rem[i + j] - q * divisor.coeffs_[j];
    }
    return {Polynomial(*f_, std::move(quot)), Polynomial(*f_, std::move(rem))};
}

EvaluationDomain::EvaluationDomain(const PrimeField& f, size_t size) : f_(&f), m_(size) {
    if (size == 0 || (size & (size - 1)) != 0)
        throw std::invalid_argument("domain size must be a power of two");
    log2_m_ = 0;
    while ((size_t(1) << log2_m_) < size) ++log2_m_;
    if (log2_m_ > f.two_adicity())
        throw std::invalid_argument("field two-adicity is insufficient for domain of size " +
                                    std::to_string(size));
    omega_ = f.root_of_unity(log2_m_);
    omega_inv_ = omega_.inverse();
    m_inv_ = f.from_u64(uint64_t(m_)).inverse();
}

Fp EvaluationDomain::element(size_t j) const { return omega_.pow(uint64_t(j % m_)); }

Fp EvaluationDomain::vanishing_at(const Fp& x) const {
    return x.pow(uint64_t(m_)) - f_->one();
}

void EvaluationDomain::ntt(std::vector<Fp>& a, bool inverse) const {
    size_t n = a.size();
    // bit-reversal permutation
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    Fp root = inverse ? omega_inv_ : omega_;
    for (size_t len = 2; len <= n; len <<= 1) {
        Fp wlen = root;
        for (size_t k = len; k < n; k <<= 1) wlen = wlen.square();
        for (size_t i = 0; i < n; i += len) {
            Fp w = f_->one();
            for (size_t j = 0; j < len / 2; ++j) {
                Fp u = a[i + j];
                Fp v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w = w * wlen;
            }
        }
    }
    if (inverse)
        for (Fp& x : a) x = x * m_inv_;
}

Polynomial EvaluationDomain::interpolate(std::span<const Fp> evals) const {
    if (evals.size() != m_) throw std::invalid_argument("evals length != domain size");
    std::vector<Fp> a(evals.begin(), evals.end());
    ntt(a, true);
    return Polynomial(*f_, std::move(a));
}

std::vector<Fp> EvaluationDomain::evaluate(const Polynomial& p) const {
    if (size_t(p.degree() + 1) > m_) throw std::invalid_argument("degree exceeds domain");
    std::vector<Fp> a = p.coeffs();
    a.resize(m_, f_->zero());
    ntt(a, false);
    return a;
}

std::vector<Fp> EvaluationDomain::evaluate_coset(const Polynomial& p, const Fp& shift) const {
    if (size_t(p.degree() + 1) > m_) throw std::invalid_argument("degree exceeds domain");
    std::vector<Fp> a = p.coeffs();
    a.resize(m_, f_->zero());
    Fp s = f_->one();
    for (size_t i = 0; i < m_; ++i) {
        a[i] = a[i] * s;
        s = s * shift;
    }
    ntt(a, false);
    return a;
}

Polynomial EvaluationDomain::interpolate_coset(std::span<const Fp> evals, const Fp& shift) const {
    if (evals.size() != m_) throw std::invalid_argument("evals length != domain size");
    std::vector<Fp> a(evals.begin(), evals.end());
    ntt(a, true);
    Fp sinv = shift.inverse();
    Fp s = f_->one();
    for (size_t i = 0; i < m_; ++i) {
        a[i] = a[i] * s;
        s = s * sinv;
    }
    return Polynomial(*f_, std::move(a));
}

}  // namespace unr
