#include "unr/qap.hpp"

namespace unr {

namespace {

size_t next_pow2(size_t n) {
    size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

// deterministic coset shift with shift^(2M) != 1
Fp coset_shift(const PrimeField& f, size_t two_m) {
    for (uint64_t c = 3;; ++c) {
        Fp s = f.from_u64(c);
        if (!(s.pow(uint64_t(two_m)) == f.one())) return s;
    }
}

}  // namespace

QapInstance::QapInstance(const ConstraintSystem& cs) : cs_(&cs) {
    size_t m = next_pow2(cs.num_constraints());
    if (size_t(1) << cs.field().two_adicity() < m)
        throw std::invalid_argument("QAP domain too large for field two-adicity");
    domain_ = std::make_unique<EvaluationDomain>(cs.field(), m);
}

QapInstance::RowEvals QapInstance::row_evals(const Assignment& z) const {
    const PrimeField& f = cs_->field();
    RowEvals ev{std::vector<Fp>(padded_size(), f.zero()), std::vector<Fp>(padded_size(), f.zero()),
                std::vector<Fp>(padded_size(), f.zero())};
    const auto& cons = cs_->constraints();
    for (size_t j = 0; j < cons.size(); ++j) {
        ev.a[j] = cons[j].l.evaluate(z.values);
        ev.b[j] = cons[j].r.evaluate(z.values);
        ev.c[j] = cons[j].o.evaluate(z.values);
    }
    return ev;
}

QapInstance::ColumnsAt QapInstance::columns_at(const Fp& tau) const {
    const PrimeField& f = cs_->field();
    size_t m = padded_size();
    Fp t_tau = domain_->vanishing_at(tau);
    if (t_tau.is_zero()) throw std::invalid_argument("tau lies in the evaluation domain");

    // Lagrange basis at tau: L_j(tau) = t(tau) * w^j / (M * (tau - w^j))
    std::vector<Fp> denom(m, f.zero());
    Fp wj = f.one();
    std::vector<Fp> omega_pows(m, f.zero());
    for (size_t j = 0; j < m; ++j) {
        omega_pows[j] = wj;
        denom[j] = tau - wj;
        wj = wj * domain_->root();
    }
    std::vector<Fp> denom_inv = batch_invert(denom);
    Fp m_inv = f.from_u64(uint64_t(m)).inverse();
    std::vector<Fp> lag(m, f.zero());
    for (size_t j = 0; j < m; ++j) lag[j] = t_tau * omega_pows[j] * denom_inv[j] * m_inv;

    uint32_t n = cs_->num_wires();
    ColumnsAt out{std::vector<Fp>(n, f.zero()), std::vector<Fp>(n, f.zero()),
                  std::vector<Fp>(n, f.zero()), t_tau};
    const auto& cons = cs_->constraints();
    for (size_t j = 0; j < cons.size(); ++j) {
        for (const auto& [w, c] : cons[j].l.terms()) out.l[w] = out.l[w] + c * lag[j];
        for (const auto& [w, c] : cons[j].r.terms()) out.r[w] = out.r[w] + c * lag[j];
        for (const auto& [w, c] : cons[j].o.terms()) out.o[w] = out.o[w] + c * lag[j];
    }
    return out;
}

Polynomial QapInstance::a_poly(const Assignment& z) const {
    return domain_->interpolate(row_evals(z).a);
}

Polynomial QapInstance::b_poly(const Assignment& z) const {
    return domain_->interpolate(row_evals(z).b);
}

Polynomial QapInstance::compute_h(const Assignment& z) const {
    const PrimeField& f = cs_->field();
    size_t m = padded_size();
    RowEvals ev = row_evals(z);
    Polynomial a = domain_->interpolate(ev.a);
    Polynomial b = domain_->interpolate(ev.b);
    Polynomial c = domain_->interpolate(ev.c);

    if ((size_t(1) << f.two_adicity()) >= 2 * m) {
        EvaluationDomain big(f, 2 * m);
        Fp shift = coset_shift(f, 2 * m);
        std::vector<Fp> a2 = big.evaluate_coset(a, shift);
        std::vector<Fp> b2 = big.evaluate_coset(b, shift);
        std::vector<Fp> c2 = big.evaluate_coset(c, shift);
        // t on the coset alternates between shift^M - 1 and -shift^M - 1
        Fp sm = shift.pow(uint64_t(m));
        Fp t_even = sm - f.one();
        Fp t_odd = -sm - f.one();
        Fp te_inv = t_even.inverse();
        Fp to_inv = t_odd.inverse();
        std::vector<Fp> h_ev(2 * m, f.zero());
        for (size_t i = 0; i < 2 * m; ++i)
            h_ev[i] = (a2[i] * b2[i] - c2[i]) * ((i & 1) ? to_inv : te_inv);
        Polynomial h = big.interpolate_coset(h_ev, shift);
        // degree > M-2 means t(X) did not divide A*B - C
        if (h.degree() > int64_t(m) - 2)
            throw std::runtime_error("compute_h: assignment does not satisfy the system");
        return h;
    }

    // tiny low-adicity systems: long division oracle path
    std::vector<Fp> t_coeffs(m + 1, f.zero());
    t_coeffs[0] = -f.one();
    t_coeffs[m] = f.one();
    Polynomial t(f, std::move(t_coeffs));
    auto [q, rem] = (a * b - c).divmod(t);
    if (!rem.is_zero())
        throw std::runtime_error("compute_h: assignment does not satisfy the system");
    return q;
}

}  // namespace unr
