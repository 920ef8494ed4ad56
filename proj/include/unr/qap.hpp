#pragma once

#include "unr/poly.hpp"
#include "unr/r1cs.hpp"

namespace unr {

// QAP view of a finalized R1CS: column polynomials are kept as evaluations
// over a power-of-two domain (padded rows are zero constraints) and
// interpolated lazily; t(X) = X^M - 1.
class QapInstance {
public:
    explicit QapInstance(const ConstraintSystem& cs);

    const ConstraintSystem& cs() const { return *cs_; }
    const EvaluationDomain& domain() const { return *domain_; }
    size_t padded_size() const { return domain_->size(); }

    // Row evaluations A[j] = <l_j, z>, B[j] = <r_j, z>, C[j] = <o_j, z>.
    struct RowEvals {
        std::vector<Fp> a, b, c;
    };
    RowEvals row_evals(const Assignment& z) const;

    // l_i(tau), r_i(tau), o_i(tau) for every wire i, plus t(tau). Requires
    // t(tau) != 0.
    struct ColumnsAt {
        std::vector<Fp> l, r, o;
        Fp t;
    };
    ColumnsAt columns_at(const Fp& tau) const;

    // h = (A*B - C)/t, degree <= M-2, computed by double-size coset division
    // when the field's two-adicity allows, polynomial long division otherwise
    // (tiny systems). Throws when the assignment does not satisfy the system.
    Polynomial compute_h(const Assignment& z) const;

    // coefficient forms of A(X), B(X) for a given assignment
    Polynomial a_poly(const Assignment& z) const;
    Polynomial b_poly(const Assignment& z) const;

private:
    const ConstraintSystem* cs_;
    std::unique_ptr<EvaluationDomain> domain_;
};

}  // namespace unr
