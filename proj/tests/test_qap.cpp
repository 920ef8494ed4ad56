#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "unr/fields.hpp"
#include "unr/qap.hpp"
#include "unr/rng.hpp"

using namespace unr;

namespace {

struct Fixture {
    ConstraintSystem cs;
    Assignment good;
};

// cubic y = x1^3 + x2^2, combined 3-constraint form, padded to domain size 4
Fixture cubic_fixture(const PrimeField& f) {
    ConstraintSystemBuilder b(f, 0);
    WireId x1 = b.alloc_private(0), x2 = b.alloc_private(0);
    WireId t1 = b.alloc_private(0), t2 = b.alloc_private(0);
    WireId y = b.alloc_public();
    Fp one = f.one();
    b.enforce(LinearCombination::wire(x1, one), LinearCombination::wire(x1, one),
              LinearCombination::wire(t1, one));
    b.enforce(LinearCombination::wire(t1, one), LinearCombination::wire(x1, one),
              LinearCombination::wire(t2, one));
    b.enforce(LinearCombination::wire(x2, one), LinearCombination::wire(x2, one),
              LinearCombination::wire(y, one) - LinearCombination::wire(t2, one));
    auto fin = b.finalize();
    Assignment a{std::vector<Fp>(fin.cs.num_wires(), f.zero())};
    a.values[0] = f.one();
    a.values[fin.permutation[x1]] = f.from_u64(2);
    a.values[fin.permutation[x2]] = f.from_u64(3);
    a.values[fin.permutation[t1]] = f.from_u64(4);
    a.values[fin.permutation[t2]] = f.from_u64(8);
    a.values[fin.permutation[y]] = f.from_u64(17);
    return {std::move(fin.cs), std::move(a)};
}

}  // namespace

TEST_CASE("row evaluations reproduce Lz, Rz, Oz (sparse mat-vec oracle)") {
    const PrimeField& f = test_field();
    Fixture fx = cubic_fixture(f);
    QapInstance qap(fx.cs);
    CHECK(qap.padded_size() == 4);
    auto ev = qap.row_evals(fx.good);
    auto mats = fx.cs.matrices();
    for (size_t j = 0; j < fx.cs.num_constraints(); ++j) {
        Fp lz = f.zero(), rz = f.zero(), oz = f.zero();
        for (auto& [w, c] : mats.l[j]) lz = lz + c * fx.good.values[w];
        for (auto& [w, c] : mats.r[j]) rz = rz + c * fx.good.values[w];
        for (auto& [w, c] : mats.o[j]) oz = oz + c * fx.good.values[w];
        CHECK(ev.a[j] == lz);
        CHECK(ev.b[j] == rz);
        CHECK(ev.c[j] == oz);
    }
    // padded rows are zero
    CHECK(ev.a[3].is_zero());
    CHECK(ev.b[3].is_zero());
    CHECK(ev.c[3].is_zero());
}

TEST_CASE("column polynomials interpolate matrix columns") {
    const PrimeField& f = test_field();
    Fixture fx = cubic_fixture(f);
    QapInstance qap(fx.cs);
    SeededRng rng(5);
    // evaluating sum_i z_i l_i at w^j reproduces <l_j, z> for every row
    Fp tau = rng.sample(f);
    auto cols = qap.columns_at(tau);
    // cross-check with straight Lagrange over the domain per wire column
    const auto& dom = qap.domain();
    std::vector<Fp> xs;
    for (size_t j = 0; j < dom.size(); ++j) xs.push_back(dom.element(j));
    auto mats = fx.cs.matrices();
    for (uint32_t wire = 0; wire < fx.cs.num_wires(); ++wire) {
        std::vector<Fp> col(dom.size(), f.zero());
        for (size_t j = 0; j < mats.l.size(); ++j)
            for (auto& [w, c] : mats.l[j])
                if (w == wire) col[j] = c;
        Polynomial li = oracle::lagrange(f, xs, col);
        CHECK(li.eval(tau) == cols.l[wire]);
    }
    // t vanishes on the domain
    for (size_t j = 0; j < dom.size(); ++j) CHECK(dom.vanishing_at(dom.element(j)).is_zero());
    CHECK(cols.t == dom.vanishing_at(tau));
}

TEST_CASE("compute_h exact division matches the long-division oracle") {
    const PrimeField& f = test_field();
    Fixture fx = cubic_fixture(f);
    QapInstance qap(fx.cs);
    Polynomial h = qap.compute_h(fx.good);
    CHECK(h.degree() <= int64_t(qap.padded_size()) - 2);

    // oracle: interpolate A,B,C and divide by t with naive long division
    auto ev = qap.row_evals(fx.good);
    const auto& dom = qap.domain();
    Polynomial a = dom.interpolate(ev.a);
    Polynomial b = dom.interpolate(ev.b);
    Polynomial c = dom.interpolate(ev.c);
    std::vector<Fp> tc(qap.padded_size() + 1, f.zero());
    tc[0] = -f.one();
    tc[qap.padded_size()] = f.one();
    Polynomial t(f, tc);
    auto [q, rem] = (a * b - c).divmod(t);
    CHECK(rem.is_zero());
    CHECK(h == q);
}

TEST_CASE("compute_h equals long division up to domain size 16") {
    // squaring chains of varying length: m constraints pad to domains 2..16
    const PrimeField& f = test_field();
    SeededRng rng(69);
    for (uint32_t m : {2u, 5u, 9u, 13u, 16u}) {
        ConstraintSystemBuilder b(f, 0);
        std::vector<WireId> w(m + 1);
        w[0] = b.alloc_public();
        for (uint32_t i = 1; i <= m; ++i) w[i] = b.alloc_private(0);
        for (uint32_t i = 0; i < m; ++i)
            b.enforce(LinearCombination::wire(w[i], f.one()),
                      LinearCombination::wire(w[i], f.one()),
                      LinearCombination::wire(w[i + 1], f.one()));
        auto fin = b.finalize();
        Assignment a{std::vector<Fp>(fin.cs.num_wires(), f.zero())};
        a.values[0] = f.one();
        Fp v = rng.sample_nonzero(f);
        a.values[fin.permutation[w[0]]] = v;
        for (uint32_t i = 1; i <= m; ++i) {
            v = v * v;
            a.values[fin.permutation[w[i]]] = v;
        }
        QapInstance qap(fin.cs);
        Polynomial h = qap.compute_h(a);
        auto ev = qap.row_evals(a);
        const auto& dom = qap.domain();
        Polynomial pa = dom.interpolate(ev.a), pb = dom.interpolate(ev.b),
                   pc = dom.interpolate(ev.c);
        std::vector<Fp> tc(qap.padded_size() + 1, f.zero());
        tc[0] = -f.one();
        tc[qap.padded_size()] = f.one();
        auto [q, rem] = (pa * pb - pc).divmod(Polynomial(f, tc));
        CHECK(rem.is_zero());
        CHECK(h == q);
    }
}

TEST_CASE("corrupted assignment fails compute_h") {
    const PrimeField& f = test_field();
    Fixture fx = cubic_fixture(f);
    QapInstance qap(fx.cs);
    Assignment bad = fx.good;
    bad.values[1] = bad.values[1] + f.one();
    CHECK_THROWS_WITH_AS(qap.compute_h(bad), "compute_h: assignment does not satisfy the system",
                         std::runtime_error);
}

TEST_CASE("all-linear circuit bound to constants has h = 0") {
    const PrimeField& f = test_field();
    ConstraintSystemBuilder b(f, 0);
    WireId y = b.alloc_public();
    // y = 7, a purely linear binding: L=7, R=1, O=y
    b.enforce(LinearCombination::constant(f.from_u64(7)), LinearCombination::constant(f.one()),
              LinearCombination::wire(y, f.one()));
    auto fin = b.finalize();
    Assignment a{{f.one(), f.from_u64(7)}};
    QapInstance qap(fin.cs);
    // A*B - C = 7*1 - 7 = 0 everywhere
    CHECK(qap.compute_h(a).is_zero());
}

TEST_CASE("QAP identity at random points: A(tau)B(tau) - C(tau) = h(tau) t(tau)") {
    const PrimeField& f = test_field();
    SeededRng rng(99);
    Fixture fx = cubic_fixture(f);
    QapInstance qap(fx.cs);
    Polynomial h = qap.compute_h(fx.good);
    for (int i = 0; i < 100; ++i) {
        Fp tau = rng.sample(f);
        if (qap.domain().vanishing_at(tau).is_zero()) continue;
        auto cols = qap.columns_at(tau);
        Fp az = f.zero(), bz = f.zero(), cz = f.zero();
        for (uint32_t w = 0; w < fx.cs.num_wires(); ++w) {
            az = az + fx.good.values[w] * cols.l[w];
            bz = bz + fx.good.values[w] * cols.r[w];
            cz = cz + fx.good.values[w] * cols.o[w];
        }
        CHECK(az * bz - cz == h.eval(tau) * cols.t);
    }
}

TEST_CASE("low-adicity fallback path over F_9967") {
    // one multiplicative constraint, domain size 1; two constraints, size 2.
    // both run through the long-division path since 4 exceeds the 2-adicity.
    const PrimeField& f = f9967();
    ConstraintSystemBuilder b(f, 0);
    WireId x = b.alloc_private(0);
    WireId y = b.alloc_public();
    b.enforce(LinearCombination::wire(x, f.one()), LinearCombination::wire(x, f.one()),
              LinearCombination::wire(y, f.one()));
    auto fin = b.finalize();
    Assignment a{std::vector<Fp>(fin.cs.num_wires(), f.zero())};
    a.values[0] = f.one();
    a.values[fin.permutation[x]] = f.from_u64(9);
    a.values[fin.permutation[y]] = f.from_u64(81);
    QapInstance qap(fin.cs);
    CHECK_NOTHROW(qap.compute_h(a));
    a.values[fin.permutation[y]] = f.from_u64(80);
    CHECK_THROWS(qap.compute_h(a));
}

TEST_CASE("domain too large errors") {
    const PrimeField& f = f9967();  // two_adicity 1
    ConstraintSystemBuilder b(f, 0);
    WireId y = b.alloc_public();
    for (int i = 0; i < 3; ++i)
        b.enforce(LinearCombination::wire(y, f.one()), LinearCombination::constant(f.one()),
                  LinearCombination::wire(y, f.one()));
    auto fin = b.finalize();
    CHECK_THROWS(QapInstance(fin.cs));  // needs domain 4 > 2^1
}
