#pragma once

#include <functional>
#include <string>
#include <vector>

#include "unr/msm.hpp"
#include "unr/qap.hpp"
#include "unr/r1cs.hpp"
#include "unr/rng.hpp"
#include "unr/sha256.hpp"

namespace unr {

inline constexpr uint32_t kFormatVersion = 1;
inline constexpr const char* kFsDomainTag = "unr-fs-v1";

// H: F x G1 -> F. SHA-256 over (domain tag | version | type byte | accumulator
// bytes | element bytes), digest folded little-endian into the field.
Fp fs_accumulate(const PrimeField& f, std::string_view domain_tag, const Fp& acc,
                 std::span<const uint8_t> element_bytes);
// Challenge-wire filling H(acc | wire index). Hashing an index instead of the
// index-dependent group element g1^j: same transcript binding, no group op.
Fp fs_index(const PrimeField& f, std::string_view domain_tag, const Fp& acc, uint64_t index);
// Transcript start: verifying-key digest folded into the field.
Fp fs_init(const PrimeField& f, std::span<const uint8_t> vk_digest);

// Setup toxic waste. Held only by setup, tests and the simulator.
struct Trapdoor {
    Fp alpha, beta, gamma, tau;
    std::vector<Fp> delta;  // d+1
};

template <class E>
struct ProvingKey {
    Bytes circuit_digest;
    Bytes vk_digest;
    typename E::G1 alpha_g1, beta_g1;
    typename E::G2 beta_g2, gamma_g2;
    std::vector<typename E::G1> delta_g1;               // d+1
    std::vector<typename E::G2> delta_g2;               // d+1
    std::vector<typename E::G1> tau_g1;                 // M powers of tau
    std::vector<typename E::G2> tau_g2;                 // M powers of tau
    std::vector<typename E::G1> t_tau_g1;               // tau^i t(tau)/delta_d, i < M-1
    std::vector<typename E::G1> ic_gamma;               // zeta_i(tau)/gamma over IC indices
    std::vector<std::vector<typename E::G1>> round_zeta;  // zeta_j(tau)/delta_i per round
};

template <class E>
struct VerifyingKey {
    Bytes circuit_digest;
    std::string domain_tag = kFsDomainTag;
    WitnessLayout layout;
    typename E::G1 g1;
    typename E::G2 g2;
    typename E::G2 gamma_g2;
    std::vector<typename E::G2> delta_g2;  // d+1
    typename E::GT alpha_beta_gt;
    std::vector<typename E::G1> ic;  // over [1 | x | challenges]
};

template <class E>
struct Proof {
    typename E::G1 a;
    typename E::G2 b;
    std::vector<typename E::G1> c;  // d+1
};

template <class E>
struct SetupResult {
    ProvingKey<E> pk;
    VerifyingKey<E> vk;
    std::optional<Trapdoor> trapdoor;
};

template <class E>
struct ProveResult {
    Proof<E> proof;
    std::vector<Fp> public_inputs;  // statement x, constant excluded
    std::vector<Fp> challenges;     // flattened challenge wires
};

struct VerifyResult {
    bool accepted = false;
    std::string reason;  // "fiat-shamir" | "pairing" | parse errors
    uint32_t pairings = 0;
    uint32_t hashes = 0;
    explicit operator bool() const { return accepted; }
};

// Fills private wires of one round into the assignment. Round 0 also fills the
// public statement wires; challenge wires are written by the prover between
// rounds.
using RoundFiller = std::function<void(uint32_t round, std::vector<Fp>& assignment)>;

namespace detail {

template <class E>
Bytes vk_body(const E& eng, const VerifyingKey<E>& vk) {
    ByteWriter w;
    w.str(vk.domain_tag);
    w.varint(vk.circuit_digest.size());
    w.raw(vk.circuit_digest);
    w.varint(vk.layout.total);
    w.varint(vk.layout.num_public);
    w.varint(vk.layout.challenge_sizes.size());
    for (uint32_t s : vk.layout.challenge_sizes) w.varint(s);
    w.varint(vk.layout.round_sizes.size());
    for (uint32_t s : vk.layout.round_sizes) w.varint(s);
    w.raw(eng.g1_to_bytes(vk.g1));
    w.raw(eng.g2_to_bytes(vk.g2));
    w.raw(eng.g2_to_bytes(vk.gamma_g2));
    w.varint(vk.delta_g2.size());
    for (const auto& d : vk.delta_g2) w.raw(eng.g2_to_bytes(d));
    w.raw(eng.gt_to_bytes(vk.alpha_beta_gt));
    w.varint(vk.ic.size());
    for (const auto& p : vk.ic) w.raw(eng.g1_to_bytes(p));
    return w.take();
}

}  // namespace detail

template <class E>
Bytes vk_digest(const E& eng, const VerifyingKey<E>& vk) {
    auto d = Sha256::digest(detail::vk_body(eng, vk));
    return Bytes(d.begin(), d.end());
}

// Key generation per the multi-round construction; d = 0 degenerates to the
// classic three-pairing scheme. The trapdoor is returned only when
// keep_trapdoor is set, otherwise it never leaves this frame.
template <class E>
SetupResult<E> setup(const E& eng, const ConstraintSystem& cs, const Bytes& circuit_digest,
                     RandomSource& rng, bool keep_trapdoor = false) {
    const PrimeField& f = eng.scalar_field();
    QapInstance qap(cs);
    uint32_t d = cs.layout().rounds_d();
    size_t m = qap.padded_size();

    Trapdoor td;
    td.alpha = rng.sample_nonzero(f);
    td.beta = rng.sample_nonzero(f);
    td.gamma = rng.sample_nonzero(f);
    td.delta.reserve(d + 1);
    for (uint32_t i = 0; i <= d; ++i) td.delta.push_back(rng.sample_nonzero(f));
    do {
        td.tau = rng.sample_nonzero(f);
    } while (td.tau.pow(uint64_t(m)) == f.one());

    auto cols = qap.columns_at(td.tau);
    uint32_t n = cs.num_wires();
    std::vector<Fp> zeta(n, f.zero());
    for (uint32_t i = 0; i < n; ++i)
        zeta[i] = td.beta * cols.l[i] + td.alpha * cols.r[i] + cols.o[i];

    ProvingKey<E> pk;
    VerifyingKey<E> vk;
    pk.circuit_digest = circuit_digest;
    vk.circuit_digest = circuit_digest;
    vk.layout = cs.layout();

    pk.alpha_g1 = eng.g1_mul(eng.g1(), td.alpha);
    pk.beta_g1 = eng.g1_mul(eng.g1(), td.beta);
    pk.beta_g2 = eng.g2_mul(eng.g2(), td.beta);
    pk.gamma_g2 = eng.g2_mul(eng.g2(), td.gamma);
    for (uint32_t i = 0; i <= d; ++i) {
        pk.delta_g1.push_back(eng.g1_mul(eng.g1(), td.delta[i]));
        pk.delta_g2.push_back(eng.g2_mul(eng.g2(), td.delta[i]));
    }

    Fp tp = f.one();
    for (size_t i = 0; i < m; ++i) {
        pk.tau_g1.push_back(eng.g1_mul(eng.g1(), tp));
        pk.tau_g2.push_back(eng.g2_mul(eng.g2(), tp));
        tp = tp * td.tau;
    }
    Fp t_over_dd = cols.t * td.delta[d].inverse();
    tp = f.one();
    for (size_t i = 0; i + 1 < m; ++i) {
        pk.t_tau_g1.push_back(eng.g1_mul(eng.g1(), tp * t_over_dd));
        tp = tp * td.tau;
    }

    Fp gamma_inv = td.gamma.inverse();
    for (WireId i : cs.layout().ic_indices())
        pk.ic_gamma.push_back(eng.g1_mul(eng.g1(), zeta[i] * gamma_inv));
    for (uint32_t r = 0; r <= d; ++r) {
        std::vector<typename E::G1> block;
        Fp dinv = td.delta[r].inverse();
        for (WireId i : cs.layout().round_indices(r))
            block.push_back(eng.g1_mul(eng.g1(), zeta[i] * dinv));
        pk.round_zeta.push_back(std::move(block));
    }

    vk.g1 = eng.g1();
    vk.g2 = eng.g2();
    vk.gamma_g2 = pk.gamma_g2;
    vk.delta_g2 = pk.delta_g2;
    vk.alpha_beta_gt = eng.pair(pk.alpha_g1, pk.beta_g2);
    vk.ic = pk.ic_gamma;

    pk.vk_digest = vk_digest(eng, vk);

    SetupResult<E> out{std::move(pk), std::move(vk), std::nullopt};
    if (keep_trapdoor) out.trapdoor = std::move(td);
    return out;
}

// Multi-round proving: commit each lookup round, fold the commitment into the
// Fiat-Shamir accumulator, fill that round's challenge wires, then finish with
// the quotient polynomial and the final commitment carrying the cross terms.
template <class E>
ProveResult<E> prove(const E& eng, const ProvingKey<E>& pk, const ConstraintSystem& cs,
                     const RoundFiller& fill_round, RandomSource& rng) {
    const PrimeField& f = eng.scalar_field();
    const WitnessLayout& layout = cs.layout();
    uint32_t d = layout.rounds_d();

    std::vector<Fp> z(layout.total, f.zero());
    z[0] = f.one();

    Fp acc = fs_init(f, pk.vk_digest);
    std::vector<Fp> round_r;
    Proof<E> proof;
    proof.c.resize(d + 1, eng.g1_zero());

    fill_round(0, z);
    for (uint32_t i = 0; i < d; ++i) {
        Fp ri = rng.sample(f);
        round_r.push_back(ri);
        auto idx = layout.round_indices(i);
        std::vector<Fp> zr;
        zr.reserve(idx.size());
        for (WireId w : idx) zr.push_back(z[w]);
        typename E::G1 ci = eng.g1_msm(pk.round_zeta[i], zr);
        ci = eng.g1_add(ci, eng.g1_mul(pk.delta_g1[d], ri));
        proof.c[i] = ci;
        acc = fs_accumulate(f, kFsDomainTag, acc, eng.g1_to_bytes(ci));
        uint32_t off = layout.challenge_offset(i);
        for (uint32_t k = 0; k < layout.challenge_sizes[i]; ++k)
            z[off + k] = fs_index(f, kFsDomainTag, acc, off + k);
        fill_round(i + 1, z);
    }

    Assignment assignment{z};
    auto sat = cs.is_satisfied(assignment);
    if (!sat.satisfied)
        throw std::runtime_error("prove: witness does not satisfy constraint " +
                                 std::to_string(sat.first_failing));

    QapInstance qap(cs);
    Polynomial h = qap.compute_h(assignment);
    Polynomial a_poly = qap.a_poly(assignment);
    Polynomial b_poly = qap.b_poly(assignment);

    Fp r = rng.sample(f);
    Fp s = rng.sample(f);

    typename E::G1 pi_a = eng.g1_msm(std::span(pk.tau_g1.data(), a_poly.coeffs().size()),
                                     a_poly.coeffs());
    pi_a = eng.g1_add(pi_a, pk.alpha_g1);
    pi_a = eng.g1_add(pi_a, eng.g1_mul(pk.delta_g1[d], r));

    typename E::G2 pi_b = eng.g2_msm(std::span(pk.tau_g2.data(), b_poly.coeffs().size()),
                                     b_poly.coeffs());
    pi_b = eng.g2_add(pi_b, pk.beta_g2);
    pi_b = eng.g2_add(pi_b, eng.g2_mul(pk.delta_g2[d], s));

    typename E::G1 b_g1 = eng.g1_msm(std::span(pk.tau_g1.data(), b_poly.coeffs().size()),
                                     b_poly.coeffs());
    b_g1 = eng.g1_add(b_g1, pk.beta_g1);
    b_g1 = eng.g1_add(b_g1, eng.g1_mul(pk.delta_g1[d], s));

    auto idx = layout.round_indices(d);
    std::vector<Fp> zr;
    zr.reserve(idx.size());
    for (WireId w : idx) zr.push_back(z[w]);
    typename E::G1 cd = eng.g1_msm(pk.round_zeta[d], zr);
    if (!h.is_zero())
        cd = eng.g1_add(cd, eng.g1_msm(std::span(pk.t_tau_g1.data(), h.coeffs().size()),
                                       h.coeffs()));
    cd = eng.g1_add(cd, eng.g1_mul(pi_a, s));
    cd = eng.g1_add(cd, eng.g1_mul(b_g1, r));
    cd = eng.g1_add(cd, eng.g1_neg(eng.g1_mul(pk.delta_g1[d], r * s)));
    for (uint32_t i = 0; i < d; ++i)
        cd = eng.g1_add(cd, eng.g1_neg(eng.g1_mul(pk.delta_g1[i], round_r[i])));
    proof.c[d] = cd;
    proof.a = pi_a;
    proof.b = pi_b;

    ProveResult<E> out;
    out.proof = std::move(proof);
    for (uint32_t i = 0; i < layout.num_public; ++i)
        out.public_inputs.push_back(z[layout.public_offset() + i]);
    for (uint32_t i = 0; i < d; ++i) {
        uint32_t off = layout.challenge_offset(i);
        for (uint32_t k = 0; k < layout.challenge_sizes[i]; ++k)
            out.challenges.push_back(z[off + k]);
    }
    return out;
}

// Challenge recomputation from the commitment chain, then the (3+d)-pairing
// check with the alpha-beta term precomputed in the key. claimed_challenges,
// when supplied (the prover writes them into the public-io file), must match
// the recomputed ones.
template <class E>
VerifyResult verify(const E& eng, const VerifyingKey<E>& vk, std::span<const Fp> public_inputs,
                    const Proof<E>& proof,
                    std::span<const Fp> claimed_challenges = {}) {
    const PrimeField& f = eng.scalar_field();
    const WitnessLayout& layout = vk.layout;
    uint32_t d = layout.rounds_d();
    VerifyResult res;

    if (public_inputs.size() != layout.num_public) {
        res.reason = "public input length mismatch";
        return res;
    }
    if (proof.c.size() != d + 1) {
        res.reason = "proof shape mismatch";
        return res;
    }

    Bytes digest = vk_digest(eng, vk);
    Fp acc = fs_init(f, digest);
    std::vector<Fp> challenges;
    for (uint32_t i = 0; i < d; ++i) {
        acc = fs_accumulate(f, vk.domain_tag, acc, eng.g1_to_bytes(proof.c[i]));
        ++res.hashes;
        uint32_t off = layout.challenge_offset(i);
        for (uint32_t k = 0; k < layout.challenge_sizes[i]; ++k)
            challenges.push_back(fs_index(f, vk.domain_tag, acc, off + k));
    }
    if (!claimed_challenges.empty()) {
        if (claimed_challenges.size() != challenges.size()) {
            res.reason = "fiat-shamir";
            return res;
        }
        for (size_t i = 0; i < challenges.size(); ++i)
            if (!(challenges[i] == claimed_challenges[i])) {
                res.reason = "fiat-shamir";
                return res;
            }
    }

    std::vector<Fp> ic_values;
    ic_values.reserve(vk.ic.size());
    ic_values.push_back(f.one());
    for (const Fp& x : public_inputs) ic_values.push_back(x);
    for (const Fp& a : challenges) ic_values.push_back(a);
    if (ic_values.size() != vk.ic.size()) {
        res.reason = "public input length mismatch";
        return res;
    }
    typename E::G1 pi_ic = eng.g1_msm(vk.ic, ic_values);

    typename E::GT lhs = eng.pair(proof.a, proof.b);
    ++res.pairings;
    typename E::GT rhs = vk.alpha_beta_gt;
    rhs = eng.gt_mul(rhs, eng.pair(pi_ic, vk.gamma_g2));
    ++res.pairings;
    for (uint32_t i = 0; i <= d; ++i) {
        rhs = eng.gt_mul(rhs, eng.pair(proof.c[i], vk.delta_g2[i]));
        ++res.pairings;
    }
    if (!eng.gt_eq(lhs, rhs)) {
        res.reason = "pairing";
        return res;
    }
    res.accepted = true;
    return res;
}

// Trapdoor simulator: valid proofs for arbitrary statements with no witness.
// The c_d exponent is solved from the verification equation; the zeta sums
// come from the key's IC elements, so no circuit access is needed.
template <class E>
ProveResult<E> simulate(const E& eng, const VerifyingKey<E>& vk, const Trapdoor& td,
                        std::span<const Fp> public_inputs, RandomSource& rng) {
    const PrimeField& f = eng.scalar_field();
    const WitnessLayout& layout = vk.layout;
    uint32_t d = layout.rounds_d();

    Fp a_exp = rng.sample(f);
    Fp b_exp = rng.sample(f);
    Proof<E> proof;
    proof.a = eng.g1_mul(eng.g1(), a_exp);
    proof.b = eng.g2_mul(eng.g2(), b_exp);
    proof.c.resize(d + 1, eng.g1_zero());

    Bytes digest = vk_digest(eng, vk);
    Fp acc = fs_init(f, digest);
    std::vector<Fp> c_exp;
    std::vector<Fp> challenges;
    for (uint32_t i = 0; i < d; ++i) {
        c_exp.push_back(rng.sample(f));
        proof.c[i] = eng.g1_mul(eng.g1(), c_exp.back());
        acc = fs_accumulate(f, vk.domain_tag, acc, eng.g1_to_bytes(proof.c[i]));
        uint32_t off = layout.challenge_offset(i);
        for (uint32_t k = 0; k < layout.challenge_sizes[i]; ++k)
            challenges.push_back(fs_index(f, vk.domain_tag, acc, off + k));
    }

    std::vector<Fp> ic_values;
    ic_values.push_back(f.one());
    for (const Fp& x : public_inputs) ic_values.push_back(x);
    for (const Fp& a : challenges) ic_values.push_back(a);
    typename E::G1 pi_ic = eng.g1_msm(vk.ic, ic_values);

    Fp dd_inv = td.delta[d].inverse();
    typename E::G1 cd = eng.g1_mul(eng.g1(), (a_exp * b_exp - td.alpha * td.beta) * dd_inv);
    cd = eng.g1_add(cd, eng.g1_neg(eng.g1_mul(pi_ic, td.gamma * dd_inv)));
    for (uint32_t i = 0; i < d; ++i)
        cd = eng.g1_add(cd, eng.g1_neg(eng.g1_mul(proof.c[i], td.delta[i] * dd_inv)));
    proof.c[d] = cd;

    ProveResult<E> out;
    out.proof = std::move(proof);
    out.public_inputs.assign(public_inputs.begin(), public_inputs.end());
    out.challenges = std::move(challenges);
    return out;
}

// ---- key/proof files -------------------------------------------------------

template <class E>
Bytes serialize_vk(const E& eng, const VerifyingKey<E>& vk) {
    ByteWriter w;
    w.raw(reinterpret_cast<const uint8_t*>("UNVK"), 4);
    w.u32(kFormatVersion);
    w.str(eng.id());
    Bytes body = detail::vk_body(eng, vk);
    w.varint(body.size());
    w.raw(body);
    return w.take();
}

template <class E>
VerifyingKey<E> deserialize_vk(const E& eng, const Bytes& data) {
    ByteReader r(data);
    Bytes magic = r.raw(4);
    if (std::string(magic.begin(), magic.end()) != "UNVK")
        throw std::runtime_error("not a verifying key file");
    if (r.u32() != kFormatVersion) throw std::runtime_error("unsupported vk version");
    std::string id = r.str();
    if (id != eng.id()) throw std::runtime_error("vk engine mismatch: " + id);
    size_t body_len = r.varint();
    (void)body_len;
    VerifyingKey<E> vk;
    vk.domain_tag = r.str();
    vk.circuit_digest = r.raw(r.varint());
    vk.layout.total = uint32_t(r.varint());
    vk.layout.num_public = uint32_t(r.varint());
    vk.layout.challenge_sizes.resize(r.varint());
    for (auto& s : vk.layout.challenge_sizes) s = uint32_t(r.varint());
    vk.layout.round_sizes.resize(r.varint());
    for (auto& s : vk.layout.round_sizes) s = uint32_t(r.varint());
    vk.g1 = eng.g1_from_bytes(r.raw(eng.g1_size()));
    vk.g2 = eng.g2_from_bytes(r.raw(eng.g2_size()));
    vk.gamma_g2 = eng.g2_from_bytes(r.raw(eng.g2_size()));
    vk.delta_g2.resize(r.varint(), eng.g2_zero());
    for (auto& d : vk.delta_g2) d = eng.g2_from_bytes(r.raw(eng.g2_size()));
    vk.alpha_beta_gt = eng.gt_from_bytes(r.raw(eng.gt_size()));
    vk.ic.resize(r.varint(), eng.g1_zero());
    for (auto& p : vk.ic) p = eng.g1_from_bytes(r.raw(eng.g1_size()));
    return vk;
}

template <class E>
Bytes serialize_pk(const E& eng, const ProvingKey<E>& pk) {
    ByteWriter w;
    w.raw(reinterpret_cast<const uint8_t*>("UNPK"), 4);
    w.u32(kFormatVersion);
    w.str(eng.id());
    w.varint(pk.circuit_digest.size());
    w.raw(pk.circuit_digest);
    w.varint(pk.vk_digest.size());
    w.raw(pk.vk_digest);
    auto g1s = [&](const std::vector<typename E::G1>& v) {
        w.varint(v.size());
        for (const auto& p : v) w.raw(eng.g1_to_bytes(p));
    };
    auto g2s = [&](const std::vector<typename E::G2>& v) {
        w.varint(v.size());
        for (const auto& p : v) w.raw(eng.g2_to_bytes(p));
    };
    w.raw(eng.g1_to_bytes(pk.alpha_g1));
    w.raw(eng.g1_to_bytes(pk.beta_g1));
    w.raw(eng.g2_to_bytes(pk.beta_g2));
    w.raw(eng.g2_to_bytes(pk.gamma_g2));
    g1s(pk.delta_g1);
    g2s(pk.delta_g2);
    g1s(pk.tau_g1);
    g2s(pk.tau_g2);
    g1s(pk.t_tau_g1);
    g1s(pk.ic_gamma);
    w.varint(pk.round_zeta.size());
    for (const auto& blk : pk.round_zeta) g1s(blk);
    return w.take();
}

template <class E>
ProvingKey<E> deserialize_pk(const E& eng, const Bytes& data) {
    ByteReader r(data);
    Bytes magic = r.raw(4);
    if (std::string(magic.begin(), magic.end()) != "UNPK")
        throw std::runtime_error("not a proving key file");
    if (r.u32() != kFormatVersion) throw std::runtime_error("unsupported pk version");
    std::string id = r.str();
    if (id != eng.id()) throw std::runtime_error("pk engine mismatch: " + id);
    ProvingKey<E> pk;
    pk.circuit_digest = r.raw(r.varint());
    pk.vk_digest = r.raw(r.varint());
    auto g1s = [&](std::vector<typename E::G1>& v) {
        v.resize(r.varint(), eng.g1_zero());
        for (auto& p : v) p = eng.g1_from_bytes(r.raw(eng.g1_size()));
    };
    auto g2s = [&](std::vector<typename E::G2>& v) {
        v.resize(r.varint(), eng.g2_zero());
        for (auto& p : v) p = eng.g2_from_bytes(r.raw(eng.g2_size()));
    };
    pk.alpha_g1 = eng.g1_from_bytes(r.raw(eng.g1_size()));
    pk.beta_g1 = eng.g1_from_bytes(r.raw(eng.g1_size()));
    pk.beta_g2 = eng.g2_from_bytes(r.raw(eng.g2_size()));
    pk.gamma_g2 = eng.g2_from_bytes(r.raw(eng.g2_size()));
    g1s(pk.delta_g1);
    g2s(pk.delta_g2);
    g1s(pk.tau_g1);
    g2s(pk.tau_g2);
    g1s(pk.t_tau_g1);
    g1s(pk.ic_gamma);
    pk.round_zeta.resize(r.varint());
    for (auto& blk : pk.round_zeta) g1s(blk);
    return pk;
}

template <class E>
Bytes serialize_proof(const E& eng, const Proof<E>& proof, const Bytes& circuit_digest) {
    ByteWriter w;
    w.raw(reinterpret_cast<const uint8_t*>("UNPF"), 4);
    w.u32(kFormatVersion);
    w.str(eng.id());
    w.varint(circuit_digest.size());
    w.raw(circuit_digest);
    w.raw(eng.g1_to_bytes(proof.a));
    w.raw(eng.g2_to_bytes(proof.b));
    w.varint(proof.c.size());
    for (const auto& c : proof.c) w.raw(eng.g1_to_bytes(c));
    return w.take();
}

template <class E>
std::pair<Proof<E>, Bytes> deserialize_proof(const E& eng, const Bytes& data) {
    ByteReader r(data);
    Bytes magic = r.raw(4);
    if (std::string(magic.begin(), magic.end()) != "UNPF")
        throw std::runtime_error("not a proof file");
    if (r.u32() != kFormatVersion) throw std::runtime_error("unsupported proof version");
    std::string id = r.str();
    if (id != eng.id()) throw std::runtime_error("proof engine mismatch: " + id);
    Bytes digest = r.raw(r.varint());
    Proof<E> p;
    p.a = eng.g1_from_bytes(r.raw(eng.g1_size()));
    p.b = eng.g2_from_bytes(r.raw(eng.g2_size()));
    p.c.resize(r.varint(), eng.g1_zero());
    for (auto& c : p.c) c = eng.g1_from_bytes(r.raw(eng.g1_size()));
    return {std::move(p), std::move(digest)};
}

Bytes serialize_trapdoor(const Trapdoor& td);
Trapdoor deserialize_trapdoor(const PrimeField& f, const Bytes& data);

}  // namespace unr
