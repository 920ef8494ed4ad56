#include "unr/r1cs.hpp"

#include <algorithm>

namespace unr {

LinearCombination LinearCombination::wire(WireId w, const Fp& coeff) {
    LinearCombination lc;
    lc.add_term(w, coeff);
    return lc;
}

LinearCombination& LinearCombination::add_term(WireId w, const Fp& coeff) {
    if (coeff.is_zero()) return *this;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), w,
                               [](const auto& t, WireId id) { return t.first < id; });
    if (it != terms_.end() && it->first == w) {
        it->second = it->second + coeff;
        if (it->second.is_zero()) terms_.erase(it);
    } else {
        terms_.insert(it, {w, coeff});
    }
    return *this;
}

LinearCombination LinearCombination::operator+(const LinearCombination& o) const {
    LinearCombination out = *this;
    for (const auto& [w, c] : o.terms_) out.add_term(w, c);
    return out;
}

LinearCombination LinearCombination::operator-(const LinearCombination& o) const {
    LinearCombination out = *this;
    for (const auto& [w, c] : o.terms_) out.add_term(w, -c);
    return out;
}

LinearCombination LinearCombination::scaled(const Fp& c) const {
    LinearCombination out;
    if (c.is_zero()) return out;
    for (const auto& [w, coeff] : terms_) out.terms_.push_back({w, coeff * c});
    return out;
}

Fp LinearCombination::evaluate(std::span<const Fp> assignment) const {
    if (terms_.empty()) {
        // an empty LC over an unknown field cannot synthesize zero; callers
        // always evaluate against a non-empty assignment
        return assignment[0] - assignment[0];
    }
    Fp acc = assignment[0] - assignment[0];
    for (const auto& [w, c] : terms_) acc = acc + c * assignment[w];
    return acc;
}

void LinearCombination::remap(std::span<const WireId> perm) {
    for (auto& [w, c] : terms_) w = perm[w];
    std::sort(terms_.begin(), terms_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

WireId LinearCombination::max_wire() const {
    return terms_.empty() ? 0 : terms_.back().first;
}

uint32_t WitnessLayout::challenge_offset(uint32_t round) const {
    uint32_t off = 1 + num_public;
    for (uint32_t i = 0; i < round; ++i) off += challenge_sizes[i];
    return off;
}

uint32_t WitnessLayout::round_offset(uint32_t round) const {
    uint32_t off = 1 + num_public;
    for (uint32_t s : challenge_sizes) off += s;
    for (uint32_t i = 0; i < round; ++i) off += round_sizes[i];
    return off;
}

std::vector<WireId> WitnessLayout::ic_indices() const {
    std::vector<WireId> idx;
    uint32_t end = 1 + num_public;
    for (uint32_t s : challenge_sizes) end += s;
    idx.reserve(end);
    for (WireId i = 0; i < end; ++i) idx.push_back(i);
    return idx;
}

std::vector<WireId> WitnessLayout::round_indices(uint32_t round) const {
    std::vector<WireId> idx;
    uint32_t off = round_offset(round);
    for (uint32_t i = 0; i < round_sizes[round]; ++i) idx.push_back(off + i);
    return idx;
}

ConstraintSystem::ConstraintSystem(const PrimeField& f, std::vector<Constraint> constraints,
                                   WitnessLayout layout)
    : f_(&f), constraints_(std::move(constraints)), layout_(std::move(layout)) {
    if (constraints_.empty()) throw std::invalid_argument("constraint system is empty");
    uint32_t sum = 1 + layout_.num_public;
    for (uint32_t s : layout_.challenge_sizes) sum += s;
    for (uint32_t s : layout_.round_sizes) sum += s;
    if (sum != layout_.total) throw std::invalid_argument("layout blocks do not cover witness");
    for (const Constraint& c : constraints_)
        if (std::max({c.l.max_wire(), c.r.max_wire(), c.o.max_wire()}) >= layout_.total)
            throw std::invalid_argument("constraint references unallocated wire");
}

SatisfactionResult ConstraintSystem::is_satisfied(const Assignment& a) const {
    if (a.values.size() != layout_.total)
        throw std::invalid_argument("assignment length mismatch");
    if (!(a.values[0] == f_->one()))
        return {false, 0};
    for (size_t i = 0; i < constraints_.size(); ++i) {
        const Constraint& c = constraints_[i];
        Fp l = c.l.evaluate(a.values);
        Fp r = c.r.evaluate(a.values);
        Fp o = c.o.evaluate(a.values);
        if (!(l * r == o)) return {false, i};
    }
    return {true, 0};
}

ConstraintSystem::Matrices ConstraintSystem::matrices() const {
    Matrices m;
    m.l.reserve(constraints_.size());
    for (const Constraint& c : constraints_) {
        m.l.push_back(c.l.terms());
        m.r.push_back(c.r.terms());
        m.o.push_back(c.o.terms());
    }
    return m;
}

namespace {

void write_lc(ByteWriter& w, const LinearCombination& lc) {
    w.varint(lc.terms().size());
    for (const auto& [wire, coeff] : lc.terms()) {
        w.varint(wire);
        coeff.write_bytes(w);
    }
}

LinearCombination read_lc(ByteReader& r, const PrimeField& f) {
    LinearCombination lc;
    size_t n = r.varint();
    for (size_t i = 0; i < n; ++i) {
        WireId wire = WireId(r.varint());
        Bytes cb = r.raw(f.byte_size());
        lc.add_term(wire, f.from_bytes(cb));
    }
    return lc;
}

}  // namespace

void ConstraintSystem::serialize(ByteWriter& w) const {
    w.varint(constraints_.size());
    w.varint(layout_.total);
    w.varint(layout_.num_public);
    w.varint(layout_.challenge_sizes.size());
    for (uint32_t s : layout_.challenge_sizes) w.varint(s);
    w.varint(layout_.round_sizes.size());
    for (uint32_t s : layout_.round_sizes) w.varint(s);
    for (const Constraint& c : constraints_) {
        write_lc(w, c.l);
        write_lc(w, c.r);
        write_lc(w, c.o);
    }
}

ConstraintSystem ConstraintSystem::deserialize(ByteReader& r, const PrimeField& f) {
    size_t m = r.varint();
    WitnessLayout layout;
    layout.total = uint32_t(r.varint());
    layout.num_public = uint32_t(r.varint());
    layout.challenge_sizes.resize(r.varint());
    for (auto& s : layout.challenge_sizes) s = uint32_t(r.varint());
    layout.round_sizes.resize(r.varint());
    for (auto& s : layout.round_sizes) s = uint32_t(r.varint());
    std::vector<Constraint> cs;
    cs.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        Constraint c;
        c.l = read_lc(r, f);
        c.r = read_lc(r, f);
        c.o = read_lc(r, f);
        cs.push_back(std::move(c));
    }
    return ConstraintSystem(f, std::move(cs), std::move(layout));
}

ConstraintSystemBuilder::ConstraintSystemBuilder(const PrimeField& f, uint32_t num_challenge_rounds)
    : f_(&f), d_(num_challenge_rounds) {}

WireId ConstraintSystemBuilder::alloc_public() {
    if (finalized_) throw std::logic_error("allocation after finalize");
    wires_.push_back({Kind::pub, 0});
    return next_++;
}

WireId ConstraintSystemBuilder::alloc_challenge(uint32_t round) {
    if (finalized_) throw std::logic_error("allocation after finalize");
    if (round >= d_) throw std::out_of_range("challenge round out of range");
    wires_.push_back({Kind::challenge, round});
    return next_++;
}

WireId ConstraintSystemBuilder::alloc_private(uint32_t round) {
    if (finalized_) throw std::logic_error("allocation after finalize");
    if (round > d_) throw std::out_of_range("private round out of range");
    wires_.push_back({Kind::priv, round});
    return next_++;
}

void ConstraintSystemBuilder::enforce(LinearCombination l, LinearCombination r,
                                      LinearCombination o) {
    if (finalized_) throw std::logic_error("enforce after finalize");
    constraints_.push_back({std::move(l), std::move(r), std::move(o)});
}

ConstraintSystemBuilder::Finalized ConstraintSystemBuilder::finalize() {
    if (finalized_) throw std::logic_error("finalize called twice");
    finalized_ = true;

    WitnessLayout layout;
    layout.challenge_sizes.assign(d_, 0);
    layout.round_sizes.assign(d_ + 1, 0);
    for (const auto& [kind, round] : wires_) {
        switch (kind) {
            case Kind::constant: break;
            case Kind::pub: ++layout.num_public; break;
            case Kind::challenge: ++layout.challenge_sizes[round]; break;
            case Kind::priv: ++layout.round_sizes[round]; break;
        }
    }
    layout.total = next_;

    // stable permutation into [1 | x | a_0.. | w_0..]
    std::vector<WireId> perm(next_);
    uint32_t cursor_pub = layout.public_offset();
    std::vector<uint32_t> cursor_ch(d_), cursor_rd(d_ + 1);
    for (uint32_t i = 0; i < d_; ++i) cursor_ch[i] = layout.challenge_offset(i);
    for (uint32_t i = 0; i <= d_; ++i) cursor_rd[i] = layout.round_offset(i);
    for (WireId id = 0; id < next_; ++id) {
        const auto& [kind, round] = wires_[id];
        switch (kind) {
            case Kind::constant: perm[id] = 0; break;
            case Kind::pub: perm[id] = cursor_pub++; break;
            case Kind::challenge: perm[id] = cursor_ch[round]++; break;
            case Kind::priv: perm[id] = cursor_rd[round]++; break;
        }
    }
    for (Constraint& c : constraints_) {
        c.l.remap(perm);
        c.r.remap(perm);
        c.o.remap(perm);
    }
    return Finalized{ConstraintSystem(*f_, std::move(constraints_), std::move(layout)),
                     std::move(perm)};
}

}  // namespace unr
