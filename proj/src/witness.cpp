#include "unr/witness.hpp"

#include "unr/gadgets.hpp"

namespace unr {

void WitnessProgram::remap(std::span<const WireId> perm) {
    for (Step& step : steps) {
        std::visit(
            [&](auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, StepInput>) {
                    s.out = perm[s.out];
                } else if constexpr (std::is_same_v<T, StepLc>) {
                    s.lc.remap(perm);
                    s.out = perm[s.out];
                } else if constexpr (std::is_same_v<T, StepMul>) {
                    s.a.remap(perm);
                    s.b.remap(perm);
                    s.offset.remap(perm);
                    s.out = perm[s.out];
                } else if constexpr (std::is_same_v<T, StepDecompose>) {
                    s.src.remap(perm);
                    for (WireId& w : s.wires) w = perm[w];
                } else if constexpr (std::is_same_v<T, StepMultiplicities>) {
                    for (auto& t : s.tags) t.remap(perm);
                    for (WireId& w : s.mu) w = perm[w];
                } else if constexpr (std::is_same_v<T, StepRoundBarrier>) {
                    (void)s;
                } else if constexpr (std::is_same_v<T, StepLookupInverses>) {
                    s.challenge = perm[s.challenge];
                    for (auto& t : s.tags) t.remap(perm);
                    for (WireId& w : s.mu) w = perm[w];
                    for (WireId& w : s.u) w = perm[w];
                    for (WireId& w : s.v) w = perm[w];
                }
            },
            step);
    }
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
        lc.add_term(wire, f.from_bytes(r.raw(f.byte_size())));
    }
    return lc;
}

}  // namespace

void WitnessProgram::serialize(ByteWriter& w, const PrimeField& f) const {
    (void)f;
    w.varint(steps.size());
    for (const Step& step : steps) {
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, StepInput>) {
                    w.u8(0);
                    w.varint(s.input_index);
                    w.varint(s.out);
                    w.varint(s.rho);
                } else if constexpr (std::is_same_v<T, StepLc>) {
                    w.u8(1);
                    write_lc(w, s.lc);
                    w.varint(s.out);
                } else if constexpr (std::is_same_v<T, StepMul>) {
                    w.u8(2);
                    write_lc(w, s.a);
                    write_lc(w, s.b);
                    write_lc(w, s.offset);
                    w.varint(s.out);
                } else if constexpr (std::is_same_v<T, StepDecompose>) {
                    w.u8(3);
                    write_lc(w, s.src);
                    w.varint(s.width);
                    w.varint(s.wires.size());
                    for (size_t i = 0; i < s.wires.size(); ++i) {
                        w.varint(s.wires[i]);
                        w.varint(s.offsets[i]);
                        w.varint(s.widths[i]);
                    }
                    w.str(s.site);
                } else if constexpr (std::is_same_v<T, StepMultiplicities>) {
                    w.u8(4);
                    w.varint(s.chunk_width);
                    w.varint(s.tags.size());
                    for (size_t i = 0; i < s.tags.size(); ++i) {
                        write_lc(w, s.tags[i]);
                        w.str(s.sites[i]);
                    }
                    w.varint(s.mu.size());
                    for (WireId m : s.mu) w.varint(m);
                } else if constexpr (std::is_same_v<T, StepRoundBarrier>) {
                    w.u8(5);
                    w.varint(s.next_round);
                } else if constexpr (std::is_same_v<T, StepLookupInverses>) {
                    w.u8(6);
                    w.varint(s.challenge);
                    w.varint(s.chunk_width);
                    w.varint(s.tags.size());
                    for (const auto& t : s.tags) write_lc(w, t);
                    w.varint(s.mu.size());
                    for (WireId m : s.mu) w.varint(m);
                    w.varint(s.u.size());
                    for (WireId m : s.u) w.varint(m);
                    w.varint(s.v.size());
                    for (WireId m : s.v) w.varint(m);
                }
            },
            step);
    }
}

WitnessProgram WitnessProgram::deserialize(ByteReader& r, const PrimeField& f) {
    WitnessProgram prog;
    size_t n = r.varint();
    prog.steps.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        uint8_t tag = r.u8();
        switch (tag) {
            case 0: {
                StepInput s;
                s.input_index = uint32_t(r.varint());
                s.out = WireId(r.varint());
                s.rho = uint32_t(r.varint());
                prog.steps.push_back(s);
                break;
            }
            case 1: {
                StepLc s;
                s.lc = read_lc(r, f);
                s.out = WireId(r.varint());
                prog.steps.push_back(std::move(s));
                break;
            }
            case 2: {
                StepMul s;
                s.a = read_lc(r, f);
                s.b = read_lc(r, f);
                s.offset = read_lc(r, f);
                s.out = WireId(r.varint());
                prog.steps.push_back(std::move(s));
                break;
            }
            case 3: {
                StepDecompose s;
                s.src = read_lc(r, f);
                s.width = uint32_t(r.varint());
                size_t k = r.varint();
                for (size_t j = 0; j < k; ++j) {
                    s.wires.push_back(WireId(r.varint()));
                    s.offsets.push_back(uint32_t(r.varint()));
                    s.widths.push_back(uint32_t(r.varint()));
                }
                s.site = r.str();
                prog.steps.push_back(std::move(s));
                break;
            }
            case 4: {
                StepMultiplicities s;
                s.chunk_width = uint32_t(r.varint());
                size_t k = r.varint();
                for (size_t j = 0; j < k; ++j) {
                    s.tags.push_back(read_lc(r, f));
                    s.sites.push_back(r.str());
                }
                size_t km = r.varint();
                for (size_t j = 0; j < km; ++j) s.mu.push_back(WireId(r.varint()));
                prog.steps.push_back(std::move(s));
                break;
            }
            case 5: {
                StepRoundBarrier s;
                s.next_round = uint32_t(r.varint());
                prog.steps.push_back(s);
                break;
            }
            case 6: {
                StepLookupInverses s;
                s.challenge = WireId(r.varint());
                s.chunk_width = uint32_t(r.varint());
                size_t k = r.varint();
                for (size_t j = 0; j < k; ++j) s.tags.push_back(read_lc(r, f));
                size_t km = r.varint();
                for (size_t j = 0; j < km; ++j) s.mu.push_back(WireId(r.varint()));
                size_t ku = r.varint();
                for (size_t j = 0; j < ku; ++j) s.u.push_back(WireId(r.varint()));
                size_t kv = r.varint();
                for (size_t j = 0; j < kv; ++j) s.v.push_back(WireId(r.varint()));
                prog.steps.push_back(std::move(s));
                break;
            }
            default:
                throw std::runtime_error("witness program: unknown step tag");
        }
    }
    return prog;
}

size_t run_witness_phase(const WitnessProgram& prog, size_t start, const PrimeField& f,
                         std::span<const double> inputs, std::vector<Fp>& assignment) {
    for (size_t i = start; i < prog.steps.size(); ++i) {
        bool barrier = false;
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, WitnessProgram::StepInput>) {
                    if (s.input_index >= inputs.size())
                        throw std::runtime_error("witness: input index out of range");
                    assignment[s.out] = quantize_at(f, inputs[s.input_index], s.rho).value;
                } else if constexpr (std::is_same_v<T, WitnessProgram::StepLc>) {
                    assignment[s.out] = s.lc.evaluate(assignment);
                } else if constexpr (std::is_same_v<T, WitnessProgram::StepMul>) {
                    assignment[s.out] = s.a.evaluate(assignment) * s.b.evaluate(assignment) +
                                        s.offset.evaluate(assignment);
                } else if constexpr (std::is_same_v<T, WitnessProgram::StepDecompose>) {
                    Fp val = s.src.evaluate(assignment);
                    SignedValue sv = signed_decode(val);
                    if (u256::bit_length(sv.magnitude) >= s.width)
                        throw std::runtime_error("witness: value out of decomposition range at " +
                                                 s.site);
                    Fp shifted = val + pow2(f, s.width - 1);
                    U256 bits = shifted.canonical();
                    for (size_t j = 0; j < s.wires.size(); ++j) {
                        uint64_t piece = 0;
                        for (uint32_t b = 0; b < s.widths[j]; ++b)
                            if (u256::bit(bits, s.offsets[j] + b)) piece |= uint64_t(1) << b;
                        assignment[s.wires[j]] = f.from_u64(piece);
                    }
                } else if constexpr (std::is_same_v<T, WitnessProgram::StepMultiplicities>) {
                    std::vector<uint64_t> counts(size_t(1) << s.chunk_width, 0);
                    for (size_t j = 0; j < s.tags.size(); ++j) {
                        Fp val = s.tags[j].evaluate(assignment);
                        U256 c = val.canonical();
                        if (c[1] || c[2] || c[3] || c[0] >= counts.size())
                            throw std::runtime_error("witness: chunk outside lookup table at " +
                                                     s.sites[j]);
                        counts[size_t(c[0])]++;
                    }
                    for (size_t j = 0; j < s.mu.size(); ++j)
                        assignment[s.mu[j]] = f.from_u64(counts[j]);
                } else if constexpr (std::is_same_v<T, WitnessProgram::StepRoundBarrier>) {
                    barrier = true;
                } else if constexpr (std::is_same_v<T, WitnessProgram::StepLookupInverses>) {
                    Fp alpha = assignment[s.challenge];
                    std::vector<Fp> denoms;
                    denoms.reserve(s.tags.size() + s.v.size());
                    for (const auto& t : s.tags) denoms.push_back(alpha + t.evaluate(assignment));
                    for (size_t j = 0; j < s.v.size(); ++j)
                        denoms.push_back(alpha + f.from_u64(j));
                    std::vector<Fp> invs = batch_invert(denoms);
                    for (size_t j = 0; j < s.u.size(); ++j) assignment[s.u[j]] = invs[j];
                    for (size_t j = 0; j < s.v.size(); ++j)
                        assignment[s.v[j]] = assignment[s.mu[j]] * invs[s.tags.size() + j];
                }
            },
            prog.steps[i]);
        if (barrier) return i + 1;
    }
    return prog.steps.size();
}

}  // namespace unr
