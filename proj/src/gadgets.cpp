#include "unr/gadgets.hpp"

#include <algorithm>

namespace unr {

Fp pow2(const PrimeField& f, uint32_t k) {
    if (k >= f.bit_size()) throw std::invalid_argument("pow2: exponent exceeds field size");
    U256 v{};
    v[k / 64] = uint64_t(1) << (k % 64);
    return f.from_canonical(v);
}

DecompositionSpec DecompositionSpec::binary(uint32_t B, uint32_t cut) {
    if (B < 2) throw std::invalid_argument("decomposition width must be at least 2");
    if (cut >= B) throw std::invalid_argument("cut exceeds decomposition width");
    DecompositionSpec s;
    s.total_width = B;
    s.mode = GadgetMode::binary;
    s.cut_bits = cut;
    return s;
}

DecompositionSpec DecompositionSpec::chunked(uint32_t B, uint32_t w, uint32_t cut,
                                             std::vector<uint32_t> extra_boundaries) {
    if (B < 2) throw std::invalid_argument("decomposition width must be at least 2");
    if (w < 2 || w > 24) throw std::invalid_argument("chunk width outside [2, 24]");
    if (cut >= B) throw std::invalid_argument("cut exceeds decomposition width");
    DecompositionSpec s;
    s.total_width = B;
    s.mode = GadgetMode::chunked;
    s.chunk_width = w;
    s.cut_bits = cut;
    s.boundaries = std::move(extra_boundaries);
    if (cut > 0) s.boundaries.push_back(cut);
    std::sort(s.boundaries.begin(), s.boundaries.end());
    s.boundaries.erase(std::unique(s.boundaries.begin(), s.boundaries.end()), s.boundaries.end());
    for (uint32_t b : s.boundaries)
        if (b == 0 || b >= B - 1)
            throw std::invalid_argument("split boundary outside (0, B-1)");
    return s;
}

std::vector<std::pair<uint32_t, uint32_t>> DecompositionSpec::pieces() const {
    std::vector<std::pair<uint32_t, uint32_t>> out;
    if (mode == GadgetMode::binary) {
        for (uint32_t i = 0; i + 1 < total_width; ++i) out.push_back({i, 1});
        return out;
    }
    // segments between forced boundaries, each tiled by w-wide chunks with one
    // remainder chunk
    std::vector<uint32_t> edges{0};
    for (uint32_t b : boundaries) edges.push_back(b);
    edges.push_back(total_width - 1);
    for (size_t s = 0; s + 1 < edges.size(); ++s) {
        uint32_t lo = edges[s], hi = edges[s + 1];
        uint32_t off = lo;
        while (off < hi) {
            uint32_t width = std::min(chunk_width, hi - off);
            out.push_back({off, width});
            off += width;
        }
    }
    return out;
}

LookupRegistry::LookupRegistry(uint32_t w) : chunk_width(w) {
    if (w < 2 || w > 24) throw std::invalid_argument("lookup chunk width outside [2, 24]");
}

void LookupRegistry::tag(const PrimeField& f, const LinearCombination& chunk, uint32_t width,
                         const std::string& site) {
    if (width > chunk_width) throw std::invalid_argument("chunk wider than the lookup table");
    if (finalized) throw std::logic_error("lookup already finalized");
    // a narrow chunk is ranged through its scaled image: 2^(w-width) * chunk
    // lies in [0, 2^w) iff chunk lies in [0, 2^width)
    LinearCombination scaled =
        width == chunk_width ? chunk : chunk.scaled(pow2(f, chunk_width - width));
    tags.push_back(std::move(scaled));
    sites.push_back(site);
}

LinearCombination SignedDecomposition::nonneg_shifted(const PrimeField& f, uint32_t cut) const {
    LinearCombination acc;
    for (size_t i = 0; i < piece_lcs.size(); ++i) {
        auto [off, width] = piece_pos[i];
        (void)width;
        if (off < cut) continue;
        acc = acc + piece_lcs[i].scaled(pow2(f, off - cut));
    }
    return acc;
}

LinearCombination SignedDecomposition::signed_shifted(const PrimeField& f, uint32_t cut) const {
    LinearCombination acc = nonneg_shifted(f, cut);
    Fp top = pow2(f, total_width - 1 - cut);
    acc = acc + top_bit.scaled(top);
    acc.add_term(0, -top);
    return acc;
}

SignedDecomposition emit_signed_decomposition(GadgetCtx& ctx, const LinearCombination& src,
                                              const DecompositionSpec& spec,
                                              const std::string& site) {
    const PrimeField& f = ctx.builder.field();
    uint32_t B = spec.total_width;
    auto pieces = spec.pieces();
    for (uint32_t b : spec.boundaries)
        for (auto [off, width] : pieces)
            if (off < b && b < off + width)
                throw std::logic_error("piece straddles a forced boundary");

    SignedDecomposition out;
    out.total_width = B;
    out.piece_pos = pieces;

    WitnessProgram::StepDecompose step;
    step.src = src;
    step.width = B;
    step.site = site;

    Fp one = f.one();
    LinearCombination one_lc = LinearCombination::constant(one);

    if (spec.mode == GadgetMode::binary) {
        // B-1 boolean-constrained bit wires; the top bit is the linear
        // combination forced boolean, which also binds the decomposition
        LinearCombination bits_sum;
        for (auto [off, width] : pieces) {
            (void)width;
            WireId wbit = ctx.builder.alloc_private(0);
            LinearCombination bl = LinearCombination::wire(wbit, one);
            ctx.builder.enforce(bl, bl - one_lc, LinearCombination());
            out.piece_lcs.push_back(bl);
            bits_sum = bits_sum + bl.scaled(pow2(f, off));
            step.wires.push_back(wbit);
            step.offsets.push_back(off);
            step.widths.push_back(1);
        }
        Fp top = pow2(f, B - 1);
        LinearCombination t = (src - bits_sum + LinearCombination::constant(top))
                                  .scaled(top.inverse());
        ctx.builder.enforce(t, t - one_lc, LinearCombination());
        out.top_bit = t;
    } else {
        if (!ctx.lookup) throw std::logic_error("chunked decomposition without lookup registry");
        // top bit is a wire with one boolean constraint; the highest chunk is
        // the derived linear combination, range-tagged like the others
        WireId t_wire = ctx.builder.alloc_private(0);
        LinearCombination t = LinearCombination::wire(t_wire, one);
        ctx.builder.enforce(t, t - one_lc, LinearCombination());
        out.top_bit = t;
        step.wires.push_back(t_wire);
        step.offsets.push_back(B - 1);
        step.widths.push_back(1);

        LinearCombination partial;  // sum of allocated pieces scaled
        for (size_t i = 0; i + 1 < pieces.size(); ++i) {
            auto [off, width] = pieces[i];
            WireId wc = ctx.builder.alloc_private(0);
            LinearCombination cl = LinearCombination::wire(wc, one);
            ctx.lookup->tag(f, cl, width, site);
            out.piece_lcs.push_back(cl);
            partial = partial + cl.scaled(pow2(f, off));
            step.wires.push_back(wc);
            step.offsets.push_back(off);
            step.widths.push_back(width);
        }
        auto [roff, rwidth] = pieces.back();
        Fp top = pow2(f, B - 1);
        LinearCombination rem = (src + LinearCombination::constant(top) - partial -
                                 out.top_bit.scaled(top))
                                    .scaled(pow2(f, roff).inverse());
        ctx.lookup->tag(f, rem, rwidth, site);
        out.piece_lcs.push_back(rem);
    }
    ctx.program.steps.push_back(std::move(step));
    return out;
}

namespace {

struct Counter {
    GadgetCtx& ctx;
    size_t c0, t0;
    explicit Counter(GadgetCtx& c)
        : ctx(c), c0(c.builder.num_constraints()), t0(c.lookup ? c.lookup->tags.size() : 0) {}
    void finish(ActivationResult& r) const {
        r.constraints_emitted = ctx.builder.num_constraints() - c0;
        r.lookup_tags_emitted = (ctx.lookup ? ctx.lookup->tags.size() : 0) - t0;
    }
};

WireId emit_product(GadgetCtx& ctx, const LinearCombination& a, const LinearCombination& b,
                    const LinearCombination& offset) {
    const PrimeField& f = ctx.builder.field();
    WireId out = ctx.builder.alloc_private(0);
    LinearCombination out_lc = LinearCombination::wire(out, f.one());
    ctx.builder.enforce(a, b, out_lc - offset);
    ctx.program.steps.push_back(WitnessProgram::StepMul{a, b, offset, out});
    return out;
}

}  // namespace

ActivationResult relu(GadgetCtx& ctx, const LinearCombination& x, const DecompositionSpec& spec,
                      uint32_t x_precision, const std::string& site) {
    const PrimeField& f = ctx.builder.field();
    Counter cnt(ctx);
    auto d = emit_signed_decomposition(ctx, x, spec, site);
    LinearCombination h = d.nonneg_shifted(f, spec.cut_bits);
    ActivationResult r;
    r.out = emit_product(ctx, d.top_bit, h, LinearCombination());
    r.out_precision = x_precision - spec.cut_bits;
    cnt.finish(r);
    return r;
}

ActivationResult leaky_relu(GadgetCtx& ctx, const LinearCombination& x, DecompositionSpec spec,
                            uint32_t slope_shift, uint32_t x_precision, const std::string& site) {
    const PrimeField& f = ctx.builder.field();
    Counter cnt(ctx);
    uint32_t lo = spec.cut_bits + slope_shift;
    if (lo >= spec.total_width - 1)
        throw std::invalid_argument("leaky_relu: slope shift exceeds width");
    if (spec.mode == GadgetMode::chunked && lo > 0) {
        spec = DecompositionSpec::chunked(spec.total_width, spec.chunk_width, spec.cut_bits, {lo});
    }
    auto d = emit_signed_decomposition(ctx, x, spec, site);
    LinearCombination hi = d.signed_shifted(f, spec.cut_bits);
    LinearCombination lo_branch = d.signed_shifted(f, lo);
    ActivationResult r;
    r.out = emit_product(ctx, d.top_bit, hi - lo_branch, lo_branch);
    r.out_precision = x_precision - spec.cut_bits;
    cnt.finish(r);
    return r;
}

ActivationResult relu6(GadgetCtx& ctx, const LinearCombination& x, const DecompositionSpec& spec,
                       uint32_t x_precision, uint32_t bound_log2, const std::string& site) {
    const PrimeField& f = ctx.builder.field();
    if (spec.cut_bits > x_precision + 1)
        throw std::invalid_argument("relu6: cut beyond the constant-six alignment");
    Counter cnt(ctx);
    auto d1 = emit_signed_decomposition(ctx, x, spec, site);
    // second sign extraction for x - 6hat
    Fp six = f.from_u64(6) * pow2(f, x_precision);
    uint32_t b2 = x_precision + std::max(bound_log2, 3u) + 2;
    DecompositionSpec spec2 = spec.mode == GadgetMode::binary
                                  ? DecompositionSpec::binary(b2, 0)
                                  : DecompositionSpec::chunked(b2, spec.chunk_width, 0);
    auto d2 = emit_signed_decomposition(
        ctx, x - LinearCombination::constant(six), spec2, site + "/clip");

    LinearCombination h1 = d1.nonneg_shifted(f, spec.cut_bits);
    Fp six_cut = f.from_u64(6) * pow2(f, x_precision - spec.cut_bits + 1) *
                 f.from_u64(2).inverse();  // 6 * 2^(rho-cut), exact for cut <= rho+1
    WireId w1 = emit_product(ctx, d2.top_bit, LinearCombination::constant(six_cut) - h1,
                             LinearCombination());
    LinearCombination inner = h1 + LinearCombination::wire(w1, f.one());
    ActivationResult r;
    r.out = emit_product(ctx, d1.top_bit, inner, LinearCombination());
    r.out_precision = x_precision - spec.cut_bits;
    cnt.finish(r);
    return r;
}

namespace {

// shared tail of hard_sigmoid / hard_swish: returns the gate output wire
struct HsParts {
    WireId out;
    SignedDecomposition d1;
    uint32_t width_b;
};

HsParts emit_hard_sigmoid(GadgetCtx& ctx, const LinearCombination& x, DecompositionSpec& spec,
                          uint32_t x_precision, uint32_t bound_log2, uint32_t sigma,
                          const std::string& site) {
    const PrimeField& f = ctx.builder.field();
    if (spec.cut_bits > x_precision)
        throw std::invalid_argument("hard_sigmoid: cut exceeds input precision");
    // y = x + 3*2^rho; clip threshold 6*2^rho sits at bit rho+1 of y, so the
    // clip indicator is a tiny comparison over the bits above rho+1
    uint32_t B = std::max(spec.total_width, x_precision + 4);
    uint32_t hb = std::max(bound_log2, 2u);
    B = std::max(B, x_precision + hb + 2);
    if (spec.mode == GadgetMode::binary) {
        spec = DecompositionSpec::binary(B, spec.cut_bits);
    } else {
        spec = DecompositionSpec::chunked(B, spec.chunk_width, spec.cut_bits,
                                          {x_precision + 1});
    }
    Fp three_hat = f.from_u64(3) * pow2(f, x_precision);
    LinearCombination y = x + LinearCombination::constant(three_hat);
    auto d1 = emit_signed_decomposition(ctx, y, spec, site);

    // high bits of y above position rho+1
    LinearCombination high;
    uint32_t hw = B - 2 - x_precision;  // width of the high window
    for (size_t i = 0; i < d1.piece_lcs.size(); ++i) {
        auto [off, width] = d1.piece_pos[i];
        (void)width;
        if (off >= x_precision + 1)
            high = high + d1.piece_lcs[i].scaled(pow2(f, off - (x_precision + 1)));
    }
    // clip indicator: top bit of (high - 3) over width hw+1
    DecompositionSpec mini = spec.mode == GadgetMode::binary
                                 ? DecompositionSpec::binary(hw + 1, 0)
                                 : DecompositionSpec::chunked(
                                       hw + 1, std::min(ctx.lookup->chunk_width, hw), 0);
    auto dmini = emit_signed_decomposition(
        ctx, high - LinearCombination::constant(f.from_u64(3)), mini, site + "/clip");

    Fp sixth = f.from_canonical(u256::from_u64(
        ((uint64_t(1) << sigma) + 3) / 6));  // round(2^sigma / 6), half away from zero
    LinearCombination mid = d1.nonneg_shifted(f, spec.cut_bits).scaled(sixth);
    Fp sat = pow2(f, x_precision - spec.cut_bits + sigma);
    WireId w1 = emit_product(ctx, dmini.top_bit, LinearCombination::constant(sat) - mid,
                             LinearCombination());
    WireId out = emit_product(ctx, d1.top_bit, mid + LinearCombination::wire(w1, f.one()),
                              LinearCombination());
    return {out, std::move(d1), B};
}

}  // namespace

ActivationResult hard_sigmoid(GadgetCtx& ctx, const LinearCombination& x, DecompositionSpec spec,
                              uint32_t x_precision, uint32_t bound_log2, uint32_t sigma,
                              const std::string& site) {
    Counter cnt(ctx);
    HsParts parts = emit_hard_sigmoid(ctx, x, spec, x_precision, bound_log2, sigma, site);
    ActivationResult r;
    r.out = parts.out;
    r.out_precision = x_precision - spec.cut_bits + sigma;
    cnt.finish(r);
    return r;
}

ActivationResult hard_swish(GadgetCtx& ctx, const LinearCombination& x, DecompositionSpec spec,
                            uint32_t x_precision, uint32_t bound_log2, uint32_t sigma,
                            const std::string& site) {
    const PrimeField& f = ctx.builder.field();
    Counter cnt(ctx);
    uint32_t cut = spec.cut_bits;
    HsParts parts = emit_hard_sigmoid(ctx, x, spec, x_precision, bound_log2, sigma, site);
    // x >> cut from the same decomposition: (y >> cut) - 3*2^(rho-cut)
    LinearCombination xshift = parts.d1.signed_shifted(f, cut);
    xshift.add_term(0, -(f.from_u64(3) * pow2(f, x_precision - cut)));
    ActivationResult r;
    r.out = emit_product(ctx, LinearCombination::wire(parts.out, f.one()), xshift,
                         LinearCombination());
    r.out_precision = 2 * (x_precision - cut) + sigma;
    cnt.finish(r);
    return r;
}

LookupTableSpec lookup_finalize(GadgetCtx& ctx) {
    if (!ctx.lookup) throw std::logic_error("lookup_finalize without registry");
    if (ctx.lookup->finalized) throw std::logic_error("lookup finalized twice");
    ctx.lookup->finalized = true;
    const PrimeField& f = ctx.builder.field();
    LookupRegistry& reg = *ctx.lookup;
    size_t table = size_t(1) << reg.chunk_width;

    LookupTableSpec spec;
    spec.chunk_width = reg.chunk_width;
    spec.challenge_wire = ctx.builder.alloc_challenge(0);
    for (size_t i = 0; i < table; ++i) spec.mu_wires.push_back(ctx.builder.alloc_private(0));
    for (size_t i = 0; i < reg.tags.size(); ++i)
        spec.u_wires.push_back(ctx.builder.alloc_private(1));
    for (size_t i = 0; i < table; ++i) spec.v_wires.push_back(ctx.builder.alloc_private(1));

    Fp one = f.one();
    LinearCombination alpha = LinearCombination::wire(spec.challenge_wire, one);
    LinearCombination balance;
    for (size_t j = 0; j < reg.tags.size(); ++j) {
        LinearCombination u = LinearCombination::wire(spec.u_wires[j], one);
        ctx.builder.enforce(u, alpha + reg.tags[j], LinearCombination::constant(one));
        balance = balance + u;
    }
    for (size_t i = 0; i < table; ++i) {
        LinearCombination v = LinearCombination::wire(spec.v_wires[i], one);
        ctx.builder.enforce(v, alpha + LinearCombination::constant(f.from_u64(uint64_t(i))),
                            LinearCombination::wire(spec.mu_wires[i], one));
        balance = balance - v;
    }
    ctx.builder.enforce(balance, LinearCombination::constant(one), LinearCombination());

    WitnessProgram::StepMultiplicities mu_step;
    mu_step.chunk_width = reg.chunk_width;
    mu_step.tags = reg.tags;
    mu_step.sites = reg.sites;
    mu_step.mu = spec.mu_wires;
    ctx.program.steps.push_back(std::move(mu_step));
    ctx.program.steps.push_back(WitnessProgram::StepRoundBarrier{1});
    WitnessProgram::StepLookupInverses inv_step;
    inv_step.challenge = spec.challenge_wire;
    inv_step.chunk_width = reg.chunk_width;
    inv_step.tags = reg.tags;
    inv_step.mu = spec.mu_wires;
    inv_step.u = spec.u_wires;
    inv_step.v = spec.v_wires;
    ctx.program.steps.push_back(std::move(inv_step));
    return spec;
}

// ---- reference semantics ----------------------------------------------------

namespace ref {

namespace {

__int128 floor_shift(__int128 v, uint32_t k) {
    if (k == 0) return v;
    if (v >= 0) return v >> k;
    return -((-v + (__int128(1) << k) - 1) >> k);
}

QuantizedValue make(const PrimeField& f, __int128 v, uint32_t prec) {
    return QuantizedValue{signed_encode(f, v), prec};
}

}  // namespace

QuantizedValue relu(const QuantizedValue& x, uint32_t cut) {
    const PrimeField& f = x.value.field();
    __int128 v = signed_decode(x.value).to_i128();
    __int128 out = v < 0 ? 0 : (v >> cut);
    return make(f, out, x.effective_precision - cut);
}

QuantizedValue leaky_relu(const QuantizedValue& x, uint32_t slope_shift, uint32_t cut) {
    const PrimeField& f = x.value.field();
    __int128 v = signed_decode(x.value).to_i128();
    __int128 out = v >= 0 ? (v >> cut) : floor_shift(v, cut + slope_shift);
    return make(f, out, x.effective_precision - cut);
}

QuantizedValue relu6(const QuantizedValue& x, uint32_t cut) {
    const PrimeField& f = x.value.field();
    __int128 v = signed_decode(x.value).to_i128();
    __int128 six = __int128(6) << x.effective_precision;
    __int128 out = v < 0 ? 0 : (v >= six ? (six >> cut) : (v >> cut));
    return make(f, out, x.effective_precision - cut);
}

QuantizedValue hard_sigmoid(const QuantizedValue& x, uint32_t sigma, uint32_t cut) {
    const PrimeField& f = x.value.field();
    uint32_t rho = x.effective_precision;
    __int128 v = signed_decode(x.value).to_i128();
    __int128 y = v + (__int128(3) << rho);
    uint32_t out_prec = rho - cut + sigma;
    __int128 out;
    if (y < 0)
        out = 0;
    else if (y >= (__int128(6) << rho))
        out = __int128(1) << out_prec;
    else
        out = (y >> cut) * (((__int128(1) << sigma) + 3) / 6);
    return make(f, out, out_prec);
}

QuantizedValue hard_swish(const QuantizedValue& x, uint32_t sigma, uint32_t cut) {
    const PrimeField& f = x.value.field();
    uint32_t rho = x.effective_precision;
    QuantizedValue hs = hard_sigmoid(x, sigma, cut);
    __int128 gate = signed_decode(hs.value).to_i128();
    __int128 xs = floor_shift(signed_decode(x.value).to_i128(), cut);
    return make(f, gate * xs, hs.effective_precision + (rho - cut));
}

}  // namespace ref

}  // namespace unr
