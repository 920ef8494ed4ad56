#include "unr/compiler.hpp"

#include <cmath>

#include "unr/fields.hpp"
#include "unr/sha256.hpp"

namespace unr {

namespace {

uint32_t bit_width_of(double bound) {
    uint32_t w = 1;
    double v = 1;
    while (v < bound && w < 200) {
        v *= 2;
        ++w;
    }
    return w;
}

uint32_t round_up(uint32_t v, uint32_t step) { return ((v + step - 1) / step) * step; }

// lowering-time tensor: linear combinations with uniform precision and a
// real-valued magnitude bound
struct QTensor {
    std::vector<uint32_t> shape;
    std::vector<LinearCombination> lcs;
    uint32_t precision = 0;
    double bound = 0;

    size_t count() const { return lcs.size(); }
};

struct Lowering {
    const ModelGraph& graph;
    const PrimeField& f;
    ProofMode mode;
    uint32_t w;  // chunk width (chunked mode)
    ConstraintSystemBuilder builder;
    WitnessProgram program;
    std::unique_ptr<LookupRegistry> lookup;
    GadgetCtx ctx;
    std::vector<LayerReport> reports;

    Lowering(const ModelGraph& g, const PrimeField& field, ProofMode m, uint32_t chunk_w)
        : graph(g),
          f(field),
          mode(m),
          w(chunk_w),
          builder(field, m == ProofMode::ultragroth ? 1 : 0),
          lookup(m == ProofMode::ultragroth ? std::make_unique<LookupRegistry>(chunk_w) : nullptr),
          ctx{builder, program, lookup.get()} {}

    Fp qconst(double v, uint32_t prec) { return quantize_at(f, v, prec).value; }

    uint32_t width_for(uint32_t precision, double bound) {
        uint32_t raw = precision + bit_width_of(bound) + 1;
        uint32_t aligned = round_up(raw, mode == ProofMode::ultragroth ? w : 4);
        // 120: the exact-quantizer scaling works in 128-bit integers
        if (aligned > f.bit_size() - 2 || precision > 120)
            throw std::invalid_argument(
                "schedule infeasible: decomposition width " + std::to_string(aligned) +
                " at precision " + std::to_string(precision) +
                " exceeds capacity; increase precision cuts or lower rho");
        return aligned;
    }

    DecompositionSpec spec_for(uint32_t B, uint32_t cut) {
        return mode == ProofMode::ultragroth ? DecompositionSpec::chunked(B, w, cut)
                                             : DecompositionSpec::binary(B, cut);
    }

    // element-wise activation with the cut bringing the output back to rho
    QTensor apply_activation(const QTensor& in, Activation act, uint32_t leaky_shift,
                             LayerReport& rep, const std::string& site) {
        if (act == Activation::none) return in;
        uint32_t rho = graph.rho;
        uint32_t cut = in.precision - rho;
        uint32_t B = width_for(in.precision, in.bound);
        uint32_t blog = bit_width_of(in.bound);
        rep.width_b = B;
        QTensor out;
        out.shape = in.shape;
        out.lcs.reserve(in.count());
        size_t c0 = builder.num_constraints();
        size_t t0 = lookup ? lookup->tags.size() : 0;
        for (size_t i = 0; i < in.count(); ++i) {
            std::string s = site + "#" + std::to_string(i);
            ActivationResult r;
            switch (act) {
                case Activation::relu:
                    r = relu(ctx, in.lcs[i], spec_for(B, cut), in.precision, s);
                    break;
                case Activation::leaky_relu:
                    r = leaky_relu(ctx, in.lcs[i], spec_for(B, cut), leaky_shift, in.precision, s);
                    break;
                case Activation::relu6:
                    r = relu6(ctx, in.lcs[i], spec_for(B, cut), in.precision, blog, s);
                    break;
                case Activation::hard_sigmoid:
                    r = hard_sigmoid(ctx, in.lcs[i], spec_for(B, cut), in.precision, blog, rho, s);
                    break;
                case Activation::hard_swish:
                    r = hard_swish(ctx, in.lcs[i], spec_for(B, cut), in.precision, blog, rho, s);
                    break;
                default:
                    break;
            }
            out.lcs.push_back(LinearCombination::wire(r.out, f.one()));
            out.precision = r.out_precision;
        }
        rep.activation_sites += in.count();
        rep.activation_constraints += builder.num_constraints() - c0;
        rep.lookup_tags += (lookup ? lookup->tags.size() : 0) - t0;
        switch (act) {
            case Activation::relu:
            case Activation::leaky_relu:
                out.bound = in.bound;
                break;
            case Activation::relu6:
                out.bound = std::min(in.bound, 6.0);
                break;
            case Activation::hard_sigmoid:
                out.bound = 1.0;
                break;
            case Activation::hard_swish:
                out.bound = std::min(in.bound, in.bound * 1.0);
                break;
            default:
                out.bound = in.bound;
        }
        return out;
    }

    QTensor matvec(const Matrix& w_mat, const std::vector<double>& bias, const QTensor& x,
                   double weight_scale = 1.0) {
        uint32_t rho = graph.rho;
        QTensor out;
        out.shape = {uint32_t(w_mat.size())};
        out.precision = x.precision + rho;
        double maxrow = 0;
        for (size_t j = 0; j < w_mat.size(); ++j) {
            double row = 0;
            for (double v : w_mat[j]) row += std::abs(v * weight_scale);
            double b = j < bias.size() ? bias[j] : 0.0;
            maxrow = std::max(maxrow, row * x.bound + std::abs(b));
        }
        // quantization slack of the embedded weights
        out.bound = maxrow + double(w_mat.empty() ? 0 : w_mat[0].size()) * x.bound *
                                 std::ldexp(1.0, -int(rho)) +
                    1e-9;
        width_for(out.precision, out.bound);  // feasibility before constant quantization
        for (size_t j = 0; j < w_mat.size(); ++j) {
            LinearCombination acc;
            for (size_t i = 0; i < w_mat[j].size(); ++i)
                acc = acc + x.lcs[i].scaled(qconst(w_mat[j][i] * weight_scale, rho));
            double b = j < bias.size() ? bias[j] : 0.0;
            if (b != 0) acc.add_term(0, qconst(b, out.precision));
            out.lcs.push_back(std::move(acc));
        }
        return out;
    }

    // scale a tensor up by 2^k (exact, free)
    static QTensor align_up(const PrimeField& f, const QTensor& t, uint32_t target_prec) {
        if (t.precision == target_prec) return t;
        QTensor out = t;
        Fp s = pow2(f, target_prec - t.precision);
        for (auto& lc : out.lcs) lc = lc.scaled(s);
        out.precision = target_prec;
        return out;
    }
};

size_t volume(const std::vector<uint32_t>& s) {
    size_t n = 1;
    for (uint32_t d : s) n *= d;
    return n;
}

size_t flat3(const std::vector<uint32_t>& shape, size_t i, size_t j, size_t c) {
    return (i * shape[1] + j) * shape[2] + c;
}

WireId emitProduct(Lowering& low, const LinearCombination& x, const LinearCombination& y) {
    const PrimeField& f = low.builder.field();
    WireId out = low.builder.alloc_private(0);
    low.builder.enforce(x, y, LinearCombination::wire(out, f.one()));
    low.program.steps.push_back(WitnessProgram::StepMul{x, y, LinearCombination(), out});
    return out;
}

size_t count_activation_sites(const ModelGraph& g) {
    auto chain = g.shape_chain();
    size_t sites = 0;
    for (size_t li = 0; li < g.layers.size(); ++li) {
        const auto& cur = chain[li];
        std::visit(
            [&](const auto& layer) {
                using T = std::decay_t<decltype(layer)>;
                if constexpr (std::is_same_v<T, DenseLayer>) {
                    if (layer.act != Activation::none) sites += layer.weights.size();
                } else if constexpr (std::is_same_v<T, EdLayer>) {
                    sites += layer.we.size();
                } else if constexpr (std::is_same_v<T, SeBlock>) {
                    uint32_t c = cur[2];
                    sites += size_t(layer.grid_w) * layer.grid_h *
                             (c / layer.reduction + c);
                } else if constexpr (std::is_same_v<T, EdConv>) {
                    sites += size_t(layer.patch) * layer.patch * layer.hidden;
                }
            },
            g.layers[li]);
    }
    return sites;
}

}  // namespace

double lookup_cost_formula(uint32_t field_bits, uint32_t w, uint64_t lookups) {
    return std::ldexp(1.0, int(w) + 1) + double(field_bits) * double(lookups) / double(w);
}

ChunkWidthChoice optimal_chunk_width(uint64_t lookups, uint32_t field_bits) {
    if (lookups == 0) throw std::invalid_argument("optimal_chunk_width: L must be positive");
    ChunkWidthChoice out;
    double best = 0;
    for (uint32_t w = 2; w <= 24; ++w) {
        double c = lookup_cost_formula(field_bits, w, lookups);
        if (out.w_int == 0 || c < best) {
            best = c;
            out.w_int = w;
        }
    }
    out.cost = best;
    // stationary point of 2^w w^2 = L b / (2 ln 2)
    double target = double(lookups) * double(field_bits) / (2.0 * std::log(2.0));
    double lo = 2, hi = 24;
    auto g = [](double w) { return std::pow(2.0, w) * w * w; };
    if (g(lo) >= target)
        out.w_real = lo;
    else if (g(hi) <= target)
        out.w_real = hi;
    else {
        for (int it = 0; it < 200; ++it) {
            double mid = (lo + hi) / 2;
            (g(mid) < target ? lo : hi) = mid;
        }
        out.w_real = (lo + hi) / 2;
    }
    return out;
}

CompiledCircuit compile(const ModelGraph& graph, ProofMode mode, uint32_t chunk_width) {
    const PrimeField& f = bn254_fr();
    auto chain = graph.shape_chain();
    if (graph.rho >= f.bit_size() / 4)
        throw std::invalid_argument("rho too large for the field");

    uint32_t w = 0;
    if (mode == ProofMode::ultragroth) {
        if (chunk_width == 0) {
            size_t sites = count_activation_sites(graph);
            w = optimal_chunk_width(std::max<uint64_t>(sites, 1), f.bit_size()).w_int;
            w = std::min(w, 16u);  // keep desk-scale tables bounded
        } else {
            w = chunk_width;
        }
        if (w < 2 || w > 24) throw std::invalid_argument("chunk width outside [2, 24]");
    }

    Lowering low(graph, f, mode, w);
    uint32_t rho = graph.rho;

    // input wires
    QTensor cur;
    cur.shape = graph.input_shape;
    cur.precision = rho;
    cur.bound = kInputBound;
    for (size_t i = 0; i < graph.input_count(); ++i) {
        WireId wi = low.builder.alloc_private(0);
        low.program.steps.push_back(WitnessProgram::StepInput{uint32_t(i), wi, rho});
        cur.lcs.push_back(LinearCombination::wire(wi, f.one()));
    }

    for (size_t li = 0; li < graph.layers.size(); ++li) {
        LayerReport rep;
        size_t c_before = low.builder.num_constraints();
        std::visit(
            [&](const auto& layer) {
                using T = std::decay_t<decltype(layer)>;
                std::string name;
                if constexpr (std::is_same_v<T, FlattenLayer>) {
                    name = "flatten";
                    cur.shape = {uint32_t(volume(cur.shape))};
                    rep.formula = "0";
                } else if constexpr (std::is_same_v<T, DenseLayer>) {
                    name = "dense";
                    QTensor z = low.matvec(layer.weights, layer.bias, cur);
                    if (layer.act != Activation::none) {
                        cur = low.apply_activation(z, layer.act, layer.leaky_shift, rep,
                                                   name + "[" + std::to_string(li) + "]");
                        rep.formula_prediction = double(rep.activation_sites) * rep.width_b;
                        rep.formula = "sites*B";
                    } else {
                        cur = std::move(z);
                        rep.formula = "0 (linear)";
                    }
                } else if constexpr (std::is_same_v<T, EdLayer>) {
                    name = "ed";
                    QTensor input = cur;
                    QTensor enc = low.matvec(layer.we, {}, input);
                    QTensor act = low.apply_activation(enc, layer.act, 2, rep,
                                                       name + "[" + std::to_string(li) + "]");
                    QTensor dec = low.matvec(layer.wd, {}, act);
                    if (layer.residual) {
                        uint32_t target = std::max(dec.precision, input.precision);
                        QTensor a = Lowering::align_up(f, dec, target);
                        QTensor b = Lowering::align_up(f, input, target);
                        for (size_t i = 0; i < a.lcs.size(); ++i) a.lcs[i] = a.lcs[i] + b.lcs[i];
                        a.bound = dec.bound + input.bound;
                        cur = std::move(a);
                    } else {
                        cur = std::move(dec);
                    }
                    rep.formula_prediction = double(layer.we.size()) * rep.width_b;
                    rep.formula = "k*B";
                } else if constexpr (std::is_same_v<T, SeBlock>) {
                    name = "se";
                    uint32_t W = cur.shape[0], H = cur.shape[1], C = cur.shape[2];
                    uint32_t cw = W / layer.grid_w, ch = H / layer.grid_h;
                    QTensor gated;
                    gated.shape = cur.shape;
                    gated.lcs.resize(cur.count());
                    size_t prod0 = low.builder.num_constraints();
                    size_t prod_cnt = 0;
                    (void)prod0;
                    for (uint32_t gi = 0; gi < layer.grid_w; ++gi) {
                        for (uint32_t gj = 0; gj < layer.grid_h; ++gj) {
                            // pooled sums per channel; the 1/(cw*ch) factor is
                            // folded into the encoder weights
                            QTensor pooled;
                            pooled.shape = {C};
                            pooled.precision = cur.precision;
                            pooled.bound = cur.bound * cw * ch;
                            for (uint32_t c = 0; c < C; ++c) {
                                LinearCombination s;
                                for (uint32_t i = 0; i < cw; ++i)
                                    for (uint32_t j = 0; j < ch; ++j)
                                        s = s + cur.lcs[flat3(cur.shape, gi * cw + i,
                                                              gj * ch + j, c)];
                                pooled.lcs.push_back(std::move(s));
                            }
                            QTensor enc = low.matvec(layer.we, {}, pooled,
                                                     1.0 / (double(cw) * ch));
                            QTensor hid = low.apply_activation(
                                enc, Activation::relu, 2, rep,
                                "se[" + std::to_string(li) + "]/hidden");
                            QTensor dec = low.matvec(layer.wd, {}, hid);
                            QTensor gate = low.apply_activation(
                                dec, Activation::hard_sigmoid, 2, rep,
                                "se[" + std::to_string(li) + "]/gate");
                            // channel-wise products across the cell
                            size_t p0 = low.builder.num_constraints();
                            for (uint32_t c = 0; c < C; ++c) {
                                for (uint32_t i = 0; i < cw; ++i)
                                    for (uint32_t j = 0; j < ch; ++j) {
                                        size_t idx = flat3(cur.shape, gi * cw + i, gj * ch + j, c);
                                        WireId pw = emitProduct(low, gate.lcs[c], cur.lcs[idx]);
                                        gated.lcs[idx] = LinearCombination::wire(pw, f.one());
                                    }
                            }
                            prod_cnt += low.builder.num_constraints() - p0;
                            gated.precision = cur.precision + gate.precision;
                            gated.bound = cur.bound;
                        }
                    }
                    rep.product_constraints = prod_cnt;
                    cur = std::move(gated);
                    rep.formula_prediction =
                        double(layer.grid_w) * layer.grid_h *
                        ((1.0 + 1.0 / layer.reduction) * C * rep.width_b + double(cw) * ch * C);
                    rep.formula = "(1+1/r)*C*B + H*W*C";
                } else if constexpr (std::is_same_v<T, EdConv>) {
                    name = "edconv";
                    uint32_t W = cur.shape[0], H = cur.shape[1], C = cur.shape[2];
                    uint32_t P = layer.patch;
                    uint32_t bw = W / P, bh = H / P;
                    uint32_t ow = layer.out_w / P, oh = layer.out_h / P;
                    QTensor out;
                    out.shape = {layer.out_w, layer.out_h, layer.out_c};
                    out.lcs.resize(volume(out.shape));
                    double out_bound = 0;
                    uint32_t out_prec = 0;
                    for (uint32_t bi = 0; bi < P; ++bi) {
                        for (uint32_t bj = 0; bj < P; ++bj) {
                            QTensor block;
                            block.shape = {uint32_t(bw * bh * C)};
                            block.precision = cur.precision;
                            block.bound = cur.bound;
                            for (uint32_t i = 0; i < bw; ++i)
                                for (uint32_t j = 0; j < bh; ++j)
                                    for (uint32_t c = 0; c < C; ++c)
                                        block.lcs.push_back(cur.lcs[flat3(
                                            cur.shape, bi * bw + i, bj * bh + j, c)]);
                            QTensor enc = low.matvec(layer.we, {}, block);
                            QTensor hid = low.apply_activation(
                                enc, layer.act, 2, rep,
                                "edconv[" + std::to_string(li) + "]");
                            QTensor dec = low.matvec(layer.wd, {}, hid);
                            out_bound = std::max(out_bound, dec.bound);
                            out_prec = dec.precision;
                            size_t bidx = 0;
                            for (uint32_t i = 0; i < ow; ++i)
                                for (uint32_t j = 0; j < oh; ++j)
                                    for (uint32_t c = 0; c < layer.out_c; ++c)
                                        out.lcs[flat3(out.shape, bi * ow + i, bj * oh + j, c)] =
                                            dec.lcs[bidx++];
                        }
                    }
                    out.bound = out_bound;
                    out.precision = out_prec;
                    cur = std::move(out);
                    rep.formula_prediction = double(P) * P * layer.hidden * rep.width_b;
                    rep.formula = "P^2*K*B";
                }
                rep.name = name + "[" + std::to_string(li) + "]";
            },
            graph.layers[li]);
        rep.constraints = low.builder.num_constraints() - c_before;
        low.reports.push_back(std::move(rep));
    }

    // bind outputs to public wires, one constraint each
    std::vector<WireId> out_wires;
    {
        LayerReport rep;
        rep.name = "output-binding";
        rep.formula = "n_out";
        size_t c0 = low.builder.num_constraints();
        for (const LinearCombination& lc : cur.lcs) {
            WireId ow = low.builder.alloc_public();
            low.builder.enforce(lc, LinearCombination::constant(f.one()),
                                LinearCombination::wire(ow, f.one()));
            low.program.steps.push_back(WitnessProgram::StepLc{lc, ow});
            out_wires.push_back(ow);
        }
        rep.binding_constraints = low.builder.num_constraints() - c0;
        rep.constraints = rep.binding_constraints;
        rep.formula_prediction = double(cur.count());
        low.reports.push_back(std::move(rep));
    }

    std::optional<LookupTableSpec> lookup_spec;
    if (mode == ProofMode::ultragroth) {
        LayerReport rep;
        rep.name = "lookup-finalize";
        rep.formula = "2^w + L + 1";
        size_t c0 = low.builder.num_constraints();
        lookup_spec = lookup_finalize(low.ctx);
        rep.constraints = low.builder.num_constraints() - c0;
        rep.formula_prediction = std::ldexp(1.0, int(w)) + double(lookup_spec->u_wires.size()) + 1;
        low.reports.push_back(std::move(rep));
    }

    auto fin = low.builder.finalize();
    low.program.remap(fin.permutation);
    for (WireId& ww : out_wires) ww = fin.permutation[ww];
    if (lookup_spec) {
        lookup_spec->challenge_wire = fin.permutation[lookup_spec->challenge_wire];
        for (WireId& m : lookup_spec->mu_wires) m = fin.permutation[m];
        for (WireId& m : lookup_spec->u_wires) m = fin.permutation[m];
        for (WireId& m : lookup_spec->v_wires) m = fin.permutation[m];
    }

    return CompiledCircuit{std::move(fin.cs),
                           std::move(low.program),
                           mode,
                           rho,
                           w,
                           graph.input_shape,
                           std::move(out_wires),
                           cur.precision,
                           std::move(lookup_spec),
                           std::move(low.reports)};
}

// ---- circuit file ------------------------------------------------------------

Bytes CompiledCircuit::serialize() const {
    ByteWriter w;
    w.raw(reinterpret_cast<const uint8_t*>("UNR1"), 4);
    w.u32(1);  // version
    const PrimeField& f = cs.field();
    w.u8(uint8_t(f.byte_size()));
    U256 mod = f.modulus();
    for (uint32_t i = 0; i < f.byte_size(); ++i) w.u8(uint8_t(mod[i / 8] >> (8 * (i % 8))));
    w.u8(uint8_t(mode));
    w.varint(rho);
    w.varint(chunk_width);
    w.varint(input_shape.size());
    for (uint32_t d : input_shape) w.varint(d);
    w.varint(output_wires.size());
    for (WireId ow : output_wires) w.varint(ow);
    w.varint(output_precision);
    cs.serialize(w);
    program.serialize(w, f);
    w.u8(lookup.has_value() ? 1 : 0);
    if (lookup) {
        w.varint(lookup->chunk_width);
        w.varint(lookup->challenge_wire);
        auto wire_vec = [&](const std::vector<WireId>& v) {
            w.varint(v.size());
            for (WireId x : v) w.varint(x);
        };
        wire_vec(lookup->mu_wires);
        wire_vec(lookup->u_wires);
        wire_vec(lookup->v_wires);
    }
    w.varint(report.size());
    for (const LayerReport& r : report) {
        w.str(r.name);
        w.varint(r.constraints);
        w.varint(r.activation_constraints);
        w.varint(r.activation_sites);
        w.varint(r.lookup_tags);
        w.varint(r.product_constraints);
        w.varint(r.binding_constraints);
        w.varint(r.width_b);
        w.u64(uint64_t(r.formula_prediction));
        w.str(r.formula);
    }
    return w.take();
}

Bytes CompiledCircuit::digest() const {
    Bytes data = serialize();
    auto d = Sha256::digest(data);
    return Bytes(d.begin(), d.end());
}

CompiledCircuit CompiledCircuit::deserialize(const Bytes& data) {
    ByteReader r(data);
    Bytes magic = r.raw(4);
    if (std::string(magic.begin(), magic.end()) != "UNR1")
        throw std::runtime_error("not a circuit file");
    if (r.u32() != 1) throw std::runtime_error("unsupported circuit version");
    uint8_t mod_len = r.u8();
    U256 mod{};
    for (uint32_t i = 0; i < mod_len; ++i) mod[i / 8] |= uint64_t(r.u8()) << (8 * (i % 8));
    const PrimeField* f = find_known_field(mod);
    if (!f) throw std::runtime_error("circuit field is not a known configuration");
    ProofMode mode = ProofMode(r.u8());
    uint32_t rho = uint32_t(r.varint());
    uint32_t chunk_width = uint32_t(r.varint());
    std::vector<uint32_t> input_shape(r.varint());
    for (auto& d : input_shape) d = uint32_t(r.varint());
    std::vector<WireId> output_wires(r.varint());
    for (auto& d : output_wires) d = WireId(r.varint());
    uint32_t out_prec = uint32_t(r.varint());
    ConstraintSystem cs = ConstraintSystem::deserialize(r, *f);
    WitnessProgram prog = WitnessProgram::deserialize(r, *f);
    std::optional<LookupTableSpec> lookup;
    if (r.u8()) {
        LookupTableSpec ls;
        ls.chunk_width = uint32_t(r.varint());
        ls.challenge_wire = WireId(r.varint());
        auto wire_vec = [&](std::vector<WireId>& v) {
            v.resize(r.varint());
            for (auto& x : v) x = WireId(r.varint());
        };
        wire_vec(ls.mu_wires);
        wire_vec(ls.u_wires);
        wire_vec(ls.v_wires);
        lookup = std::move(ls);
    }
    std::vector<LayerReport> report(r.varint());
    for (auto& rep : report) {
        rep.name = r.str();
        rep.constraints = r.varint();
        rep.activation_constraints = r.varint();
        rep.activation_sites = r.varint();
        rep.lookup_tags = r.varint();
        rep.product_constraints = r.varint();
        rep.binding_constraints = r.varint();
        rep.width_b = uint32_t(r.varint());
        rep.formula_prediction = double(r.u64());
        rep.formula = r.str();
    }
    return CompiledCircuit{std::move(cs),    std::move(prog),        mode,
                           rho,              chunk_width,            std::move(input_shape),
                           std::move(output_wires), out_prec,        std::move(lookup),
                           std::move(report)};
}

// ---- witness generation --------------------------------------------------------

Assignment generate_witness(const CompiledCircuit& c, std::span<const double> inputs,
                            const ChallengeFill& fill) {
    const PrimeField& f = c.cs.field();
    if (inputs.size() != volume(c.input_shape))
        throw std::invalid_argument("input tensor shape mismatch");
    Assignment a{std::vector<Fp>(c.cs.num_wires(), f.zero())};
    a.values[0] = f.one();
    size_t pos = run_witness_phase(c.program, 0, f, inputs, a.values);
    const WitnessLayout& layout = c.cs.layout();
    for (uint32_t round = 0; round < layout.rounds_d(); ++round) {
        std::vector<Fp> ch = fill(round, a);
        if (ch.size() != layout.challenge_sizes[round])
            throw std::invalid_argument("challenge fill size mismatch");
        uint32_t off = layout.challenge_offset(round);
        for (uint32_t k = 0; k < ch.size(); ++k) a.values[off + k] = ch[k];
        pos = run_witness_phase(c.program, pos, f, inputs, a.values);
    }
    return a;
}

std::function<void(uint32_t, std::vector<Fp>&)> make_round_filler(const CompiledCircuit& c,
                                                                  std::vector<double> inputs) {
    auto pos = std::make_shared<size_t>(0);
    return [&c, inputs = std::move(inputs), pos](uint32_t round, std::vector<Fp>& z) {
        (void)round;
        *pos = run_witness_phase(c.program, *pos, c.cs.field(), inputs, z);
    };
}

// ---- reference pipelines -------------------------------------------------------

namespace {

struct RefTensor {
    std::vector<uint32_t> shape;
    std::vector<QuantizedValue> vals;
    uint32_t precision = 0;
};

RefTensor ref_matvec(const PrimeField& f, const Matrix& w_mat, const std::vector<double>& bias,
                     const RefTensor& x, uint32_t rho, double weight_scale = 1.0) {
    RefTensor out;
    out.shape = {uint32_t(w_mat.size())};
    out.precision = x.precision + rho;
    for (size_t j = 0; j < w_mat.size(); ++j) {
        QuantizedValue acc{f.zero(), out.precision};
        for (size_t i = 0; i < w_mat[j].size(); ++i) {
            QuantizedValue w{quantize_at(f, w_mat[j][i] * weight_scale, rho)};
            acc = q_add(acc, q_mul(w, x.vals[i]));
        }
        if (j < bias.size() && bias[j] != 0)
            acc = q_add(acc, quantize_at(f, bias[j], out.precision));
        out.vals.push_back(acc);
    }
    return out;
}

RefTensor ref_activation(const RefTensor& in, Activation act, uint32_t leaky_shift, uint32_t rho) {
    if (act == Activation::none) return in;
    uint32_t cut = in.precision - rho;
    RefTensor out;
    out.shape = in.shape;
    for (const QuantizedValue& v : in.vals) {
        QuantizedValue r = v;
        switch (act) {
            case Activation::relu: r = ref::relu(v, cut); break;
            case Activation::leaky_relu: r = ref::leaky_relu(v, leaky_shift, cut); break;
            case Activation::relu6: r = ref::relu6(v, cut); break;
            case Activation::hard_sigmoid: r = ref::hard_sigmoid(v, rho, cut); break;
            case Activation::hard_swish: r = ref::hard_swish(v, rho, cut); break;
            default: break;
        }
        out.vals.push_back(r);
    }
    out.precision = out.vals.empty() ? in.precision : out.vals[0].effective_precision;
    return out;
}

QuantizedValue ref_scale_up(const PrimeField& f, const QuantizedValue& v, uint32_t target) {
    if (v.effective_precision == target) return v;
    return QuantizedValue{v.value * pow2(f, target - v.effective_precision), target};
}

}  // namespace

ReferenceOutput reference_eval(const ModelGraph& g, const PrimeField& f,
                               std::span<const double> inputs) {
    uint32_t rho = g.rho;
    RefTensor cur;
    cur.shape = g.input_shape;
    cur.precision = rho;
    for (double x : inputs) cur.vals.push_back(quantize_at(f, x, rho));

    for (const LayerSpec& spec : g.layers) {
        std::visit(
            [&](const auto& layer) {
                using T = std::decay_t<decltype(layer)>;
                if constexpr (std::is_same_v<T, FlattenLayer>) {
                    cur.shape = {uint32_t(cur.vals.size())};
                } else if constexpr (std::is_same_v<T, DenseLayer>) {
                    RefTensor z = ref_matvec(f, layer.weights, layer.bias, cur, rho);
                    cur = ref_activation(z, layer.act, layer.leaky_shift, rho);
                } else if constexpr (std::is_same_v<T, EdLayer>) {
                    RefTensor input = cur;
                    RefTensor enc = ref_matvec(f, layer.we, {}, input, rho);
                    RefTensor act = ref_activation(enc, layer.act, 2, rho);
                    RefTensor dec = ref_matvec(f, layer.wd, {}, act, rho);
                    if (layer.residual) {
                        uint32_t target = std::max(dec.precision, input.precision);
                        for (size_t i = 0; i < dec.vals.size(); ++i)
                            dec.vals[i] = q_add(ref_scale_up(f, dec.vals[i], target),
                                                ref_scale_up(f, input.vals[i], target));
                        dec.precision = target;
                    }
                    cur = std::move(dec);
                } else if constexpr (std::is_same_v<T, SeBlock>) {
                    uint32_t W = cur.shape[0], H = cur.shape[1], C = cur.shape[2];
                    uint32_t cw = W / layer.grid_w, ch = H / layer.grid_h;
                    RefTensor gated;
                    gated.shape = cur.shape;
                    gated.vals.resize(cur.vals.size(), QuantizedValue{f.zero(), 0});
                    for (uint32_t gi = 0; gi < layer.grid_w; ++gi) {
                        for (uint32_t gj = 0; gj < layer.grid_h; ++gj) {
                            RefTensor pooled;
                            pooled.shape = {C};
                            pooled.precision = cur.precision;
                            for (uint32_t c = 0; c < C; ++c) {
                                QuantizedValue s{f.zero(), cur.precision};
                                for (uint32_t i = 0; i < cw; ++i)
                                    for (uint32_t j = 0; j < ch; ++j)
                                        s = q_add(s, cur.vals[flat3(cur.shape, gi * cw + i,
                                                                    gj * ch + j, c)]);
                                pooled.vals.push_back(s);
                            }
                            RefTensor enc = ref_matvec(f, layer.we, {}, pooled, rho,
                                                       1.0 / (double(cw) * ch));
                            RefTensor hid = ref_activation(enc, Activation::relu, 2, rho);
                            RefTensor dec = ref_matvec(f, layer.wd, {}, hid, rho);
                            RefTensor gate = ref_activation(dec, Activation::hard_sigmoid, 2, rho);
                            for (uint32_t c = 0; c < C; ++c)
                                for (uint32_t i = 0; i < cw; ++i)
                                    for (uint32_t j = 0; j < ch; ++j) {
                                        size_t idx = flat3(cur.shape, gi * cw + i, gj * ch + j, c);
                                        gated.vals[idx] = q_mul(gate.vals[c], cur.vals[idx]);
                                    }
                        }
                    }
                    gated.precision = gated.vals[0].effective_precision;
                    cur = std::move(gated);
                } else if constexpr (std::is_same_v<T, EdConv>) {
                    uint32_t W = cur.shape[0], H = cur.shape[1], C = cur.shape[2];
                    uint32_t P = layer.patch;
                    uint32_t bw = W / P, bh = H / P;
                    uint32_t ow = layer.out_w / P, oh = layer.out_h / P;
                    RefTensor out;
                    out.shape = {layer.out_w, layer.out_h, layer.out_c};
                    out.vals.resize(volume(out.shape), QuantizedValue{f.zero(), 0});
                    for (uint32_t bi = 0; bi < P; ++bi)
                        for (uint32_t bj = 0; bj < P; ++bj) {
                            RefTensor block;
                            block.shape = {uint32_t(bw * bh * C)};
                            block.precision = cur.precision;
                            for (uint32_t i = 0; i < bw; ++i)
                                for (uint32_t j = 0; j < bh; ++j)
                                    for (uint32_t c = 0; c < C; ++c)
                                        block.vals.push_back(cur.vals[flat3(
                                            cur.shape, bi * bw + i, bj * bh + j, c)]);
                            RefTensor enc = ref_matvec(f, layer.we, {}, block, rho);
                            RefTensor hid = ref_activation(enc, layer.act, 2, rho);
                            RefTensor dec = ref_matvec(f, layer.wd, {}, hid, rho);
                            size_t bidx = 0;
                            for (uint32_t i = 0; i < ow; ++i)
                                for (uint32_t j = 0; j < oh; ++j)
                                    for (uint32_t c = 0; c < layer.out_c; ++c)
                                        out.vals[flat3(out.shape, bi * ow + i, bj * oh + j, c)] =
                                            dec.vals[bidx++];
                            out.precision = dec.precision;
                        }
                    cur = std::move(out);
                }
            },
            spec);
    }
    return ReferenceOutput{std::move(cur.vals), cur.precision};
}

std::vector<double> reference_float(const ModelGraph& g, std::span<const double> inputs) {
    std::vector<double> cur(inputs.begin(), inputs.end());
    std::vector<uint32_t> shape = g.input_shape;
    auto act_fn = [](Activation a, double x, uint32_t shift) {
        switch (a) {
            case Activation::relu: return std::max(0.0, x);
            case Activation::leaky_relu: return x >= 0 ? x : std::ldexp(x, -int(shift));
            case Activation::relu6: return std::min(6.0, std::max(0.0, x));
            case Activation::hard_sigmoid:
                return std::min(1.0, std::max(0.0, (x + 3) / 6));
            case Activation::hard_swish:
                return x * std::min(1.0, std::max(0.0, (x + 3) / 6));
            default: return x;
        }
    };
    auto mv = [](const Matrix& w, const std::vector<double>& b, const std::vector<double>& x,
                 double scale) {
        std::vector<double> out(w.size(), 0);
        for (size_t j = 0; j < w.size(); ++j) {
            for (size_t i = 0; i < w[j].size(); ++i) out[j] += w[j][i] * scale * x[i];
            if (j < b.size()) out[j] += b[j];
        }
        return out;
    };
    for (const LayerSpec& spec : g.layers) {
        std::visit(
            [&](const auto& layer) {
                using T = std::decay_t<decltype(layer)>;
                if constexpr (std::is_same_v<T, FlattenLayer>) {
                    shape = {uint32_t(cur.size())};
                } else if constexpr (std::is_same_v<T, DenseLayer>) {
                    cur = mv(layer.weights, layer.bias, cur, 1.0);
                    for (double& v : cur) v = act_fn(layer.act, v, layer.leaky_shift);
                    shape = {uint32_t(cur.size())};
                } else if constexpr (std::is_same_v<T, EdLayer>) {
                    std::vector<double> enc = mv(layer.we, {}, cur, 1.0);
                    for (double& v : enc) v = act_fn(layer.act, v, 2);
                    std::vector<double> dec = mv(layer.wd, {}, enc, 1.0);
                    if (layer.residual)
                        for (size_t i = 0; i < dec.size(); ++i) dec[i] += cur[i];
                    cur = std::move(dec);
                    shape = {uint32_t(cur.size())};
                } else if constexpr (std::is_same_v<T, SeBlock>) {
                    uint32_t W = shape[0], H = shape[1], C = shape[2];
                    uint32_t cw = W / layer.grid_w, ch = H / layer.grid_h;
                    std::vector<double> out(cur.size());
                    for (uint32_t gi = 0; gi < layer.grid_w; ++gi)
                        for (uint32_t gj = 0; gj < layer.grid_h; ++gj) {
                            std::vector<double> pooled(C, 0);
                            for (uint32_t c = 0; c < C; ++c)
                                for (uint32_t i = 0; i < cw; ++i)
                                    for (uint32_t j = 0; j < ch; ++j)
                                        pooled[c] += cur[flat3(shape, gi * cw + i, gj * ch + j, c)];
                            std::vector<double> enc =
                                mv(layer.we, {}, pooled, 1.0 / (double(cw) * ch));
                            for (double& v : enc) v = act_fn(Activation::relu, v, 2);
                            std::vector<double> gate = mv(layer.wd, {}, enc, 1.0);
                            for (double& v : gate) v = act_fn(Activation::hard_sigmoid, v, 2);
                            for (uint32_t c = 0; c < C; ++c)
                                for (uint32_t i = 0; i < cw; ++i)
                                    for (uint32_t j = 0; j < ch; ++j) {
                                        size_t idx = flat3(shape, gi * cw + i, gj * ch + j, c);
                                        out[idx] = gate[c] * cur[idx];
                                    }
                        }
                    cur = std::move(out);
                } else if constexpr (std::is_same_v<T, EdConv>) {
                    uint32_t W = shape[0], H = shape[1], C = shape[2];
                    uint32_t P = layer.patch;
                    uint32_t bw = W / P, bh = H / P;
                    uint32_t ow = layer.out_w / P, oh = layer.out_h / P;
                    std::vector<uint32_t> oshape{layer.out_w, layer.out_h, layer.out_c};
                    std::vector<double> out(volume(oshape));
                    for (uint32_t bi = 0; bi < P; ++bi)
                        for (uint32_t bj = 0; bj < P; ++bj) {
                            std::vector<double> block;
                            for (uint32_t i = 0; i < bw; ++i)
                                for (uint32_t j = 0; j < bh; ++j)
                                    for (uint32_t c = 0; c < C; ++c)
                                        block.push_back(
                                            cur[flat3(shape, bi * bw + i, bj * bh + j, c)]);
                            std::vector<double> enc = mv(layer.we, {}, block, 1.0);
                            for (double& v : enc) v = act_fn(layer.act, v, 2);
                            std::vector<double> dec = mv(layer.wd, {}, enc, 1.0);
                            size_t bidx = 0;
                            for (uint32_t i = 0; i < ow; ++i)
                                for (uint32_t j = 0; j < oh; ++j)
                                    for (uint32_t c = 0; c < layer.out_c; ++c)
                                        out[flat3(oshape, bi * ow + i, bj * oh + j, c)] =
                                            dec[bidx++];
                        }
                    shape = oshape;
                    cur = std::move(out);
                }
            },
            spec);
    }
    return cur;
}

}  // namespace unr
