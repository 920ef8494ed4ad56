#include "unr/proving.hpp"

namespace unr {

namespace {

Fp fs_digest(const PrimeField& f, std::string_view tag, uint8_t type_byte, const Fp& acc,
             std::span<const uint8_t> payload) {
    Sha256 h;
    h.update(reinterpret_cast<const uint8_t*>(tag.data()), tag.size());
    uint8_t ver = uint8_t(kFormatVersion);
    h.update(&ver, 1);
    h.update(&type_byte, 1);
    Bytes ab = acc.to_bytes();
    h.update(ab);
    h.update(payload.data(), payload.size());
    auto digest = h.finish();
    return f.from_bytes_reduce(std::span<const uint8_t>(digest.data(), digest.size()));
}

}  // namespace

Fp fs_accumulate(const PrimeField& f, std::string_view domain_tag, const Fp& acc,
                 std::span<const uint8_t> element_bytes) {
    return fs_digest(f, domain_tag, 1, acc, element_bytes);
}

Fp fs_index(const PrimeField& f, std::string_view domain_tag, const Fp& acc, uint64_t index) {
    uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = uint8_t(index >> (8 * i));
    return fs_digest(f, domain_tag, 2, acc, std::span<const uint8_t>(buf, 8));
}

Fp fs_init(const PrimeField& f, std::span<const uint8_t> vk_digest) {
    return f.from_bytes_reduce(vk_digest);
}

Bytes serialize_trapdoor(const Trapdoor& td) {
    ByteWriter w;
    w.raw(reinterpret_cast<const uint8_t*>("UNTD"), 4);
    w.u32(kFormatVersion);
    td.alpha.write_bytes(w);
    td.beta.write_bytes(w);
    td.gamma.write_bytes(w);
    td.tau.write_bytes(w);
    w.varint(td.delta.size());
    for (const Fp& d : td.delta) d.write_bytes(w);
    return w.take();
}

Trapdoor deserialize_trapdoor(const PrimeField& f, const Bytes& data) {
    ByteReader r(data);
    Bytes magic = r.raw(4);
    if (std::string(magic.begin(), magic.end()) != "UNTD")
        throw std::runtime_error("not a trapdoor file");
    if (r.u32() != kFormatVersion) throw std::runtime_error("unsupported trapdoor version");
    Trapdoor td;
    td.alpha = f.from_bytes(r.raw(f.byte_size()));
    td.beta = f.from_bytes(r.raw(f.byte_size()));
    td.gamma = f.from_bytes(r.raw(f.byte_size()));
    td.tau = f.from_bytes(r.raw(f.byte_size()));
    td.delta.resize(r.varint(), f.zero());
    for (Fp& d : td.delta) d = f.from_bytes(r.raw(f.byte_size()));
    return td;
}

}  // namespace unr
