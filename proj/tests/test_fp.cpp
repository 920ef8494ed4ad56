#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "unr/fields.hpp"
#include "unr/fp.hpp"
#include "unr/rng.hpp"
#include "unr/sha256.hpp"

using namespace unr;

TEST_CASE("sha256 FIPS vectors") {
    auto d1 = Sha256::digest(reinterpret_cast<const uint8_t*>("abc"), 3);
    CHECK(hex_encode(Bytes(d1.begin(), d1.end())) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    auto d2 = Sha256::digest(nullptr, 0);
    CHECK(hex_encode(Bytes(d2.begin(), d2.end())) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    // multi-block input
    std::string long_msg(200, 'a');
    auto d3 = Sha256::digest(reinterpret_cast<const uint8_t*>(long_msg.data()), long_msg.size());
    Sha256 h;
    h.update(reinterpret_cast<const uint8_t*>(long_msg.data()), 77);
    h.update(reinterpret_cast<const uint8_t*>(long_msg.data()) + 77, 123);
    CHECK(h.finish() == d3);
}

TEST_CASE("field parameters") {
    CHECK(test_field().bit_size() == 20);
    CHECK(test_field().two_adicity() == 18);
    CHECK(test_field().byte_size() == 3);
    CHECK(f9967().bit_size() == 14);
    CHECK(f9967().two_adicity() == 1);
    CHECK(f9967().byte_size() == 2);
    CHECK(bn254_fr().bit_size() == 254);
    CHECK(bn254_fr().two_adicity() == 28);
    CHECK(bn254_fr().byte_size() == 32);
    CHECK(bn254_fq().bit_size() == 254);
}

TEST_CASE("field axioms on random triples") {
    SeededRng rng(42);
    const PrimeField& f = test_field();
    for (int i = 0; i < 10000; ++i) {
        Fp a = rng.sample(f), b = rng.sample(f), c = rng.sample(f);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
    }
    const PrimeField& big = bn254_fr();
    for (int i = 0; i < 500; ++i) {
        Fp a = rng.sample(big), b = rng.sample(big), c = rng.sample(big);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a - b) + b == a);
    }
}

TEST_CASE("negatives multiply: (-2)(-3) = 6 over bn254") {
    const PrimeField& f = bn254_fr();
    Fp a = -f.from_u64(2);
    Fp b = -f.from_u64(3);
    CHECK(a * b == f.from_u64(6));
}

TEST_CASE("inverse and pow") {
    SeededRng rng(7);
    for (const PrimeField* f : {&test_field(), &bn254_fr(), &f9967()}) {
        for (int i = 0; i < 64; ++i) {
            Fp x = rng.sample_nonzero(*f);
            CHECK(x * x.inverse() == f->one());
            CHECK(x.pow(uint64_t(5)) == x * x * x * x * x);
        }
        CHECK_THROWS(f->zero().inverse());
    }
}

TEST_CASE("sqrt roundtrip") {
    SeededRng rng(9);
    for (const PrimeField* f : {&test_field(), &bn254_fq()}) {
        int residues = 0;
        for (int i = 0; i < 50; ++i) {
            Fp x = rng.sample_nonzero(*f);
            Fp sq = x * x;
            auto root = sq.sqrt();
            REQUIRE(root.has_value());
            CHECK(*root * *root == sq);
            if (x.sqrt()) ++residues;
        }
        CHECK(residues > 5);
        CHECK(residues < 45);
    }
}

TEST_CASE("two-adic roots of unity") {
    const PrimeField& f = test_field();
    Fp w = f.root_of_unity(3);  // primitive 8th root
    CHECK(w.pow(uint64_t(8)) == f.one());
    CHECK(!(w.pow(uint64_t(4)) == f.one()));
    CHECK_THROWS(f9967().root_of_unity(4));
}

TEST_CASE("signed encode/decode golden vectors over F_9967") {
    const PrimeField& f = f9967();
    CHECK(signed_encode(f, -10).canonical_u64() == 9957);
    SignedValue sv = signed_decode(f.from_u64(9907));
    CHECK(sv.negative);
    CHECK(sv.magnitude[0] == 60);
    CHECK(sv.to_i128() == -60);
    CHECK(signed_encode(f, 0).is_zero());
    // positive values below the 2^13 threshold decode to themselves
    CHECK(signed_decode(f.from_u64(8191)).to_i128() == 8191);
    CHECK(signed_decode(f.from_u64(8192)).to_i128() == 8192 - 9967);
}

TEST_CASE("signed encode/decode roundtrip exhaustive on small field") {
    // the exact domain is asymmetric: positives below 2^13, negative
    // magnitudes at most p - 2^13 = 1775
    const PrimeField& f = f9967();
    for (__int128 x = -1775; x < (1 << 13); ++x) {
        Fp e = signed_encode(f, x);
        CHECK(signed_decode(e).to_i128() == x);
    }
    CHECK_THROWS(signed_encode(f, 1 << 13));
    CHECK_THROWS(signed_encode(f, -1776));
    // same spot check on the 20-bit test field: p - 2^19 = 262145
    const PrimeField& t = test_field();
    CHECK(signed_decode(signed_encode(t, -262145)).to_i128() == -262145);
    CHECK_THROWS(signed_encode(t, -262146));
}

TEST_CASE("batch_invert") {
    const PrimeField& f = f9967();
    // [1] -> [1]
    std::vector<Fp> one{f.one()};
    CHECK(batch_invert(one)[0] == f.one());
    // [2,4]: elementwise inverses, checked against the extended-GCD oracle
    std::vector<Fp> vals{f.from_u64(2), f.from_u64(4)};
    auto inv = batch_invert(vals);
    for (size_t i = 0; i < vals.size(); ++i) {
        CHECK(inv[i] * vals[i] == f.one());
        CHECK(inv[i].canonical_u64() == oracle::inverse_u64(vals[i].canonical_u64(), 9967));
    }
    // empty
    CHECK(batch_invert(std::span<const Fp>{}).empty());
    // zero input names the index
    std::vector<Fp> with_zero{f.one(), f.zero(), f.from_u64(3)};
    CHECK_THROWS_WITH_AS(batch_invert(with_zero), "batch_invert: zero at index 1",
                         std::domain_error);
    // larger batch against the oracle
    SeededRng rng(11);
    std::vector<Fp> many;
    for (int i = 0; i < 100; ++i) many.push_back(rng.sample_nonzero(f));
    auto many_inv = batch_invert(many);
    for (size_t i = 0; i < many.size(); ++i)
        CHECK(many_inv[i].canonical_u64() == oracle::inverse_u64(many[i].canonical_u64(), 9967));
}

TEST_CASE("canonical byte serialization") {
    SeededRng rng(3);
    for (const PrimeField* f : {&f9967(), &test_field(), &bn254_fr()}) {
        for (int i = 0; i < 32; ++i) {
            Fp x = rng.sample(*f);
            Bytes b = x.to_bytes();
            CHECK(b.size() == f->byte_size());
            CHECK(f->from_bytes(b) == x);
        }
    }
    // fixed-width little-endian: 258 = 0x0102 over the 3-byte test field
    Bytes b = test_field().from_u64(258).to_bytes();
    REQUIRE(b.size() == 3);
    CHECK(b[0] == 2);
    CHECK(b[1] == 1);
    CHECK(b[2] == 0);
    CHECK_THROWS(test_field().from_bytes(Bytes{1, 2}));
}

TEST_CASE("from_bytes_reduce folds mod p") {
    const PrimeField& f = test_field();
    // bytes of p itself reduce to zero
    U256 p = f.modulus();
    Bytes pb(8);
    for (int i = 0; i < 8; ++i) pb[i] = uint8_t(p[0] >> (8 * i));
    CHECK(f.from_bytes_reduce(pb).is_zero());
    // p + 5 reduces to 5
    U256 p5 = p;
    u256::add(p5, u256::from_u64(5));
    for (int i = 0; i < 8; ++i) pb[i] = uint8_t(p5[0] >> (8 * i));
    CHECK(f.from_bytes_reduce(pb) == f.from_u64(5));
}
