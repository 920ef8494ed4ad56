#include "unr/fields.hpp"

namespace unr {

namespace {

const std::shared_ptr<const PrimeField>& bn254_fr_ptr() {
    static auto f = PrimeField::create_from_decimal(
        "21888242871839275222246405745257275088548364400416034343698204186575808495617",
        "bn254-fr");
    return f;
}

const std::shared_ptr<const PrimeField>& bn254_fq_ptr() {
    static auto f = PrimeField::create_from_decimal(
        "21888242871839275222246405745257275088696311157297823662689037894645226208583",
        "bn254-fq");
    return f;
}

const std::shared_ptr<const PrimeField>& test_field_ptr() {
    static auto f = PrimeField::create_from_decimal("786433", "f786433");
    return f;
}

const std::shared_ptr<const PrimeField>& f9967_ptr() {
    static auto f = PrimeField::create_from_decimal("9967", "f9967");
    return f;
}

}  // namespace

const PrimeField& bn254_fr() { return *bn254_fr_ptr(); }
const PrimeField& bn254_fq() { return *bn254_fq_ptr(); }
const PrimeField& test_field() { return *test_field_ptr(); }
const PrimeField& f9967() { return *f9967_ptr(); }

const PrimeField* find_known_field(const U256& modulus) {
    for (const PrimeField* f : {&bn254_fr(), &bn254_fq(), &test_field(), &f9967()})
        if (f->modulus() == modulus) return f;
    return nullptr;
}

}  // namespace unr
