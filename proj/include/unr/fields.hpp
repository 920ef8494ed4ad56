#pragma once

#include "unr/fp.hpp"

namespace unr {

// Canonical field configurations. bn254_fr is the scalar field of the real
// pairing backend; test_field is a small 20-bit prime with two_adicity 18 for
// brute-force suites; f9967 is the 14-bit prime the quantization golden
// vectors run over (two_adicity 1, Lagrange paths only).
const PrimeField& bn254_fr();
const PrimeField& bn254_fq();
const PrimeField& test_field();   // 786433 = 3*2^18 + 1
const PrimeField& f9967();

// Lookup by modulus, used when loading circuit files.
const PrimeField* find_known_field(const U256& modulus);

}  // namespace unr
