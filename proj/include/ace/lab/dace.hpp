#pragma once

#include <cstdint>
#include <vector>

#include "ace/crypto/group.hpp"
#include "ace/crypto/tdp.hpp"

namespace ace {

// Instance of the decisional game behind the construction's hardness
// assumption: an m x n grid where the masked points are either structured
// (g^{b_j * a_i / c_j}) or uniform, distinguished by the case bit.
struct DAceInstance {
    uint64_t m = 0;
    uint64_t n = 0;
    bool real_case = false;

    std::vector<Scalar> exponents;        // a_i, one per row
    std::vector<PermDomainValue> chain;   // b'_j, iterated inverse images
    std::vector<Scalar> chain_reduced;    // b_j = b'_j mod p, nonzero
    std::vector<Scalar> divisors;         // c_j, one per column
    std::vector<GroupElement> grid;       // I_ij = g^{b_j * a_i}, row-major
    std::vector<GroupElement> masked;     // F_ij, row-major

    const PrimeOrderGroup* group = nullptr;

    const GroupElement& grid_at(uint64_t i, uint64_t j) const { return grid[i * n + j]; }
    const GroupElement& masked_at(uint64_t i, uint64_t j) const { return masked[i * n + j]; }
};

// Builds an instance from a fresh trapdoor keypair and seeded randomness.
// A chain value reducing to zero regenerates the chain from a fresh start
// (bounded retries), mirroring the negligible failure event.
DAceInstance dace_generate(uint64_t m, uint64_t n, bool real_case, uint64_t seed,
                           unsigned perm_modulus_bits = 2048,
                           const PrimeOrderGroup* group = nullptr);

// True iff masked^{c_j} reproduces the grid everywhere, which holds exactly
// for real-case instances and fails random ones with overwhelming
// probability.
bool dace_verify_real(const DAceInstance& instance);

}  // namespace ace
