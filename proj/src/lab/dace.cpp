#include "ace/lab/dace.hpp"

#include "ace/errors.hpp"

namespace ace {

DAceInstance dace_generate(uint64_t m, uint64_t n, bool real_case, uint64_t seed,
                           unsigned perm_modulus_bits, const PrimeOrderGroup* group) {
    if (m < 1 || n < 1) {
        throw DomainError("instance dimensions must be at least 1");
    }
    DAceInstance inst;
    inst.m = m;
    inst.n = n;
    inst.real_case = real_case;
    inst.group = group ? group : &ristretto_group();
    const PrimeOrderGroup& g = *inst.group;

    DeterministicRandom rng(seed);
    TdpSecretKey sk = tdp_keygen(perm_modulus_bits, rng);
    TdpPublicKey pk = sk.public_key();

    for (uint64_t i = 0; i < m; ++i) {
        inst.exponents.push_back(g.random_scalar(rng));
    }

    // Chain with mod-p reduction; a zero residue restarts from a fresh
    // random point.
    constexpr int kMaxChainAttempts = 64;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= kMaxChainAttempts) {
            throw ZeroResidueFault("chain regeneration limit exceeded");
        }
        inst.chain.clear();
        inst.chain_reduced.clear();
        inst.divisors.clear();
        PermDomainValue current = tdp_sample_domain(pk, rng);
        bool ok = true;
        for (uint64_t j = 0; j < n; ++j) {
            inst.divisors.push_back(g.random_scalar(rng));
            current = sk.inverse(current);
            try {
                inst.chain_reduced.push_back(reduce_to_scalar(current, g));
            } catch (const ZeroResidueFault&) {
                ok = false;
                break;
            }
            inst.chain.push_back(current);
        }
        if (ok) break;
    }

    for (uint64_t i = 0; i < m; ++i) {
        for (uint64_t j = 0; j < n; ++j) {
            Scalar product = g.scalar_mul(inst.chain_reduced[j], inst.exponents[i]);
            inst.grid.push_back(g.exp_base(product));
            if (real_case) {
                Scalar masked_exp = g.scalar_mul(product, g.scalar_inv(inst.divisors[j]));
                inst.masked.push_back(g.exp_base(masked_exp));
            } else {
                inst.masked.push_back(g.random_element(rng));
            }
        }
    }
    return inst;
}

bool dace_verify_real(const DAceInstance& inst) {
    const PrimeOrderGroup& g = *inst.group;
    for (uint64_t i = 0; i < inst.m; ++i) {
        for (uint64_t j = 0; j < inst.n; ++j) {
            if (g.exp(inst.masked_at(i, j), inst.divisors[j]) != inst.grid_at(i, j)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace ace
