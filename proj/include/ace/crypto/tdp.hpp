#pragma once

#include <memory>

#include "ace/bytes.hpp"
#include "ace/crypto/group.hpp"
#include "ace/crypto/random.hpp"

namespace ace {

// Fixed serialized width of a permutation-domain value (2048-bit modulus).
constexpr size_t kPermDomainBytes = 256;

// Integer in [0, modulus), big-endian, zero-padded to the fixed width.
struct PermDomainValue {
    Bytes be;  // always kPermDomainBytes long

    bool operator==(const PermDomainValue&) const = default;
};

namespace detail {
struct TdpState;
}

// Public half of the trapdoor permutation: x -> x^e mod n.
class TdpPublicKey {
public:
    PermDomainValue forward(const PermDomainValue& x) const;

    size_t modulus_bits() const;
    Bytes modulus_be() const;

    Bytes serialize() const;
    static TdpPublicKey deserialize(ByteView data);

private:
    friend class TdpSecretKey;
    explicit TdpPublicKey(std::shared_ptr<detail::TdpState> state) : state_(std::move(state)) {}
    std::shared_ptr<detail::TdpState> state_;
};

// Full keypair: adds the inverse x -> x^d mod n (CRT form internally).
class TdpSecretKey {
public:
    PermDomainValue inverse(const PermDomainValue& x) const;
    TdpPublicKey public_key() const;

    size_t modulus_bits() const;
    Bytes modulus_be() const;

    // Deep copy with independent internal state; hands parallel workers a
    // key they can use without sharing blinding locks.
    TdpSecretKey clone() const;

    Bytes serialize() const;
    static TdpSecretKey deserialize(ByteView data);

private:
    friend TdpSecretKey tdp_keygen(unsigned bits, RandomSource& rng);
    explicit TdpSecretKey(std::shared_ptr<detail::TdpState> state) : state_(std::move(state)) {}
    std::shared_ptr<detail::TdpState> state_;
};

// RSA keypair with primes drawn from the given randomness source, so seeded
// runs generate identical keys. bits must be in [512, 2048] and even.
TdpSecretKey tdp_keygen(unsigned bits, RandomSource& rng);

// Uniform domain value in {2, ..., modulus-1}; the trivial fixed points 0
// and 1 are excluded so chains never degenerate.
PermDomainValue tdp_sample_domain(const TdpPublicKey& pk, RandomSource& rng);

// Checks width and range against the modulus.
PermDomainValue perm_value_from_bytes(ByteView be, const TdpPublicKey& pk);

// ST mod p. Throws ZeroResidueFault when the residue is zero; callers abort
// the enclosing batch.
Scalar reduce_to_scalar(const PermDomainValue& x, const PrimeOrderGroup& group);

}  // namespace ace
