#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "ace/bytes.hpp"
#include "ace/crypto/random.hpp"

namespace ace {

constexpr size_t kScalarBytes = 32;
using ScalarBytes = std::array<uint8_t, kScalarBytes>;

class PrimeOrderGroup;

// Nonzero residue modulo the group order, held as its canonical 32-byte
// big-endian encoding. Constructed only through a PrimeOrderGroup so the
// nonzero and range invariants always hold.
class Scalar {
public:
    const ScalarBytes& be() const { return be_; }
    bool operator==(const Scalar&) const = default;

private:
    friend class PrimeOrderGroup;
    explicit Scalar(const ScalarBytes& be) : be_(be) {}
    ScalarBytes be_;
};

// Canonical fixed-width element encoding; width is a group parameter.
struct GroupElement {
    Bytes data;
    bool operator==(const GroupElement&) const = default;
};

// Prime-order group interface. Two backends are provided: ristretto255
// (production, order ~2^252) and a subgroup of prime order 1019 inside
// Z*_2039 whose algebra small tests can check exhaustively.
class PrimeOrderGroup {
public:
    virtual ~PrimeOrderGroup() = default;

    virtual std::string_view id() const = 0;
    virtual size_t element_width() const = 0;
    virtual ScalarBytes order_be() const = 0;
    virtual GroupElement generator() const = 0;

    // g^s and base^s; each counts as one group exponentiation.
    virtual GroupElement exp_base(const Scalar& s) const = 0;
    virtual GroupElement exp(const GroupElement& base, const Scalar& s) const = 0;

    virtual Scalar scalar_mul(const Scalar& a, const Scalar& b) const = 0;
    virtual Scalar scalar_inv(const Scalar& a) const = 0;

    // Reduces an arbitrary-width big-endian integer modulo the order.
    // The result may be zero; callers needing Z*_p must handle that case.
    ScalarBytes reduce_be(ByteView be) const;

    // Validates range (nonzero, below order) and wraps.
    Scalar scalar_from_be(ByteView be32) const;
    Scalar scalar_from_u64(uint64_t v) const;
    Scalar random_scalar(RandomSource& rng) const;

    // Validates the encoding and subgroup membership.
    virtual GroupElement element_from_bytes(ByteView bytes) const = 0;
    virtual GroupElement random_element(RandomSource& rng) const = 0;

protected:
    static Scalar make_scalar(const ScalarBytes& be) { return Scalar(be); }
};

const PrimeOrderGroup& ristretto_group();
const PrimeOrderGroup& tiny_group();
const PrimeOrderGroup& group_by_id(std::string_view id);

}  // namespace ace
