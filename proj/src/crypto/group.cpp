#include "ace/crypto/group.hpp"

#include <openssl/bn.h>
#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <memory>

#include "ace/crypto/counters.hpp"
#include "ace/errors.hpp"

namespace ace {

namespace {

struct BnDeleter {
    void operator()(BIGNUM* bn) const { BN_free(bn); }
    void operator()(BN_CTX* ctx) const { BN_CTX_free(ctx); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnDeleter>;

ScalarBytes reverse32(const ScalarBytes& in) {
    ScalarBytes out;
    std::reverse_copy(in.begin(), in.end(), out.begin());
    return out;
}

bool is_zero32(const ScalarBytes& b) {
    uint8_t acc = 0;
    for (uint8_t v : b) acc |= v;
    return acc == 0;
}

// Lexicographic compare of equal-width big-endian values == numeric compare.
bool lt_be(const ScalarBytes& a, const ScalarBytes& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

ScalarBytes PrimeOrderGroup::reduce_be(ByteView be) const {
    BnCtxPtr ctx(BN_CTX_new());
    BnPtr x(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr));
    ScalarBytes order = order_be();
    BnPtr ord(BN_bin2bn(order.data(), static_cast<int>(order.size()), nullptr));
    BnPtr r(BN_new());
    if (!x || !ord || !r || !ctx) throw Error("bignum allocation failed");
    if (BN_mod(r.get(), x.get(), ord.get(), ctx.get()) != 1) {
        throw Error("modular reduction failed");
    }
    ScalarBytes out{};
    if (BN_bn2binpad(r.get(), out.data(), static_cast<int>(out.size())) < 0) {
        throw Error("reduced value does not fit scalar width");
    }
    return out;
}

Scalar PrimeOrderGroup::scalar_from_be(ByteView be32) const {
    if (be32.size() != kScalarBytes) {
        throw DomainError("scalar encoding must be 32 bytes");
    }
    ScalarBytes b = to_array<kScalarBytes>(be32);
    if (is_zero32(b)) {
        throw DomainError("scalar must be nonzero");
    }
    ScalarBytes order = order_be();
    if (!lt_be(b, order)) {
        throw DomainError("scalar not below group order");
    }
    return make_scalar(b);
}

Scalar PrimeOrderGroup::scalar_from_u64(uint64_t v) const {
    ScalarBytes b{};
    for (int i = 0; i < 8; ++i) b[31 - i] = static_cast<uint8_t>(v >> (8 * i));
    return scalar_from_be(b);
}

Scalar PrimeOrderGroup::random_scalar(RandomSource& rng) const {
    for (;;) {
        Bytes wide = rng.bytes(64);
        ScalarBytes r = reduce_be(wide);
        if (!is_zero32(r)) {
            return make_scalar(r);
        }
    }
}

namespace {

// --- ristretto255 backend -------------------------------------------------

class RistrettoGroup final : public PrimeOrderGroup {
public:
    RistrettoGroup() {
        if (sodium_init() < 0) throw Error("libsodium initialization failed");
    }

    std::string_view id() const override { return "ristretto255"; }
    size_t element_width() const override { return crypto_core_ristretto255_BYTES; }

    ScalarBytes order_be() const override {
        // 2^252 + 27742317777372353535851937790883648493
        return ScalarBytes{0x10, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
                           0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
                           0x14, 0xde, 0xf9, 0xde, 0xa2, 0xf7, 0x9c, 0xd6,
                           0x58, 0x12, 0x63, 0x1a, 0x5c, 0xf5, 0xd3, 0xed};
    }

    GroupElement generator() const override {
        ScalarBytes one_le{};
        one_le[0] = 1;
        GroupElement g;
        g.data.resize(crypto_core_ristretto255_BYTES);
        if (crypto_scalarmult_ristretto255_base(g.data.data(), one_le.data()) != 0) {
            throw Error("ristretto generator derivation failed");
        }
        return g;
    }

    GroupElement exp_base(const Scalar& s) const override {
        counters::bump(counters::Kind::group_exp);
        ScalarBytes le = reverse32(s.be());
        GroupElement out;
        out.data.resize(crypto_core_ristretto255_BYTES);
        if (crypto_scalarmult_ristretto255_base(out.data.data(), le.data()) != 0) {
            throw DomainError("ristretto base exponentiation rejected scalar");
        }
        return out;
    }

    GroupElement exp(const GroupElement& base, const Scalar& s) const override {
        counters::bump(counters::Kind::group_exp);
        if (base.data.size() != crypto_core_ristretto255_BYTES) {
            throw DomainError("element has wrong width");
        }
        ScalarBytes le = reverse32(s.be());
        GroupElement out;
        out.data.resize(crypto_core_ristretto255_BYTES);
        if (crypto_scalarmult_ristretto255(out.data.data(), le.data(), base.data.data()) != 0) {
            throw DomainError("ristretto exponentiation yielded identity");
        }
        return out;
    }

    Scalar scalar_mul(const Scalar& a, const Scalar& b) const override {
        ScalarBytes al = reverse32(a.be()), bl = reverse32(b.be()), rl{};
        crypto_core_ristretto255_scalar_mul(rl.data(), al.data(), bl.data());
        return make_scalar(reverse32(rl));
    }

    Scalar scalar_inv(const Scalar& a) const override {
        ScalarBytes al = reverse32(a.be()), rl{};
        if (crypto_core_ristretto255_scalar_invert(rl.data(), al.data()) != 0) {
            throw DomainError("scalar inversion of zero");
        }
        return make_scalar(reverse32(rl));
    }

    GroupElement element_from_bytes(ByteView bytes) const override {
        if (bytes.size() != crypto_core_ristretto255_BYTES) {
            throw DomainError("element encoding must be 32 bytes");
        }
        if (crypto_core_ristretto255_is_valid_point(bytes.data()) != 1) {
            throw DomainError("invalid ristretto255 encoding");
        }
        return GroupElement{Bytes(bytes.begin(), bytes.end())};
    }

    GroupElement random_element(RandomSource& rng) const override {
        uint8_t h[64];
        rng.fill(h, sizeof h);
        GroupElement out;
        out.data.resize(crypto_core_ristretto255_BYTES);
        crypto_core_ristretto255_from_hash(out.data.data(), h);
        return out;
    }
};

// --- brute-force-checkable backend -----------------------------------------
//
// Subgroup of quadratic residues mod the safe prime 2039; prime order 1019,
// generator 4. Elements are 8-byte big-endian residues.

constexpr uint64_t kTinyP = 2039;
constexpr uint64_t kTinyOrder = 1019;
constexpr uint64_t kTinyGen = 4;

uint64_t tiny_modpow(uint64_t base, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (e > 0) {
        if (e & 1) r = (r * base) % m;
        base = (base * base) % m;
        e >>= 1;
    }
    return r;
}

class TinyGroup final : public PrimeOrderGroup {
public:
    std::string_view id() const override { return "tiny2039"; }
    size_t element_width() const override { return 8; }

    ScalarBytes order_be() const override {
        ScalarBytes b{};
        b[30] = static_cast<uint8_t>(kTinyOrder >> 8);
        b[31] = static_cast<uint8_t>(kTinyOrder & 0xFF);
        return b;
    }

    GroupElement generator() const override { return encode(kTinyGen); }

    GroupElement exp_base(const Scalar& s) const override {
        counters::bump(counters::Kind::group_exp);
        return encode(tiny_modpow(kTinyGen, scalar_value(s), kTinyP));
    }

    GroupElement exp(const GroupElement& base, const Scalar& s) const override {
        counters::bump(counters::Kind::group_exp);
        return encode(tiny_modpow(decode(base), scalar_value(s), kTinyP));
    }

    Scalar scalar_mul(const Scalar& a, const Scalar& b) const override {
        uint64_t r = (scalar_value(a) * scalar_value(b)) % kTinyOrder;
        return make_scalar(u64_be(r));
    }

    Scalar scalar_inv(const Scalar& a) const override {
        // Fermat inversion in the prime field of exponents.
        uint64_t r = tiny_modpow(scalar_value(a), kTinyOrder - 2, kTinyOrder);
        return make_scalar(u64_be(r));
    }

    GroupElement element_from_bytes(ByteView bytes) const override {
        if (bytes.size() != 8) throw DomainError("element encoding must be 8 bytes");
        uint64_t v = 0;
        for (uint8_t b : bytes) v = (v << 8) | b;
        if (v == 0 || v >= kTinyP) throw DomainError("element out of field range");
        if (tiny_modpow(v, kTinyOrder, kTinyP) != 1) {
            throw DomainError("element outside prime-order subgroup");
        }
        return GroupElement{Bytes(bytes.begin(), bytes.end())};
    }

    GroupElement random_element(RandomSource& rng) const override {
        // Uniform over the subgroup: g^u for uniform exponent u in [0, q).
        uint64_t u = rng.uniform(kTinyOrder);
        return encode(tiny_modpow(kTinyGen, u, kTinyP));
    }

private:
    static uint64_t scalar_value(const Scalar& s) {
        uint64_t v = 0;
        for (size_t i = 24; i < 32; ++i) v = (v << 8) | s.be()[i];
        return v;
    }

    static ScalarBytes u64_be(uint64_t v) {
        ScalarBytes b{};
        for (int i = 0; i < 8; ++i) b[31 - i] = static_cast<uint8_t>(v >> (8 * i));
        return b;
    }

    static GroupElement encode(uint64_t v) {
        GroupElement e;
        e.data.resize(8);
        for (int i = 0; i < 8; ++i) e.data[7 - i] = static_cast<uint8_t>(v >> (8 * i));
        return e;
    }

    static uint64_t decode(const GroupElement& e) {
        if (e.data.size() != 8) throw DomainError("element has wrong width");
        uint64_t v = 0;
        for (uint8_t b : e.data) v = (v << 8) | b;
        return v;
    }
};

}  // namespace

const PrimeOrderGroup& ristretto_group() {
    static RistrettoGroup g;
    return g;
}

const PrimeOrderGroup& tiny_group() {
    static TinyGroup g;
    return g;
}

const PrimeOrderGroup& group_by_id(std::string_view id) {
    if (id == ristretto_group().id()) return ristretto_group();
    if (id == tiny_group().id()) return tiny_group();
    throw DomainError("unknown group id: " + std::string(id));
}

}  // namespace ace
