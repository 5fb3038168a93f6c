#include "ace/crypto/tdp.hpp"

#include <openssl/bn.h>
#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/param_build.h>
#include <openssl/rsa.h>

#include <cstring>

#include "ace/crypto/counters.hpp"
#include "ace/errors.hpp"

namespace ace {

namespace detail {

struct BnDeleter {
    void operator()(BIGNUM* bn) const { BN_clear_free(bn); }
    void operator()(BN_CTX* ctx) const { BN_CTX_free(ctx); }
    void operator()(EVP_PKEY* p) const { EVP_PKEY_free(p); }
    void operator()(EVP_PKEY_CTX* c) const { EVP_PKEY_CTX_free(c); }
    void operator()(OSSL_PARAM_BLD* b) const { OSSL_PARAM_BLD_free(b); }
    void operator()(OSSL_PARAM* p) const { OSSL_PARAM_free(p); }
};
using BnPtr = std::unique_ptr<BIGNUM, BnDeleter>;
using BnCtxPtr = std::unique_ptr<BN_CTX, BnDeleter>;
using PkeyPtr = std::unique_ptr<EVP_PKEY, BnDeleter>;
using PkeyCtxPtr = std::unique_ptr<EVP_PKEY_CTX, BnDeleter>;

struct TdpState {
    PkeyPtr pkey;       // private or public-only
    Bytes modulus_be;   // minimal big-endian encoding of n
    bool has_private = false;
};

namespace {

Bytes bn_to_bytes(const BIGNUM* bn) {
    Bytes out(static_cast<size_t>(BN_num_bytes(bn)));
    BN_bn2bin(bn, out.data());
    return out;
}

BnPtr bytes_to_bn(ByteView b) {
    BnPtr bn(BN_bin2bn(b.data(), static_cast<int>(b.size()), nullptr));
    if (!bn) throw Error("bignum decode failed");
    return bn;
}

// Quick small-prime sieve before the expensive primality check.
constexpr uint64_t kSmallPrimes[] = {
    3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,
    61,  67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137,
    139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227,
    229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307, 311, 313};

bool survives_sieve(const BIGNUM* candidate) {
    for (uint64_t p : kSmallPrimes) {
        BN_ULONG r = BN_mod_word(candidate, static_cast<BN_ULONG>(p));
        if (r == 0) return false;
    }
    return true;
}

BnPtr generate_prime(unsigned bits, RandomSource& rng, BN_CTX* ctx, const BIGNUM* e) {
    size_t nbytes = bits / 8;
    BnPtr candidate(BN_new());
    BnPtr pm1(BN_new());
    BnPtr gcd(BN_new());
    Bytes buf(nbytes);
    for (;;) {
        rng.fill(buf.data(), nbytes);
        buf[0] |= 0xC0;               // top two bits set so n has full width
        buf[nbytes - 1] |= 0x01;      // odd
        if (BN_bin2bn(buf.data(), static_cast<int>(nbytes), candidate.get()) == nullptr) {
            throw Error("bignum decode failed");
        }
        if (!survives_sieve(candidate.get())) continue;
        int is_prime = BN_check_prime(candidate.get(), ctx, nullptr);
        if (is_prime < 0) throw Error("primality check failed");
        if (is_prime != 1) continue;
        // Require gcd(e, p-1) = 1 so the permutation exponent is invertible.
        BN_sub(pm1.get(), candidate.get(), BN_value_one());
        BN_gcd(gcd.get(), pm1.get(), e, ctx);
        if (!BN_is_one(gcd.get())) continue;
        return candidate;
    }
}

PkeyPtr pkey_from_params(OSSL_PARAM* params, int selection) {
    PkeyCtxPtr fctx(EVP_PKEY_CTX_new_from_name(nullptr, "RSA", nullptr));
    if (!fctx || EVP_PKEY_fromdata_init(fctx.get()) <= 0) {
        throw Error("RSA key import init failed");
    }
    EVP_PKEY* raw = nullptr;
    if (EVP_PKEY_fromdata(fctx.get(), &raw, selection, params) <= 0) {
        throw Error("RSA key import failed");
    }
    return PkeyPtr(raw);
}

Bytes get_bn_param(const EVP_PKEY* pkey, const char* name) {
    BIGNUM* bn = nullptr;
    if (EVP_PKEY_get_bn_param(pkey, name, &bn) != 1) {
        throw Error(std::string("missing RSA parameter ") + name);
    }
    BnPtr holder(bn);
    return bn_to_bytes(bn);
}

// Raw modular exponentiation through the EVP no-padding path, which uses
// the optimized RSA code. Values are carried at the fixed domain width.
PermDomainValue raw_op(const TdpState& state, const PermDomainValue& x, bool private_op) {
    if (x.be.size() != kPermDomainBytes) {
        throw DomainError("permutation value has wrong width");
    }
    const Bytes& n = state.modulus_be;
    // Range check: compare against the modulus at domain width.
    Bytes n_padded(kPermDomainBytes, 0);
    std::copy(n.begin(), n.end(), n_padded.end() - static_cast<std::ptrdiff_t>(n.size()));
    if (!std::lexicographical_compare(x.be.begin(), x.be.end(), n_padded.begin(), n_padded.end())) {
        throw DomainError("permutation value not below modulus");
    }

    size_t op_width = n.size();
    const uint8_t* in = x.be.data() + (kPermDomainBytes - op_width);
    // Bytes above the modulus width are zero by the range check.

    PkeyCtxPtr ctx(EVP_PKEY_CTX_new(state.pkey.get(), nullptr));
    if (!ctx) throw Error("RSA op context allocation failed");
    int ok = private_op ? EVP_PKEY_decrypt_init(ctx.get()) : EVP_PKEY_encrypt_init(ctx.get());
    if (ok <= 0 || EVP_PKEY_CTX_set_rsa_padding(ctx.get(), RSA_NO_PADDING) <= 0) {
        throw Error("RSA op init failed");
    }
    Bytes out(op_width);
    size_t outlen = op_width;
    ok = private_op ? EVP_PKEY_decrypt(ctx.get(), out.data(), &outlen, in, op_width)
                    : EVP_PKEY_encrypt(ctx.get(), out.data(), &outlen, in, op_width);
    if (ok <= 0 || outlen != op_width) {
        throw Error("RSA raw operation failed");
    }
    PermDomainValue result;
    result.be.assign(kPermDomainBytes, 0);
    std::copy(out.begin(), out.end(), result.be.end() - static_cast<std::ptrdiff_t>(op_width));
    return result;
}

}  // namespace
}  // namespace detail

using detail::BnCtxPtr;
using detail::BnPtr;

PermDomainValue TdpPublicKey::forward(const PermDomainValue& x) const {
    counters::bump(counters::Kind::perm_forward);
    return detail::raw_op(*state_, x, /*private_op=*/false);
}

size_t TdpPublicKey::modulus_bits() const {
    return static_cast<size_t>(EVP_PKEY_get_bits(state_->pkey.get()));
}

Bytes TdpPublicKey::modulus_be() const {
    return state_->modulus_be;
}

Bytes TdpPublicKey::serialize() const {
    Bytes out;
    append_sized(state_->modulus_be, out);
    append_sized(detail::get_bn_param(state_->pkey.get(), OSSL_PKEY_PARAM_RSA_E), out);
    return out;
}

TdpPublicKey TdpPublicKey::deserialize(ByteView data) {
    size_t off = 0;
    Bytes n = read_sized(data, off, kPermDomainBytes, "modulus");
    Bytes e = read_sized(data, off, kPermDomainBytes, "public exponent");
    if (off != data.size()) throw CodecError("trailing bytes in public key");

    BnPtr n_bn = detail::bytes_to_bn(n);
    BnPtr e_bn = detail::bytes_to_bn(e);
    std::unique_ptr<OSSL_PARAM_BLD, detail::BnDeleter> bld(OSSL_PARAM_BLD_new());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_N, n_bn.get());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_E, e_bn.get());
    std::unique_ptr<OSSL_PARAM, detail::BnDeleter> params(OSSL_PARAM_BLD_to_param(bld.get()));

    auto state = std::make_shared<detail::TdpState>();
    state->pkey = detail::pkey_from_params(params.get(), EVP_PKEY_PUBLIC_KEY);
    state->modulus_be = std::move(n);
    state->has_private = false;
    return TdpPublicKey(std::move(state));
}

PermDomainValue TdpSecretKey::inverse(const PermDomainValue& x) const {
    counters::bump(counters::Kind::perm_inverse);
    return detail::raw_op(*state_, x, /*private_op=*/true);
}

TdpPublicKey TdpSecretKey::public_key() const {
    Bytes pub;
    append_sized(state_->modulus_be, pub);
    append_sized(detail::get_bn_param(state_->pkey.get(), OSSL_PKEY_PARAM_RSA_E), pub);
    return TdpPublicKey::deserialize(pub);
}

size_t TdpSecretKey::modulus_bits() const {
    return static_cast<size_t>(EVP_PKEY_get_bits(state_->pkey.get()));
}

Bytes TdpSecretKey::modulus_be() const {
    return state_->modulus_be;
}

TdpSecretKey TdpSecretKey::clone() const {
    auto state = std::make_shared<detail::TdpState>();
    EVP_PKEY* dup = EVP_PKEY_dup(state_->pkey.get());
    if (dup == nullptr) throw Error("RSA key duplication failed");
    state->pkey = detail::PkeyPtr(dup);
    state->modulus_be = state_->modulus_be;
    state->has_private = true;
    return TdpSecretKey(std::move(state));
}

Bytes TdpSecretKey::serialize() const {
    const EVP_PKEY* k = state_->pkey.get();
    Bytes out;
    append_sized(state_->modulus_be, out);
    append_sized(detail::get_bn_param(k, OSSL_PKEY_PARAM_RSA_E), out);
    append_sized(detail::get_bn_param(k, OSSL_PKEY_PARAM_RSA_D), out);
    append_sized(detail::get_bn_param(k, OSSL_PKEY_PARAM_RSA_FACTOR1), out);
    append_sized(detail::get_bn_param(k, OSSL_PKEY_PARAM_RSA_FACTOR2), out);
    append_sized(detail::get_bn_param(k, OSSL_PKEY_PARAM_RSA_EXPONENT1), out);
    append_sized(detail::get_bn_param(k, OSSL_PKEY_PARAM_RSA_EXPONENT2), out);
    append_sized(detail::get_bn_param(k, OSSL_PKEY_PARAM_RSA_COEFFICIENT1), out);
    return out;
}

TdpSecretKey TdpSecretKey::deserialize(ByteView data) {
    size_t off = 0;
    const char* names[] = {
        OSSL_PKEY_PARAM_RSA_N,         OSSL_PKEY_PARAM_RSA_E,
        OSSL_PKEY_PARAM_RSA_D,         OSSL_PKEY_PARAM_RSA_FACTOR1,
        OSSL_PKEY_PARAM_RSA_FACTOR2,   OSSL_PKEY_PARAM_RSA_EXPONENT1,
        OSSL_PKEY_PARAM_RSA_EXPONENT2, OSSL_PKEY_PARAM_RSA_COEFFICIENT1,
    };
    std::unique_ptr<OSSL_PARAM_BLD, detail::BnDeleter> bld(OSSL_PARAM_BLD_new());
    std::vector<BnPtr> holders;
    Bytes modulus;
    for (const char* name : names) {
        Bytes field = read_sized(data, off, kPermDomainBytes, name);
        if (modulus.empty()) modulus = field;
        holders.push_back(detail::bytes_to_bn(field));
        OSSL_PARAM_BLD_push_BN(bld.get(), name, holders.back().get());
    }
    if (off != data.size()) throw CodecError("trailing bytes in secret key");
    std::unique_ptr<OSSL_PARAM, detail::BnDeleter> params(OSSL_PARAM_BLD_to_param(bld.get()));

    auto state = std::make_shared<detail::TdpState>();
    state->pkey = detail::pkey_from_params(params.get(), EVP_PKEY_KEYPAIR);
    state->modulus_be = std::move(modulus);
    state->has_private = true;
    return TdpSecretKey(std::move(state));
}

TdpSecretKey tdp_keygen(unsigned bits, RandomSource& rng) {
    if (bits < 512 || bits > 2048 || bits % 2 != 0 || bits % 16 != 0) {
        throw DomainError("modulus bits must be even, 512..2048, multiple of 16");
    }
    BnCtxPtr ctx(BN_CTX_new());
    BnPtr e(BN_new());
    BN_set_word(e.get(), 65537);

    BnPtr p = detail::generate_prime(bits / 2, rng, ctx.get(), e.get());
    BnPtr q = detail::generate_prime(bits / 2, rng, ctx.get(), e.get());
    while (BN_cmp(p.get(), q.get()) == 0) {
        q = detail::generate_prime(bits / 2, rng, ctx.get(), e.get());
    }

    BnPtr n(BN_new()), p1(BN_new()), q1(BN_new()), phi(BN_new());
    BnPtr d(BN_new()), dp(BN_new()), dq(BN_new()), qinv(BN_new());
    BN_mul(n.get(), p.get(), q.get(), ctx.get());
    BN_sub(p1.get(), p.get(), BN_value_one());
    BN_sub(q1.get(), q.get(), BN_value_one());
    BN_mul(phi.get(), p1.get(), q1.get(), ctx.get());
    if (BN_mod_inverse(d.get(), e.get(), phi.get(), ctx.get()) == nullptr) {
        throw Error("private exponent inversion failed");
    }
    BN_mod(dp.get(), d.get(), p1.get(), ctx.get());
    BN_mod(dq.get(), d.get(), q1.get(), ctx.get());
    if (BN_mod_inverse(qinv.get(), q.get(), p.get(), ctx.get()) == nullptr) {
        throw Error("CRT coefficient inversion failed");
    }

    std::unique_ptr<OSSL_PARAM_BLD, detail::BnDeleter> bld(OSSL_PARAM_BLD_new());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_N, n.get());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_E, e.get());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_D, d.get());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR1, p.get());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_FACTOR2, q.get());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT1, dp.get());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_EXPONENT2, dq.get());
    OSSL_PARAM_BLD_push_BN(bld.get(), OSSL_PKEY_PARAM_RSA_COEFFICIENT1, qinv.get());
    std::unique_ptr<OSSL_PARAM, detail::BnDeleter> params(OSSL_PARAM_BLD_to_param(bld.get()));

    auto state = std::make_shared<detail::TdpState>();
    state->pkey = detail::pkey_from_params(params.get(), EVP_PKEY_KEYPAIR);
    state->modulus_be = detail::bn_to_bytes(n.get());
    state->has_private = true;
    return TdpSecretKey(std::move(state));
}

PermDomainValue tdp_sample_domain(const TdpPublicKey& pk, RandomSource& rng) {
    Bytes n = pk.modulus_be();
    BnPtr n_bn = detail::bytes_to_bn(n);
    BnPtr x(BN_new());
    for (;;) {
        Bytes buf = rng.bytes(n.size());
        if (BN_bin2bn(buf.data(), static_cast<int>(buf.size()), x.get()) == nullptr) {
            throw Error("bignum decode failed");
        }
        if (BN_cmp(x.get(), n_bn.get()) >= 0) continue;
        if (BN_is_zero(x.get()) || BN_is_one(x.get())) continue;
        PermDomainValue v;
        v.be.assign(kPermDomainBytes, 0);
        BN_bn2binpad(x.get(), v.be.data(), static_cast<int>(kPermDomainBytes));
        return v;
    }
}

PermDomainValue perm_value_from_bytes(ByteView be, const TdpPublicKey& pk) {
    if (be.size() != kPermDomainBytes) {
        throw DomainError("permutation value has wrong width");
    }
    Bytes n = pk.modulus_be();
    Bytes n_padded(kPermDomainBytes, 0);
    std::copy(n.begin(), n.end(), n_padded.end() - static_cast<std::ptrdiff_t>(n.size()));
    if (!std::lexicographical_compare(be.begin(), be.end(), n_padded.begin(), n_padded.end())) {
        throw DomainError("permutation value not below modulus");
    }
    return PermDomainValue{Bytes(be.begin(), be.end())};
}

Scalar reduce_to_scalar(const PermDomainValue& x, const PrimeOrderGroup& group) {
    ScalarBytes reduced = group.reduce_be(x.be);
    for (uint8_t b : reduced) {
        if (b != 0) return group.scalar_from_be(reduced);
    }
    throw ZeroResidueFault("permutation value reduced to zero modulo group order");
}

}  // namespace ace
