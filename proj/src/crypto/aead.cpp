#include "ace/crypto/aead.hpp"

#include <openssl/evp.h>

#include <memory>

#include "ace/crypto/counters.hpp"
#include "ace/errors.hpp"

namespace ace {

namespace {
struct CtxDeleter {
    void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
using CtxPtr = std::unique_ptr<EVP_CIPHER_CTX, CtxDeleter>;
}  // namespace

Bytes se_encrypt(const CipherKey& key, ByteView plaintext, RandomSource& rng) {
    counters::bump(counters::Kind::encryption);

    Bytes out(kAeadNonceBytes + plaintext.size() + kAeadTagBytes);
    rng.fill(out.data(), kAeadNonceBytes);

    CtxPtr ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw Error("cipher context allocation failed");
    if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.bytes().data(),
                           out.data()) != 1) {
        throw Error("GCM init failed");
    }
    int len = 0;
    if (!plaintext.empty() &&
        EVP_EncryptUpdate(ctx.get(), out.data() + kAeadNonceBytes, &len, plaintext.data(),
                          static_cast<int>(plaintext.size())) != 1) {
        throw Error("GCM encrypt failed");
    }
    int fin = 0;
    if (EVP_EncryptFinal_ex(ctx.get(), out.data() + kAeadNonceBytes + len, &fin) != 1) {
        throw Error("GCM finalize failed");
    }
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kAeadTagBytes,
                            out.data() + kAeadNonceBytes + plaintext.size()) != 1) {
        throw Error("GCM tag extraction failed");
    }
    return out;
}

Bytes se_decrypt(const CipherKey& key, ByteView ciphertext) {
    counters::bump(counters::Kind::decryption);

    if (ciphertext.size() < kAeadOverheadBytes) {
        throw IntegrityError("ciphertext shorter than AEAD overhead");
    }
    const uint8_t* nonce = ciphertext.data();
    const uint8_t* body = ciphertext.data() + kAeadNonceBytes;
    size_t body_len = ciphertext.size() - kAeadOverheadBytes;
    const uint8_t* tag = ciphertext.data() + kAeadNonceBytes + body_len;

    CtxPtr ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw Error("cipher context allocation failed");
    if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_128_gcm(), nullptr, key.bytes().data(), nonce) != 1) {
        throw Error("GCM init failed");
    }
    Bytes out(body_len);
    int len = 0;
    if (body_len > 0 &&
        EVP_DecryptUpdate(ctx.get(), out.data(), &len, body, static_cast<int>(body_len)) != 1) {
        throw IntegrityError("authenticated decryption failed");
    }
    if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kAeadTagBytes,
                            const_cast<uint8_t*>(tag)) != 1) {
        throw Error("GCM tag set failed");
    }
    int fin = 0;
    if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &fin) != 1) {
        throw IntegrityError("authenticated decryption failed");
    }
    return out;
}

}  // namespace ace
