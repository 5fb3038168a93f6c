#pragma once

#include "ace/bytes.hpp"
#include "ace/crypto/keybytes.hpp"
#include "ace/crypto/random.hpp"

namespace ace {

// AES-128-GCM ciphertext layout: 12-byte nonce || ciphertext || 16-byte tag.
constexpr size_t kAeadNonceBytes = 12;
constexpr size_t kAeadTagBytes = 16;
constexpr size_t kAeadOverheadBytes = kAeadNonceBytes + kAeadTagBytes;

// Randomized authenticated encryption; a fresh nonce is drawn per call so
// equal plaintexts produce unequal ciphertexts.
Bytes se_encrypt(const CipherKey& key, ByteView plaintext, RandomSource& rng);

// Throws IntegrityError on wrong key, truncation or any tampering.
Bytes se_decrypt(const CipherKey& key, ByteView ciphertext);

}  // namespace ace
