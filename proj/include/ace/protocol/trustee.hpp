#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "ace/crypto/random.hpp"
#include "ace/protocol/keys.hpp"
#include "ace/protocol/messages.hpp"
#include "ace/storage/kv.hpp"

namespace ace {

// Trusted writer: holds all key material, runs setup, produces insertion
// batches for the server and constant-size revocation tokens. Single-writer;
// one instance must not be mutated concurrently.
class Trustee {
public:
    struct Config {
        unsigned security_bits = 128;
        unsigned perm_modulus_bits = 2048;
        const PrimeOrderGroup* group = nullptr;  // defaults to ristretto255
        size_t add_workers = 0;                  // 0: hardware concurrency
    };

    static Trustee create(const Config& config, std::unique_ptr<RandomSource> rng);

    // Batch insertion. Computes every index, ciphertext and delta for the
    // submitted records, advances keyword chains, and returns the server
    // batch together with the keyword-state delta for the vetter. A
    // zero-residue fault aborts the whole call with no state change.
    std::pair<AddBatch, WDelta> add_batch(const std::vector<AddRecord>& records);

    // Revocation. Deterministic, constant-size; derivable whether or not the
    // identifier is present server-side.
    DeleteToken issue_delete(ByteView id);

    const KeywordStateMap& keyword_states() const { return w_; }
    uint64_t delta_seq() const { return delta_seq_; }
    const TrusteeKeyMaterial& keys() const { return keys_; }

    VetterKeyMaterial vetter_key_material() const;
    ServerPublicParams server_public_params() const;

    Bytes export_snapshot() const;
    static Trustee import_snapshot(ByteView snapshot, size_t add_workers = 0,
                                   std::unique_ptr<RandomSource> rng = nullptr);

private:
    struct LiveId {
        RowKey row_key;
        Scalar tag_id;
        Scalar inv_tag_id;
    };

    Trustee(TrusteeKeyMaterial keys, std::unique_ptr<RandomSource> rng, size_t workers);

    TrusteeKeyMaterial keys_;
    KeywordStateMap w_;
    std::map<Bytes, LiveId> live_ids_;
    uint64_t delta_seq_ = 0;
    std::unique_ptr<RandomSource> rng_;
    size_t workers_;
};

}  // namespace ace
