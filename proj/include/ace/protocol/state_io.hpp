#pragma once

#include "ace/crypto/tdp.hpp"
#include "ace/protocol/messages.hpp"
#include "ace/storage/kv.hpp"

namespace ace::state_io {

// Keyword-state entries as stored in the wmap namespace: 256-byte chain
// value followed by a big-endian u64 counter.
Bytes encode_keyword_state(const KeywordState& state);
KeywordState decode_keyword_state(ByteView value, const TdpPublicKey& pk);

void stage_keyword_states(std::vector<Mutation>& mutations, const KeywordStateMap& w);
KeywordStateMap read_keyword_states(const KvStore& store, const TdpPublicKey& pk);

// keys-namespace scalar entries.
Bytes get_required(const KvStore& store, Namespace ns, ByteView key, const char* what);
uint64_t read_u64_entry(const KvStore& store, ByteView key, const char* what);

}  // namespace ace::state_io
