#pragma once

#include <stdexcept>
#include <string>

namespace ace {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A value fell outside the permutation or group domain.
struct DomainError : Error {
    using Error::Error;
};

// A permutation-domain value reduced to zero modulo the group order.
// Callers must abort the enclosing batch; the event is negligible for
// production parameters but must never be silently skipped.
struct ZeroResidueFault : Error {
    using Error::Error;
};

// Authenticated decryption failed (wrong key or tampered ciphertext).
struct IntegrityError : Error {
    using Error::Error;
};

// An index insertion collided with a live entry (replay or hash collision).
struct DuplicateIndexFault : Error {
    using Error::Error;
};

// Server-side structures disagree in a way honest operation cannot produce.
struct ConsistencyFault : Error {
    using Error::Error;
};

// A keyword-state delta arrived out of order or was already applied.
struct StalenessError : Error {
    using Error::Error;
};

struct CodecError : Error {
    using Error::Error;
};

struct StorageError : Error {
    using Error::Error;
};

struct IngestError : Error {
    using Error::Error;
};

struct ProtocolError : Error {
    using Error::Error;
};

}  // namespace ace
