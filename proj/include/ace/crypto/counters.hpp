#pragma once

#include <atomic>
#include <cstdint>

namespace ace {

// Primitive-call counters, scoped per protocol operation and per role.
// Counts are recorded at the crypto-suite boundary: one bump per logical
// primitive invocation, independent of internal retries.
struct OpCounters {
    uint64_t prf_calls = 0;
    uint64_t scalar_prf_calls = 0;
    uint64_t group_exps = 0;
    uint64_t perm_inverses = 0;
    uint64_t perm_forwards = 0;
    uint64_t hashes = 0;
    uint64_t encryptions = 0;
    uint64_t decryptions = 0;

    OpCounters& operator+=(const OpCounters& o) {
        prf_calls += o.prf_calls;
        scalar_prf_calls += o.scalar_prf_calls;
        group_exps += o.group_exps;
        perm_inverses += o.perm_inverses;
        perm_forwards += o.perm_forwards;
        hashes += o.hashes;
        encryptions += o.encryptions;
        decryptions += o.decryptions;
        return *this;
    }
};

// Shared accumulation target; atomic so parallel batch workers can share one.
struct CounterSink {
    std::atomic<uint64_t> prf_calls{0};
    std::atomic<uint64_t> scalar_prf_calls{0};
    std::atomic<uint64_t> group_exps{0};
    std::atomic<uint64_t> perm_inverses{0};
    std::atomic<uint64_t> perm_forwards{0};
    std::atomic<uint64_t> hashes{0};
    std::atomic<uint64_t> encryptions{0};
    std::atomic<uint64_t> decryptions{0};

    void reset() {
        prf_calls = scalar_prf_calls = group_exps = 0;
        perm_inverses = perm_forwards = hashes = 0;
        encryptions = decryptions = 0;
    }

    OpCounters snapshot() const {
        OpCounters c;
        c.prf_calls = prf_calls.load();
        c.scalar_prf_calls = scalar_prf_calls.load();
        c.group_exps = group_exps.load();
        c.perm_inverses = perm_inverses.load();
        c.perm_forwards = perm_forwards.load();
        c.hashes = hashes.load();
        c.encryptions = encryptions.load();
        c.decryptions = decryptions.load();
        return c;
    }
};

namespace counters {

enum class Kind {
    prf,
    scalar_prf,
    group_exp,
    perm_inverse,
    perm_forward,
    hash,
    encryption,
    decryption,
};

// Installs a sink for the current thread for the lifetime of the scope.
// Nesting restores the previous sink on destruction.
class Scope {
public:
    explicit Scope(CounterSink* sink);
    ~Scope();
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

private:
    CounterSink* previous_;
};

void bump(Kind kind);

// Sink currently installed on this thread (nullptr when none).
CounterSink* current();

}  // namespace counters
}  // namespace ace
