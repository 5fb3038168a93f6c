#include "ace/crypto/counters.hpp"

namespace ace::counters {

namespace {
thread_local CounterSink* t_sink = nullptr;
}

Scope::Scope(CounterSink* sink) : previous_(t_sink) {
    t_sink = sink;
}

Scope::~Scope() {
    t_sink = previous_;
}

CounterSink* current() {
    return t_sink;
}

void bump(Kind kind) {
    CounterSink* sink = t_sink;
    if (sink == nullptr) return;
    switch (kind) {
        case Kind::prf: sink->prf_calls.fetch_add(1, std::memory_order_relaxed); break;
        case Kind::scalar_prf: sink->scalar_prf_calls.fetch_add(1, std::memory_order_relaxed); break;
        case Kind::group_exp: sink->group_exps.fetch_add(1, std::memory_order_relaxed); break;
        case Kind::perm_inverse: sink->perm_inverses.fetch_add(1, std::memory_order_relaxed); break;
        case Kind::perm_forward: sink->perm_forwards.fetch_add(1, std::memory_order_relaxed); break;
        case Kind::hash: sink->hashes.fetch_add(1, std::memory_order_relaxed); break;
        case Kind::encryption: sink->encryptions.fetch_add(1, std::memory_order_relaxed); break;
        case Kind::decryption: sink->decryptions.fetch_add(1, std::memory_order_relaxed); break;
    }
}

}  // namespace ace::counters
