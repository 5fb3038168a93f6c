#pragma once

#include <cstdint>

#include "ace/crypto/counters.hpp"

namespace ace {

// Primitive-call counts for one protocol operation, split by role. The
// derived closed forms these must match exactly:
//   add one identifier with x fresh keywords (trustee):
//     perm_inverses = x, group_exps = 2x, hashes = x, encryptions = x,
//     prf_calls = x + 1, scalar_prf_calls = x + 1
//   delete one identifier with x keywords:
//     trustee: prf_calls = 1, scalar_prf_calls = 1
//     server:  group_exps = x, hashes = x
//   search matching alpha entries, no deletions:
//     vetter: scalar_prf_calls = 1, group_exps = 1, prf_calls = 1 (result
//             key), decryptions = alpha
//     server: hashes = alpha, group_exps = alpha, perm_forwards = alpha
struct RoleCounters {
    OpCounters trustee;
    OpCounters vetter;
    OpCounters server;
};

enum class CountedOp {
    add_one_id,     // parameter = keyword count x
    delete_one_id,  // parameter = keyword count x
    search,         // parameter = matching entries alpha
};

RoleCounters count_operation(CountedOp op, uint64_t parameter, uint64_t seed = 1);

}  // namespace ace
