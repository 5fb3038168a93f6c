#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace ace {

// Desk-scale measurement scenarios, one CSV row per measured point with
// columns: scenario,param,repetitions,mean_ns,p95_ns,bytes.
//
//   add      two identifiers, keyword count sweeping 100..1000
//   revoke   one identifier, keyword count in {1,10,100,1000}; bytes column
//            is the encoded token size, constant across the sweep
//   search   matched entries sweeping 10..2000
//   storage  1000 identifiers at 500 and 1000 keywords each; bytes column
//            carries the serialized section sizes
//   all      everything above
//
// scale < 1 shrinks every size knob proportionally (testing).
struct BenchOptions {
    uint64_t seed = 1;
    double scale = 1.0;
    size_t add_workers = 0;
    unsigned perm_modulus_bits = 2048;
};

void bench_scenarios(const std::string& scenario, const BenchOptions& options,
                     std::ostream& csv_out);

}  // namespace ace
