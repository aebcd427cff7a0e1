// Engine invariant suites runnable from the CLI: exact-scalar axioms,
// normal-form consistency against the numeric oracle, derivation rules,
// series quality, and determinism under threading.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cmspec {

struct SelftestResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<SelftestResult> run_selftest(long precision_bits, std::uint64_t seed, int threads);

} // namespace cmspec
