// Disk cache for expensive operator expansions. Entries are keyed by the
// content hash of (logical name, format version); payloads are the canonical
// DiffOp serialization, which already ends in an integrity hash. Corrupt or
// stale entries are ignored and recomputed.
#pragma once

#include "cmspec/diff_op.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace cmspec {

class OperatorCache {
public:
    static constexpr int kFormatVersion = 1;

    explicit OperatorCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path path_for(const std::string& name) const;

    void store(const std::string& name, const DiffOp& op) const;
    // nullopt on miss, corruption or version mismatch
    std::optional<DiffOp> load(const std::string& name) const;

private:
    std::filesystem::path dir_;
};

} // namespace cmspec
