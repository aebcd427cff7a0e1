#include "cmspec/cache.hpp"

#include "cmspec/hash.hpp"

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace cmspec {

std::filesystem::path OperatorCache::path_for(const std::string& name) const {
    std::string key = fnv1a64_hex(name + "|v" + std::to_string(kFormatVersion));
    return dir_ / (key + ".op");
}

void OperatorCache::store(const std::string& name, const DiffOp& op) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    std::string payload = "key " + name + " v" + std::to_string(kFormatVersion) + "\n" +
                          op.serialize();
    // write-then-rename so concurrent readers never see a torn file
    std::filesystem::path final_path = path_for(name);
    std::filesystem::path tmp = final_path;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << payload;
    }
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

std::optional<DiffOp> OperatorCache::load(const std::string& name) const {
    std::ifstream in(path_for(name), std::ios::binary);
    if (!in) return std::nullopt;
    std::stringstream buf;
    buf << in.rdbuf();
    std::string payload = buf.str();
    std::string expected_head = "key " + name + " v" + std::to_string(kFormatVersion) + "\n";
    if (payload.rfind(expected_head, 0) != 0) return std::nullopt;
    try {
        return DiffOp::deserialize(payload.substr(expected_head.size()));
    } catch (const std::exception&) {
        return std::nullopt; // corrupt payload: caller recomputes
    }
}

} // namespace cmspec
