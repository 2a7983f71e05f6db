#pragma once

// Content-addressed store for Gröbner basis results. Keys are SHA-256
// digests of a canonical description of the input; values are opaque
// text. Entries live in memory and, when a directory is configured, on
// disk (written to a temporary file and renamed into place).

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace wgr {

std::string sha256_hex(const std::string& data);

class GBCache {
public:
    static GBCache& instance();

    // Empty path disables the disk layer.
    void set_directory(const std::string& dir);
    const std::string& directory() const { return dir_; }
    void set_enabled(bool on) { enabled_ = on; }

    std::optional<std::string> get(const std::string& key_material);
    void put(const std::string& key_material, const std::string& value);
    void clear_memory();

    uint64_t hits() const { return hits_; }
    uint64_t misses() const { return misses_; }

private:
    std::mutex mu_;
    std::string dir_;
    bool enabled_ = true;
    std::unordered_map<std::string, std::string> mem_;
    uint64_t hits_ = 0, misses_ = 0;
};

}  // namespace wgr
