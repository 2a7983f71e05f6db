#include "wgr/cache.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace wgr {

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

GBCache& GBCache::instance() {
    static GBCache c;
    return c;
}

void GBCache::set_directory(const std::string& dir) {
    std::lock_guard<std::mutex> lk(mu_);
    dir_ = dir;
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

void GBCache::clear_memory() {
    std::lock_guard<std::mutex> lk(mu_);
    mem_.clear();
}

std::optional<std::string> GBCache::get(const std::string& key_material) {
    if (!enabled_) return std::nullopt;
    std::string key = sha256_hex(key_material);
    std::string dir;
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = mem_.find(key);
        if (it != mem_.end()) {
            ++hits_;
            return it->second;
        }
        dir = dir_;
    }
    if (!dir.empty()) {
        std::ifstream in(std::filesystem::path(dir) / (key + ".gb"), std::ios::binary);
        if (in) {
            std::stringstream ss;
            ss << in.rdbuf();
            std::string content = ss.str();
            // First line repeats the key material digest for a sanity check.
            auto nl = content.find('\n');
            if (nl != std::string::npos && content.substr(0, nl) == key) {
                std::string val = content.substr(nl + 1);
                std::lock_guard<std::mutex> lk(mu_);
                mem_[key] = val;
                ++hits_;
                return val;
            }
        }
    }
    std::lock_guard<std::mutex> lk(mu_);
    ++misses_;
    return std::nullopt;
}

void GBCache::put(const std::string& key_material, const std::string& value) {
    if (!enabled_) return;
    std::string key = sha256_hex(key_material);
    std::string dir;
    {
        std::lock_guard<std::mutex> lk(mu_);
        mem_[key] = value;
        dir = dir_;
    }
    if (dir.empty()) return;
    static std::atomic<uint64_t> seq{0};
    namespace fs = std::filesystem;
    fs::path final_path = fs::path(dir) / (key + ".gb");
    std::ostringstream tmpname;
    tmpname << key << ".tmp." << std::hash<std::thread::id>()(std::this_thread::get_id()) << "." << seq++;
    fs::path tmp = fs::path(dir) / tmpname.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;
        out << key << "\n" << value;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            return;
        }
    }
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) fs::remove(tmp, ec);
}

}  // namespace wgr
