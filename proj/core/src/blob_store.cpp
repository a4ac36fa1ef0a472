#include "golib/blob_store.hpp"

#include <fstream>
#include <sstream>

#include "golib/crypto.hpp"
#include "golib/errors.hpp"

namespace golib {

namespace {

constexpr std::string_view kPrefix = "sha256:";

std::optional<std::string> digest_of(const std::string& ref) {
    if (ref.size() != kPrefix.size() + 64 || ref.compare(0, kPrefix.size(), kPrefix) != 0) return std::nullopt;
    const auto hex = ref.substr(kPrefix.size());
    for (char c : hex) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return std::nullopt;
    }
    return hex;
}

}  // namespace

BlobStore::BlobStore(std::optional<std::filesystem::path> dir) : dir_(std::move(dir)) {
    if (dir_) std::filesystem::create_directories(*dir_);
}

std::string BlobStore::put(std::string_view bytes) {
    const auto hex = crypto::sha256_hex(bytes);
    std::lock_guard lock(mu_);
    if (dir_) {
        const auto path = *dir_ / hex;
        if (!std::filesystem::exists(path)) {
            const auto tmp = *dir_ / (hex + ".tmp");
            {
                std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
                out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
                if (!out) throw Error(ErrorCode::StorageFailure, "cannot write blob " + hex);
            }
            std::filesystem::rename(tmp, path);
        }
    } else {
        memory_.try_emplace(hex, bytes);
    }
    return std::string(kPrefix) + hex;
}

std::optional<std::string> BlobStore::get(const std::string& ref) const {
    const auto hex = digest_of(ref);
    if (!hex) return std::nullopt;
    std::lock_guard lock(mu_);
    if (!dir_) {
        const auto it = memory_.find(*hex);
        if (it == memory_.end()) return std::nullopt;
        return it->second;
    }
    std::ifstream in(*dir_ / *hex, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool BlobStore::contains(const std::string& ref) const { return get(ref).has_value(); }

}  // namespace golib
