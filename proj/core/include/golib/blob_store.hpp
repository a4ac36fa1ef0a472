#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace golib {

/// Content-addressed blob storage. References look like `sha256:<hex>`;
/// on disk each blob is `<dir>/<hex>`.
class BlobStore {
public:
    explicit BlobStore(std::optional<std::filesystem::path> dir = std::nullopt);

    std::string put(std::string_view bytes);
    std::optional<std::string> get(const std::string& ref) const;
    bool contains(const std::string& ref) const;

private:
    std::optional<std::filesystem::path> dir_;
    mutable std::mutex mu_;
    std::map<std::string, std::string> memory_;
};

}  // namespace golib
