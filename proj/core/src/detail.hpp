#pragma once

// Helpers shared by the domain modules. Not installed.

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "golib/errors.hpp"
#include "golib/schema.hpp"
#include "golib/store/store.hpp"

namespace golib::detail {

inline std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string trim(std::string_view text) {
    const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!text.empty() && is_space(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && is_space(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    return std::string(text);
}

/// ASCII case-insensitive substring test; an empty needle matches.
inline bool icontains(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    return lowercase(haystack).find(lowercase(needle)) != std::string::npos;
}

inline std::optional<AccountRecord> find_account(store::Txn& txn, const std::string& id) {
    return txn.get_as<AccountRecord>(key(collections::kAccounts, id));
}

inline AccountRecord require_account(store::Txn& txn, const std::string& id) {
    auto rec = find_account(txn, id);
    if (!rec) throw Error(ErrorCode::UnknownAccount, "unknown account " + id);
    return std::move(*rec);
}

inline void put_account(store::Txn& txn, const AccountRecord& rec) {
    txn.put(key(collections::kAccounts, rec.account.id), rec);
}

}  // namespace golib::detail
