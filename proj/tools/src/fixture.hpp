#pragma once

#include <map>
#include <string>
#include <vector>

#include "golib/platform.hpp"

namespace golib::cli {

/// Seeds a platform from a JSON fixture:
///
///     {
///       "admins":  [{"email", "password", "first_name", "last_name", "city", "country", "contact_number"}],
///       "readers": [{...same fields..., "vaccinated": true}],
///       "books":   [{...same fields..., "profession", "cnic"}],
///       "follows": [{"reader": "<email>", "book": "<email>"}],
///       "slots":   [{"book": "<email>", "starts_at", "ends_at"}],
///       "events":  [{"host": "<email>", "kind", "title", "venue": {...}, "starts_at", "ends_at",
///                    "capacity", "price_minor"}]
///     }
///
/// Every section is optional. Books are registered as readers, apply, and
/// are accepted by the first admin. Seeding is idempotent: accounts that
/// already exist are reused, and an event with the same host, title and
/// start is not created twice. Throws std::invalid_argument on a malformed
/// fixture and golib::Error when an operation is refused.
struct SeedReport {
    std::map<std::string, std::string> accounts;  ///< email -> account id
    std::vector<std::string> events;
    std::vector<std::string> slots;
    std::size_t follows = 0;

    Json to_json() const;
};

SeedReport seed_fixture(Platform& platform, const Json& fixture);

}  // namespace golib::cli
