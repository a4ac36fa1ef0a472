#pragma once

#include <string>

#include "golib/blob_store.hpp"
#include "golib/clock.hpp"
#include "golib/config.hpp"
#include "golib/outbox.hpp"
#include "golib/store/store.hpp"

namespace golib {

/// Shared infrastructure every domain module operates through. Modules hold
/// no mutable state of their own.
struct Services {
    store::Store& store;
    const Clock& clock;
    const Config& config;
    Outbox& outbox;
    BlobStore& blobs;
};

/// An authenticated caller. Obtain one from Identity::resolve; operations
/// re-read the account inside their transaction, so the role is never
/// trusted from here.
struct Principal {
    std::string account_id;
};

}  // namespace golib
