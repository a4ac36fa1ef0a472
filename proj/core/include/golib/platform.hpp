#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "golib/blob_store.hpp"
#include "golib/clock.hpp"
#include "golib/comms/comms.hpp"
#include "golib/config.hpp"
#include "golib/directory/directory.hpp"
#include "golib/identity/identity.hpp"
#include "golib/outbox.hpp"
#include "golib/payments/payments.hpp"
#include "golib/scheduling/scheduling.hpp"
#include "golib/store/store.hpp"

namespace golib {

struct PlatformOptions {
    /// Data directory: journal.log, snapshot.dat, outbox.jsonl and blobs/.
    /// Absent means everything stays in memory.
    std::optional<std::filesystem::path> data_dir;
    Config config;
    std::shared_ptr<const Clock> clock;  ///< defaults to SystemClock
    store::Options store;                ///< `dir` is overridden by data_dir
};

/// Owns the infrastructure and one instance of every domain module.
class Platform {
    // Declared first so it is constructed before the modules that use it.
    Config config_;
    std::shared_ptr<const Clock> clock_;
    store::Store store_;
    Outbox outbox_;
    BlobStore blobs_;

public:
    explicit Platform(PlatformOptions options = {});

    Platform(const Platform&) = delete;
    Platform& operator=(const Platform&) = delete;

    const Config& config() const { return config_; }
    const Clock& clock() const { return *clock_; }
    store::Store& store() { return store_; }
    Outbox& outbox() { return outbox_; }
    BlobStore& blobs() { return blobs_; }
    Services services() { return {store_, *clock_, config_, outbox_, blobs_}; }

    identity::Identity identity;
    directory::Directory directory;
    scheduling::Scheduling scheduling;
    payments::Payments payments;
    comms::Comms comms;
};

}  // namespace golib
