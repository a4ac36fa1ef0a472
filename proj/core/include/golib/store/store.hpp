#pragma once

#include <atomic>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

/**
 * Embedded single-node document store.
 *
 * Records live in memory and are made durable through an append-only journal
 * plus a periodically rewritten snapshot file:
 *
 *   <dir>/journal.log    T <seq> <len> <crc> <body>\n   (transaction record)
 *                        C <seq> <crc>\n                (commit mark)
 *   <dir>/snapshot.dat   header, one checksummed line per record, trailer
 *   <dir>/LOCK           advisory lock held while open
 *
 * A transaction is visible after recovery iff its commit mark reached the
 * journal. Every line carries a CRC-32 so a flipped byte surfaces as
 * CorruptStore on open instead of a silent misread; an unterminated final
 * line is a torn append and is discarded.
 *
 * Concurrency: optimistic. Transaction bodies run against the live map,
 * recording the version of every key read (and of every collection scanned);
 * the commit step takes the exclusive lock, validates those versions and
 * either applies the write set or retries the body. The last permitted
 * attempt runs entirely under the exclusive lock so a transaction can only
 * exhaust its retries when pessimistic fallback is disabled.
 */
namespace golib::store {

using Json = nlohmann::json;

struct Key {
    std::string collection;
    std::string id;

    auto operator<=>(const Key&) const = default;
    bool operator==(const Key&) const = default;
};

struct Record {
    Key key;
    std::uint64_t version = 0;
    Json payload;
};

/// Named crash sites for fault-injection tests.
enum class FaultPoint {
    BeforeJournalWrite,
    TornJournalWrite,      ///< half of the transaction record reaches the file
    BeforeCommitMark,      ///< full transaction record written, no commit mark
    AfterCommitMark,       ///< durable but not yet applied in memory
    SnapshotTempWritten,   ///< snapshot.tmp complete, not yet renamed
    SnapshotInstalled,     ///< snapshot renamed, journal not yet truncated
};

/// Thrown by a fault hook to simulate the process dying at a FaultPoint.
/// The Store instance is unusable afterwards; reopen the directory.
struct SimulatedCrash : std::exception {
    const char* what() const noexcept override { return "simulated crash"; }
};

using FaultHook = std::function<void(FaultPoint)>;

struct Options {
    /// Absent means purely in-memory (no durability).
    std::optional<std::filesystem::path> dir;
    int max_attempts = 16;
    /// Run the final attempt under the exclusive lock.
    bool pessimistic_final_attempt = true;
    /// Rewrite the snapshot after this many commits (0 disables).
    std::size_t snapshot_every = 4096;
    bool fsync = false;
    FaultHook fault_hook;
};

class Store;

/// Write-set buffer and read-set tracker handed to transaction bodies.
class Txn {
public:
    std::optional<Json> get(const Key& key);

    template <typename T>
    std::optional<T> get_as(const Key& key) {
        auto doc = get(key);
        if (!doc) return std::nullopt;
        return doc->template get<T>();
    }

    void put(const Key& key, Json payload);

    template <typename T>
        requires(!std::is_same_v<std::decay_t<T>, Json>)
    void put(const Key& key, const T& value) {
        put(key, Json(value));
    }

    void erase(const Key& key);

    /// Every live record of a collection, own writes applied, ordered by id.
    std::vector<Record> scan(const std::string& collection);

    std::string next_id(std::string_view prefix);

    bool has_writes() const { return !writes_.empty(); }

private:
    friend class Store;
    Txn(Store& store, bool exclusive) : store_(store), exclusive_(exclusive) {}

    struct Lookup {
        std::uint64_t version = 0;
        std::optional<Json> payload;
    };
    Lookup read_committed(const Key& key);

    Store& store_;
    bool exclusive_;
    std::map<Key, std::uint64_t> read_versions_;
    std::map<std::string, std::uint64_t> scan_versions_;
    std::map<Key, std::optional<Json>> writes_;
};

/// Resume point for keyset pagination: records strictly after `after` in the
/// query order.
struct PageRequest {
    std::optional<Record> after;
    std::size_t limit = SIZE_MAX;
};

using Predicate = std::function<bool(const Record&)>;
/// Strict weak "comes before" order; ties are broken by key.
using Order = std::function<bool(const Record&, const Record&)>;

/// Immutable copy of selected collections taken at one instant.
class Snapshot {
public:
    std::optional<Record> get(const Key& key) const;
    std::vector<Record> scan(const std::string& collection) const;

private:
    friend class Store;
    std::map<std::string, std::map<std::string, Record>> collections_;
};

class Store {
public:
    explicit Store(Options options = {});
    ~Store();
    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    std::optional<Record> get(const Key& key) const;

    /// Runs `body` as an all-or-nothing transaction and returns what it
    /// returns. Exceptions thrown by the body abort with nothing committed.
    /// `body` must be re-executable.
    template <typename F>
    auto transact(F&& body) -> std::invoke_result_t<F&, Txn&> {
        using R = std::invoke_result_t<F&, Txn&>;
        if constexpr (std::is_void_v<R>) {
            run([&](Txn& t) { body(t); });
        } else {
            std::optional<R> result;
            run([&](Txn& t) { result.emplace(body(t)); });
            return std::move(*result);
        }
    }

    /// Same as transact but returns the records written by the commit.
    std::vector<Record> run(const std::function<void(Txn&)>& body);

    std::vector<Record> query(const std::string& collection, const Predicate& predicate,
                              const Order& order, const PageRequest& page = {}) const;

    Snapshot snapshot(const std::vector<std::string>& collections) const;

    /// Convenience single-key write through a transaction.
    Record put(const Key& key, Json payload);

    /// Rewrites the snapshot file and truncates the journal.
    void checkpoint();

    /// Flushes a checkpoint and releases the directory.
    void close();

    std::size_t size() const;
    std::uint64_t commits() const { return commit_seq_.load(); }

private:
    friend class Txn;

    struct Entry {
        std::uint64_t version = 0;
        std::optional<Json> payload;  // nullopt: tombstone
    };

    void ensure_alive() const;
    void recover();
    void load_snapshot(const std::filesystem::path& path);
    void replay_journal(const std::filesystem::path& path);
    void apply_locked(std::uint64_t seq, const Json& writes, std::vector<Record>* out);
    std::vector<Record> commit_locked(Txn& txn);
    bool validate_locked(const Txn& txn) const;
    void write_journal_locked(std::uint64_t seq, const std::string& body);
    void checkpoint_locked();
    void fault(FaultPoint point);
    std::uint64_t collection_version_locked(const std::string& collection) const;

    Options options_;
    mutable std::shared_mutex mu_;
    std::map<std::string, std::map<std::string, Entry>> data_;
    std::unordered_map<std::string, std::uint64_t> collection_versions_;
    std::atomic<std::uint64_t> commit_seq_{0};
    std::atomic<std::uint64_t> next_id_{1};
    std::uint64_t snapshot_seq_ = 0;
    std::size_t commits_since_checkpoint_ = 0;
    int journal_fd_ = -1;
    int lock_fd_ = -1;
    std::atomic<bool> dead_{false};
};

}  // namespace golib::store
