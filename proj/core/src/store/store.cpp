#include "golib/store/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "golib/crypto.hpp"
#include "golib/errors.hpp"

namespace golib::store {

namespace fs = std::filesystem;

namespace {

constexpr const char* kJournal = "journal.log";
constexpr const char* kSnapshot = "snapshot.dat";
constexpr const char* kSnapshotTmp = "snapshot.tmp";
constexpr const char* kLock = "LOCK";

std::string dump(const Json& doc) {
    return doc.dump(-1, ' ', false, Json::error_handler_t::replace);
}

std::string crc_hex(std::string_view data) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", crypto::crc32(data));
    return buf;
}

[[noreturn]] void corrupt(const std::string& what) {
    throw Error(ErrorCode::CorruptStore, "corrupt store: " + what);
}

[[noreturn]] void io_failure(const std::string& what) {
    throw Error(ErrorCode::StorageFailure, what + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data) {
    while (!data.empty()) {
        const ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            io_failure("write");
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_failure("open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t parse_u64(std::string_view text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) corrupt("bad integer field");
    return value;
}

// Splits off the first `n` space-separated fields; the remainder (possibly
// containing spaces) is returned as the last element.
std::vector<std::string_view> split_fields(std::string_view line, std::size_t n) {
    std::vector<std::string_view> out;
    for (std::size_t i = 0; i < n; ++i) {
        const auto sp = line.find(' ');
        if (sp == std::string_view::npos) {
            out.push_back(line);
            return out;
        }
        out.push_back(line.substr(0, sp));
        line.remove_prefix(sp + 1);
    }
    out.push_back(line);
    return out;
}

bool record_before(const Order& order, const Record& a, const Record& b) {
    if (order) {
        if (order(a, b)) return true;
        if (order(b, a)) return false;
    }
    return a.key < b.key;
}

}  // namespace

// ---------------------------------------------------------------------------
// Txn

Txn::Lookup Txn::read_committed(const Key& key) {
    auto lookup = [&]() -> Lookup {
        const auto coll = store_.data_.find(key.collection);
        if (coll == store_.data_.end()) return {};
        const auto it = coll->second.find(key.id);
        if (it == coll->second.end()) return {};
        return {it->second.version, it->second.payload};
    };
    if (exclusive_) return lookup();
    std::shared_lock lock(store_.mu_);
    return lookup();
}

std::optional<Json> Txn::get(const Key& key) {
    if (const auto w = writes_.find(key); w != writes_.end()) return w->second;
    auto found = read_committed(key);
    read_versions_.try_emplace(key, found.version);
    return std::move(found.payload);
}

void Txn::put(const Key& key, Json payload) { writes_[key] = std::move(payload); }

void Txn::erase(const Key& key) { writes_[key] = std::nullopt; }

std::vector<Record> Txn::scan(const std::string& collection) {
    std::map<std::string, Record> rows;
    auto collect = [&] {
        scan_versions_.try_emplace(collection, store_.collection_version_locked(collection));
        const auto coll = store_.data_.find(collection);
        if (coll == store_.data_.end()) return;
        for (const auto& [id, entry] : coll->second) {
            if (entry.payload) rows.emplace(id, Record{{collection, id}, entry.version, *entry.payload});
        }
    };
    if (exclusive_) {
        collect();
    } else {
        std::shared_lock lock(store_.mu_);
        collect();
    }
    for (auto it = writes_.lower_bound(Key{collection, ""}); it != writes_.end() && it->first.collection == collection;
         ++it) {
        if (it->second) {
            auto& row = rows[it->first.id];
            row.key = it->first;
            row.payload = *it->second;
        } else {
            rows.erase(it->first.id);
        }
    }
    std::vector<Record> out;
    out.reserve(rows.size());
    for (auto& [id, rec] : rows) out.push_back(std::move(rec));
    return out;
}

std::string Txn::next_id(std::string_view prefix) {
    const auto n = store_.next_id_.fetch_add(1);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%012llu", static_cast<unsigned long long>(n));
    std::string id(prefix);
    id += '_';
    id += buf;
    return id;
}

// ---------------------------------------------------------------------------
// Snapshot

std::optional<Record> Snapshot::get(const Key& key) const {
    const auto coll = collections_.find(key.collection);
    if (coll == collections_.end()) return std::nullopt;
    const auto it = coll->second.find(key.id);
    if (it == coll->second.end()) return std::nullopt;
    return it->second;
}

std::vector<Record> Snapshot::scan(const std::string& collection) const {
    std::vector<Record> out;
    const auto coll = collections_.find(collection);
    if (coll == collections_.end()) return out;
    out.reserve(coll->second.size());
    for (const auto& [id, rec] : coll->second) out.push_back(rec);
    return out;
}

// ---------------------------------------------------------------------------
// Store

Store::Store(Options options) : options_(std::move(options)) {
    if (options_.max_attempts < 1) options_.max_attempts = 1;
    if (options_.dir) recover();
}

Store::~Store() {
    try {
        close();
    } catch (...) {
    }
    if (journal_fd_ >= 0) ::close(journal_fd_);
    if (lock_fd_ >= 0) ::close(lock_fd_);
}

void Store::ensure_alive() const {
    if (dead_.load()) throw Error(ErrorCode::StorageFailure, "store is closed");
}

void Store::fault(FaultPoint point) {
    if (!options_.fault_hook) return;
    try {
        options_.fault_hook(point);
    } catch (const SimulatedCrash&) {
        dead_.store(true);
        throw;
    }
}

std::uint64_t Store::collection_version_locked(const std::string& collection) const {
    const auto it = collection_versions_.find(collection);
    return it == collection_versions_.end() ? 0 : it->second;
}

std::optional<Record> Store::get(const Key& key) const {
    ensure_alive();
    std::shared_lock lock(mu_);
    const auto coll = data_.find(key.collection);
    if (coll == data_.end()) return std::nullopt;
    const auto it = coll->second.find(key.id);
    if (it == coll->second.end() || !it->second.payload) return std::nullopt;
    return Record{key, it->second.version, *it->second.payload};
}

Record Store::put(const Key& key, Json payload) {
    auto written = run([&](Txn& txn) { txn.put(key, payload); });
    return written.front();
}

std::vector<Record> Store::run(const std::function<void(Txn&)>& body) {
    ensure_alive();
    thread_local std::minstd_rand jitter{std::random_device{}()};
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        const bool exclusive = options_.pessimistic_final_attempt && attempt == options_.max_attempts;
        if (exclusive) {
            std::unique_lock lock(mu_);
            ensure_alive();
            Txn txn(*this, true);
            body(txn);
            return commit_locked(txn);
        }
        Txn txn(*this, false);
        try {
            body(txn);
        } catch (...) {
            // A failure decided on stale reads is not a real failure: retry.
            bool stale = false;
            {
                std::shared_lock lock(mu_);
                stale = !dead_.load() && !validate_locked(txn);
            }
            if (!stale) throw;
            continue;
        }
        {
            std::unique_lock lock(mu_);
            ensure_alive();
            if (validate_locked(txn)) return commit_locked(txn);
        }
        // Randomized backoff spreads out contenders on a hot key.
        const auto cap = 1u << std::min(attempt, 8);
        std::this_thread::sleep_for(std::chrono::microseconds(jitter() % (cap * 4)));
    }
    throw Error(ErrorCode::ConflictExhausted,
                "transaction conflicted " + std::to_string(options_.max_attempts) + " times");
}

bool Store::validate_locked(const Txn& txn) const {
    for (const auto& [key, version] : txn.read_versions_) {
        std::uint64_t current = 0;
        if (const auto coll = data_.find(key.collection); coll != data_.end()) {
            if (const auto it = coll->second.find(key.id); it != coll->second.end()) current = it->second.version;
        }
        if (current != version) return false;
    }
    for (const auto& [collection, version] : txn.scan_versions_) {
        if (collection_version_locked(collection) != version) return false;
    }
    return true;
}

std::vector<Record> Store::commit_locked(Txn& txn) {
    std::vector<Record> written;
    if (txn.writes_.empty()) return written;

    Json writes = Json::array();
    for (const auto& [key, payload] : txn.writes_) {
        std::uint64_t version = 1;
        if (const auto coll = data_.find(key.collection); coll != data_.end()) {
            if (const auto it = coll->second.find(key.id); it != coll->second.end()) version = it->second.version + 1;
        }
        writes.push_back({{"c", key.collection}, {"i", key.id}, {"v", version}, {"p", payload ? *payload : Json()}});
    }
    const auto seq = commit_seq_.load() + 1;
    if (options_.dir) {
        const Json body{{"ids", next_id_.load()}, {"w", writes}};
        write_journal_locked(seq, dump(body));
    }
    commit_seq_.store(seq);
    apply_locked(seq, writes, &written);

    if (options_.dir && options_.snapshot_every > 0 && ++commits_since_checkpoint_ >= options_.snapshot_every) {
        checkpoint_locked();
    }
    return written;
}

void Store::apply_locked(std::uint64_t /*seq*/, const Json& writes, std::vector<Record>* out) {
    for (const auto& w : writes) {
        const Key key{w.at("c").get<std::string>(), w.at("i").get<std::string>()};
        const auto version = w.at("v").get<std::uint64_t>();
        auto& entry = data_[key.collection][key.id];
        if (version != entry.version + 1) corrupt("version gap on " + key.collection + "/" + key.id);
        entry.version = version;
        const auto& payload = w.at("p");
        if (payload.is_null()) {
            entry.payload.reset();
        } else {
            entry.payload = payload;
        }
        ++collection_versions_[key.collection];
        if (out) out->push_back(Record{key, version, entry.payload ? *entry.payload : Json()});
    }
}

void Store::write_journal_locked(std::uint64_t seq, const std::string& body) {
    const auto seq_text = std::to_string(seq);
    const std::string record =
        "T " + seq_text + " " + std::to_string(body.size()) + " " + crc_hex(seq_text + " " + body) + " " + body + "\n";
    const std::string commit = "C " + seq_text + " " + crc_hex("C " + seq_text) + "\n";

    fault(FaultPoint::BeforeJournalWrite);
    try {
        fault(FaultPoint::TornJournalWrite);
    } catch (const SimulatedCrash&) {
        write_all(journal_fd_, std::string_view(record).substr(0, record.size() / 2));
        throw;
    }
    write_all(journal_fd_, record);
    fault(FaultPoint::BeforeCommitMark);
    write_all(journal_fd_, commit);
    if (options_.fsync && ::fdatasync(journal_fd_) != 0) io_failure("fdatasync journal");
    fault(FaultPoint::AfterCommitMark);
}

void Store::checkpoint() {
    ensure_alive();
    std::unique_lock lock(mu_);
    checkpoint_locked();
}

void Store::checkpoint_locked() {
    if (!options_.dir) return;
    const auto dir = *options_.dir;
    const auto seq = commit_seq_.load();

    std::string content = "GOLIBSNAP 1 " + std::to_string(seq) + " " + std::to_string(next_id_.load()) + "\n";
    for (const auto& [collection, rows] : data_) {
        for (const auto& [id, entry] : rows) {
            const Json row{{"c", collection}, {"i", id}, {"v", entry.version},
                           {"p", entry.payload ? *entry.payload : Json()}};
            const auto text = dump(row);
            content += crc_hex(text) + " " + text + "\n";
        }
    }
    content += "END " + crc_hex(content) + "\n";

    const auto tmp = dir / kSnapshotTmp;
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) io_failure("open snapshot.tmp");
    try {
        write_all(fd, content);
        if (::fsync(fd) != 0) io_failure("fsync snapshot.tmp");
    } catch (...) {
        ::close(fd);
        throw;
    }
    ::close(fd);
    fault(FaultPoint::SnapshotTempWritten);

    fs::rename(tmp, dir / kSnapshot);
    if (const int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC); dfd >= 0) {
        ::fsync(dfd);
        ::close(dfd);
    }
    fault(FaultPoint::SnapshotInstalled);

    if (::ftruncate(journal_fd_, 0) != 0) io_failure("truncate journal");
    snapshot_seq_ = seq;
    commits_since_checkpoint_ = 0;
}

void Store::recover() {
    const auto dir = *options_.dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::StorageFailure, "cannot create " + dir.string() + ": " + ec.message());

    lock_fd_ = ::open((dir / kLock).c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (lock_fd_ < 0) io_failure("open LOCK");
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
        throw Error(ErrorCode::StorageFailure, "data directory " + dir.string() + " is in use by another process");
    }

    fs::remove(dir / kSnapshotTmp, ec);
    if (fs::exists(dir / kSnapshot)) load_snapshot(dir / kSnapshot);
    replay_journal(dir / kJournal);

    journal_fd_ = ::open((dir / kJournal).c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (journal_fd_ < 0) io_failure("open journal");
}

void Store::load_snapshot(const fs::path& path) {
    const auto content = read_file(path);
    const auto trailer = content.rfind("END ");
    if (trailer == std::string::npos || content.empty() || content.back() != '\n') corrupt("snapshot trailer missing");
    const std::string_view body(content.data(), trailer);
    const std::string_view trailer_line(content.data() + trailer, content.size() - trailer - 1);
    if (trailer_line.substr(4) != crc_hex(body)) corrupt("snapshot checksum mismatch");

    std::size_t pos = 0;
    bool header = true;
    while (pos < body.size()) {
        const auto nl = body.find('\n', pos);
        if (nl == std::string_view::npos) corrupt("snapshot line unterminated");
        const auto line = body.substr(pos, nl - pos);
        pos = nl + 1;
        if (header) {
            const auto f = split_fields(line, 3);
            if (f.size() != 4 || f[0] != "GOLIBSNAP" || f[1] != "1") corrupt("snapshot header");
            snapshot_seq_ = parse_u64(f[2]);
            next_id_.store(parse_u64(f[3]));
            header = false;
            continue;
        }
        const auto f = split_fields(line, 1);
        if (f.size() != 2 || f[0] != crc_hex(f[1])) corrupt("snapshot record checksum");
        Json row;
        try {
            row = Json::parse(f[1]);
        } catch (const Json::exception&) {
            corrupt("snapshot record json");
        }
        Entry entry;
        entry.version = row.at("v").get<std::uint64_t>();
        if (!row.at("p").is_null()) entry.payload = row.at("p");
        const auto collection = row.at("c").get<std::string>();
        data_[collection][row.at("i").get<std::string>()] = std::move(entry);
        ++collection_versions_[collection];
    }
    if (header) corrupt("snapshot header missing");
    commit_seq_.store(snapshot_seq_);
}

void Store::replay_journal(const fs::path& path) {
    if (!fs::exists(path)) return;
    const auto content = read_file(path);

    struct Pending {
        std::uint64_t seq;
        Json body;
    };
    std::optional<Pending> pending;
    std::size_t committed_end = 0;
    std::size_t pos = 0;

    while (pos < content.size()) {
        const auto nl = content.find('\n', pos);
        const std::string_view rest(content.data() + pos, content.size() - pos);
        if (nl == std::string::npos) {
            // Unterminated tail: acceptable only as a prefix of the append
            // that was in flight when the process died.
            if (pending) {
                const auto seq_text = std::to_string(pending->seq);
                const auto expected = "C " + seq_text + " " + crc_hex("C " + seq_text) + "\n";
                if (expected.compare(0, rest.size(), rest) != 0) corrupt("journal tail is not a torn commit mark");
            } else if (rest.front() != 'T') {
                corrupt("journal tail is not a torn transaction record");
            }
            break;
        }
        const std::string_view line(content.data() + pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) corrupt("empty journal line");

        if (line[0] == 'T') {
            if (pending) corrupt("transaction record without commit mark");
            const auto f = split_fields(line, 4);
            if (f.size() != 5 || f[0] != "T") corrupt("transaction record fields");
            const auto seq = parse_u64(f[1]);
            if (parse_u64(f[2]) != f[4].size()) corrupt("transaction record length");
            if (f[3] != crc_hex(std::string(f[1]) + " " + std::string(f[4]))) corrupt("transaction record checksum");
            Json body;
            try {
                body = Json::parse(f[4]);
            } catch (const Json::exception&) {
                corrupt("transaction record json");
            }
            pending = Pending{seq, std::move(body)};
        } else if (line[0] == 'C') {
            const auto f = split_fields(line, 2);
            if (f.size() != 3 || f[0] != "C") corrupt("commit mark fields");
            if (f[2] != crc_hex("C " + std::string(f[1]))) corrupt("commit mark checksum");
            const auto seq = parse_u64(f[1]);
            if (!pending || pending->seq != seq) corrupt("commit mark without transaction");
            if (seq > commit_seq_.load()) {
                if (seq != commit_seq_.load() + 1) corrupt("journal sequence gap");
                apply_locked(seq, pending->body.at("w"), nullptr);
                commit_seq_.store(seq);
            }
            next_id_.store(std::max(next_id_.load(), pending->body.at("ids").get<std::uint64_t>()));
            pending.reset();
            committed_end = pos;
        } else {
            corrupt("unknown journal record");
        }
    }

    if (committed_end != content.size()) {
        // Drop the uncommitted or torn tail so new appends start clean.
        fs::resize_file(path, committed_end);
    }
}

std::vector<Record> Store::query(const std::string& collection, const Predicate& predicate, const Order& order,
                                 const PageRequest& page) const {
    ensure_alive();
    std::vector<Record> rows;
    {
        std::shared_lock lock(mu_);
        const auto coll = data_.find(collection);
        if (coll != data_.end()) {
            for (const auto& [id, entry] : coll->second) {
                if (!entry.payload) continue;
                Record rec{{collection, id}, entry.version, *entry.payload};
                if (!predicate || predicate(rec)) rows.push_back(std::move(rec));
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [&](const Record& a, const Record& b) { return record_before(order, a, b); });

    auto first = rows.begin();
    if (page.after) {
        first = std::upper_bound(rows.begin(), rows.end(), *page.after,
                                 [&](const Record& a, const Record& b) { return record_before(order, a, b); });
    }
    const auto available = static_cast<std::size_t>(rows.end() - first);
    const auto take = std::min(available, page.limit);
    return {std::make_move_iterator(first), std::make_move_iterator(first + static_cast<std::ptrdiff_t>(take))};
}

Snapshot Store::snapshot(const std::vector<std::string>& collections) const {
    ensure_alive();
    Snapshot snap;
    std::shared_lock lock(mu_);
    for (const auto& collection : collections) {
        auto& out = snap.collections_[collection];
        const auto coll = data_.find(collection);
        if (coll == data_.end()) continue;
        for (const auto& [id, entry] : coll->second) {
            if (entry.payload) out.emplace(id, Record{{collection, id}, entry.version, *entry.payload});
        }
    }
    return snap;
}

std::size_t Store::size() const {
    std::shared_lock lock(mu_);
    std::size_t n = 0;
    for (const auto& [collection, rows] : data_) {
        for (const auto& [id, entry] : rows) n += entry.payload ? 1 : 0;
    }
    return n;
}

void Store::close() {
    if (dead_.load()) return;
    if (options_.dir) {
        std::unique_lock lock(mu_);
        checkpoint_locked();
    }
    dead_.store(true);
    if (journal_fd_ >= 0) {
        ::close(journal_fd_);
        journal_fd_ = -1;
    }
    if (lock_fd_ >= 0) {
        ::close(lock_fd_);
        lock_fd_ = -1;
    }
}

}  // namespace golib::store
