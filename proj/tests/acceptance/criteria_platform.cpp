// Crash recovery of the store and of a whole platform, and the gateway's
// authorization and error contract.

#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "api.hpp"
#include "consistency.hpp"
#include "crash_harness.hpp"
#include "criteria.hpp"
#include "world.hpp"

namespace golib::acceptance {
namespace {

using testing::TempDir;

const std::vector<std::string> kAllCollections{
    collections::kAccounts,      collections::kEmailIndex,     collections::kSessions,   collections::kOtps,
    collections::kBookRequests,  collections::kPendingRequests, collections::kBooks,      collections::kFollows,
    collections::kReviews,       collections::kEvents,         collections::kSlots,      collections::kBookings,
    collections::kSeatInventory, collections::kIntents,        collections::kBookingIntent, collections::kLedger,
    collections::kLoyalty,       collections::kConversations,  collections::kMessages,   collections::kNotifications,
};

using Dump = std::map<std::pair<std::string, std::string>, std::pair<std::uint64_t, Json>>;

Dump dump(const store::Store& s) {
    Dump out;
    for (const auto& c : kAllCollections) {
        for (const auto& rec : s.query(c, nullptr, nullptr)) out[{c, rec.key.id}] = {rec.version, rec.payload};
    }
    return out;
}

bool is_durable(store::FaultPoint point) {
    return point == store::FaultPoint::AfterCommitMark || point == store::FaultPoint::SnapshotTempWritten ||
           point == store::FaultPoint::SnapshotInstalled;
}

/// The kv workload: exact expected contents at every kill point.
void store_kill_points(Verdict& v, int& kills, std::set<std::string>& points) {
    constexpr int kSteps = 30;
    constexpr std::size_t kSnapshotEvery = 6;
    TempDir probe;
    const int sites = testing::count_crash_sites(probe.path(), kSteps, kSnapshotEvery);
    v.expect(sites >= 20, "only " + std::to_string(sites) + " crash sites");
    for (int kill = 0; kill < sites; ++kill, ++kills) {
        TempDir dir;
        const auto outcome = testing::run_until_crash(dir.path(), kSteps, kSnapshotEvery, kill);
        const auto tag = "store kill " + std::to_string(kill) + " at " + testing::to_string(outcome.point) + ": ";
        v.expect(outcome.crashed, tag + "did not crash");
        points.insert(testing::to_string(outcome.point));
        store::Options options;
        options.dir = dir.path();
        testing::Model first;
        {
            store::Store recovered(options);
            first = testing::contents(recovered);
        }
        v.expect(first == outcome.expected, tag + "recovered contents differ from the committed prefix");
        store::Store again(options);
        v.expect(testing::contents(again) == first, tag + "second recovery differs");
    }
}

/// A whole platform killed in the middle of real operations. Everything
/// committed before the interrupted step survives and the saga stays
/// consistent.
void platform_kill_points(Verdict& v, int& kills, std::set<std::string>& points) {
    struct Script {
        testing::World* w = nullptr;
        std::optional<Principal> admin, book, reader;
        std::optional<Event> event;
        std::optional<Booking> booking;
        std::optional<PaymentIntent> intent;
    };
    const std::vector<std::function<void(Script&)>> steps{
        [](Script& s) { s.admin = s.w->admin("boss"); },
        [](Script& s) { s.book = s.w->book(*s.admin, "guide"); },
        [](Script& s) { s.reader = s.w->reader("fan"); },
        [](Script& s) { s.w->p().directory.set_follow(*s.reader, s.book->account_id, true); },
        [](Script& s) { s.event = s.w->event(*s.book, 3, 120000); },
        [](Script& s) { s.booking = s.w->p().scheduling.book_seat(*s.reader, s.event->id); },
        [](Script& s) { s.intent = s.w->p().payments.create_payment_intent(*s.reader, s.booking->id, Provider::JazzCash); },
        [](Script& s) {
            s.w->p().payments.confirm_payment(*s.reader, s.intent->id, payments::ProviderOutcome::Success);
        },
        [](Script& s) { s.w->p().comms.send_message(*s.reader, s.book->account_id, "see you there"); },
        [](Script& s) { s.w->p().scheduling.cancel_booking(*s.reader, s.booking->id); },
    };

    for (int kill = 0;; ++kill) {
        TempDir dir;
        int seen = 0;
        std::optional<store::FaultPoint> hit;
        std::optional<Dump> before;
        std::size_t crashed_step = steps.size();
        {
            store::Options store_options;
            store_options.snapshot_every = 5;
            store_options.fault_hook = [&](store::FaultPoint point) {
                if (seen++ == kill) {
                    hit = point;
                    throw store::SimulatedCrash{};
                }
            };
            testing::World w(dir.path(), testing::fast_config(), std::move(store_options));
            Script s;
            s.w = &w;
            for (std::size_t i = 0; i < steps.size(); ++i) {
                before = dump(w.p().store());
                try {
                    steps[i](s);
                } catch (const store::SimulatedCrash&) {
                    crashed_step = i;
                    break;
                } catch (const Error& e) {
                    // A store that died mid-operation reports StorageFailure.
                    if (!hit) throw;
                    crashed_step = i;
                    break;
                }
            }
        }
        if (!hit) break;  // every kill point visited
        ++kills;
        points.insert(testing::to_string(*hit));
        const auto tag = "platform kill " + std::to_string(kill) + " at " + testing::to_string(*hit) + " in step " +
                         std::to_string(crashed_step) + ": ";

        PlatformOptions reopen;
        reopen.data_dir = dir.path();
        reopen.config = testing::fast_config();
        reopen.clock = std::make_shared<ManualClock>(testing::t0());
        Dump recovered;
        {
            Platform p(reopen);
            recovered = dump(p.store());
            for (const auto& problem : testing::saga_violations(p)) v.expect(false, tag + problem);
        }
        // Everything committed by earlier steps is still there.
        bool prefix_intact = true;
        for (const auto& [k, rec] : *before) {
            const auto it = recovered.find(k);
            if (it == recovered.end()) {
                // Only the in-flight step may have erased it, and only once durable.
                prefix_intact = prefix_intact && is_durable(*hit);
            } else if (it->second.first < rec.first) {
                prefix_intact = false;
            }
        }
        v.expect(prefix_intact, tag + "state committed before the step was lost");
        Platform again(reopen);
        v.expect(dump(again.store()) == recovered, tag + "second recovery differs");
    }
}

void bit_flips(Verdict& v, int& flips) {
    TempDir dir;
    const auto live = dir.path() / "live";
    {
        testing::World w(live);
        const auto admin = w.admin();
        const auto reader = w.reader();
        const auto event = w.event(admin, 5, 90000);
        w.paid_booking(reader, event.id);
        w.platform->store().checkpoint();
        w.p().comms.send_message(reader, admin.account_id, "after the checkpoint");
        // Leave both a snapshot and a non-empty journal behind.
        std::filesystem::create_directories(dir.path() / "pristine");
        for (const char* f : {"journal.log", "snapshot.dat"}) {
            std::filesystem::copy_file(live / f, dir.path() / "pristine" / f);
        }
    }
    std::mt19937 rng(17);
    for (const char* file : {"journal.log", "snapshot.dat"}) {
        const auto size = std::filesystem::file_size(dir.path() / "pristine" / file);
        v.expect(size > 0, std::string(file) + " is empty");
        const std::size_t stride = std::max<std::size_t>(1, size / 400);
        for (std::size_t offset = rng() % stride; offset < size; offset += stride, ++flips) {
            const auto target = dir.path() / "flip";
            std::filesystem::remove_all(target);
            std::filesystem::copy(dir.path() / "pristine", target);
            testing::flip_bit(target / file, offset, static_cast<int>(rng() % 8));
            store::Options options;
            options.dir = target;
            std::string outcome = "opened";
            try {
                store::Store s(options);
            } catch (const Error& e) {
                outcome = std::string(error_info(e.code()).code);
            }
            v.expect(outcome == testing::wire(ErrorCode::CorruptStore),
                     std::string(file) + " flip at " + std::to_string(offset) + ": " + outcome);
        }
    }
}

void durability(Verdict& v) {
    int store_kills = 0, platform_kills = 0, flips = 0;
    std::set<std::string> points;
    store_kill_points(v, store_kills, points);
    platform_kill_points(v, platform_kills, points);
    bit_flips(v, flips);
    v.expect(points.size() == 6, std::to_string(points.size()) + " distinct fault points reached");
    v.note(std::to_string(store_kills) + " store + " + std::to_string(platform_kills) + " platform kill points, " +
           std::to_string(flips) + " bit flips");
}

void api_contract(Verdict& v) {
    testing::ContractWorld cw;
    const auto matrix = testing::sweep_authorization_matrix(cw);
    v.expect(matrix.pairs == gateway::route_table().size() * 4, "matrix did not cover every pair");
    for (const auto& f : matrix.failures) v.expect(false, f);

    // Malformed and hostile requests: every response is enveloped, and
    // every error parses as an ApiError carrying its HTTP status.
    std::mt19937 rng(5);
    const std::vector<std::string> methods{"GET", "POST", "PUT", "PATCH", "DELETE"};
    const std::vector<std::string> bodies{"",          "{",          "[]",      "null",      "\"text\"",
                                          "{\"a\":1}", "{\"email\":5}", "{\"limit\":-1}", "\x01\x02",
                                          "{\"stars\":\"many\",\"body\":[]}"};
    const std::vector<std::string> ids{"x", "acct_000000000999", "..%2F..", "", std::string(300, 'z'), "%00"};
    std::size_t requests = 0, errors = 0;
    const auto& table = gateway::route_table();
    for (int i = 0; i < 3000; ++i, ++requests) {
        const auto& spec = table[rng() % table.size()];
        gateway::Request request;
        request.method = rng() % 4 == 0 ? methods[rng() % methods.size()] : spec.method;
        request.path = spec.pattern;
        if (const auto open = request.path.find('{'); open != std::string::npos) {
            const auto close = request.path.find('}', open);
            const auto replacement = rng() % 2 ? cw.concrete_path(spec.pattern).substr(open) : ids[rng() % ids.size()];
            request.path = rng() % 2 ? cw.concrete_path(spec.pattern) : request.path.substr(0, open) + replacement +
                                                                             request.path.substr(close + 1);
        }
        if (rng() % 10 == 0) request.path += "/extra";
        request.body = bodies[rng() % bodies.size()];
        if (rng() % 3) request.query["limit"] = std::to_string(static_cast<int>(rng() % 300) - 50);
        if (rng() % 4 == 0) request.query["cursor"] = ids[rng() % ids.size()];
        const auto role = static_cast<Role>(rng() % 4);
        if (const auto token = cw.token_for(role)) request.headers["Authorization"] = "Bearer " + *token;
        if (rng() % 10 == 0) request.headers["Authorization"] = "Bearer not-a-token";
        const auto response = cw.api.gateway.dispatch(request);
        const auto problem = testing::envelope_problem(response);
        v.expect(problem.empty(), request.method + " " + request.path + ": " + problem);
        if (response.status >= 400) {
            ++errors;
            const auto parsed = gateway::ApiError::parse(response.body, response.status);
            v.expect(parsed && parsed->status == response.status,
                     request.method + " " + request.path + ": error does not parse");
            v.expect(response.status != 500, request.method + " " + request.path + ": internal error " +
                                                 response.body.dump());
        }
    }
    v.note(std::to_string(matrix.pairs) + " role x route pairs, " + std::to_string(requests) +
           " hostile requests (" + std::to_string(errors) + " errors parsed)");
}

}  // namespace

std::vector<Criterion> platform_criteria() {
    return {
        {"durability", durability},
        {"api-contract", api_contract},
    };
}

}  // namespace golib::acceptance
