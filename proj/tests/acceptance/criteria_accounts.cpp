// Become-a-book approvals and one-time password resets.

#include <algorithm>
#include <atomic>
#include <latch>
#include <map>
#include <random>
#include <thread>

#include "api.hpp"
#include "criteria.hpp"
#include "world.hpp"

namespace golib::acceptance {
namespace {

using testing::error_of;
using testing::wire;
using testing::World;

directory::BookRequestForm form(const std::string& name) {
    return {name, "03001234567", "42101-1234567-1", "Psychologist", "vax-bytes", "resume-bytes"};
}

bool has_accepted(const std::vector<BecomeBookRequest>& requests) {
    return std::any_of(requests.begin(), requests.end(),
                       [](const BecomeBookRequest& r) { return r.state == RequestState::Accepted; });
}

void approval_property(Verdict& v) {
    std::mt19937 rng(2026);
    long applied = 0;
    for (int round = 0; round < 30; ++round) {
        World w;
        auto& dir = w.p().directory;
        std::vector<Principal> admins{w.admin(), w.admin()};
        std::vector<Principal> readers;
        for (int i = 0; i < 8; ++i) readers.push_back(w.reader());
        std::map<std::string, RequestState> decided;
        const auto tag = "round " + std::to_string(round) + ": ";
        for (int step = 0; step < 80; ++step) {
            const auto op = rng() % 4;
            const auto& admin = admins[rng() % admins.size()];
            if (op == 0) {
                const auto& who = readers[rng() % readers.size()];
                if (error_of([&] { dir.submit_become_book_request(who, form("Applicant")); }) == "no error") {
                    ++applied;
                }
            } else if (op <= 2) {
                const auto all = dir.list_requests(admin);
                if (all.empty()) continue;
                const auto& target = all[rng() % all.size()];
                const auto d = op == 1 ? directory::Decision::Accepted : directory::Decision::Rejected;
                const auto result = error_of([&] { dir.decide_become_book_request(admin, target.id, d); });
                v.expect((result == "no error") == (target.state == RequestState::Pending),
                         tag + "decision on " + std::string(to_string(target.state)) + " request gave " + result);
                if (result == "no error") ++applied;
            } else {
                // Non-admins may never decide.
                const auto all = dir.list_requests(admin);
                if (all.empty()) continue;
                const auto& who = readers[rng() % readers.size()];
                v.expect(error_of([&] {
                             dir.decide_become_book_request(who, all.front().id, directory::Decision::Accepted);
                         }) == wire(ErrorCode::NotAdmin),
                         tag + "non-admin decided a request");
            }
            for (const auto& r : dir.list_requests(admins[0])) {
                if (r.state == RequestState::Pending) continue;
                const auto [it, fresh] = decided.emplace(r.id, r.state);
                v.expect(it->second == r.state, tag + r.id + " changed after its decision");
            }
            for (const auto& who : readers) {
                const bool accepted = has_accepted(dir.my_requests(who));
                const bool is_book = w.p().identity.account(who.account_id).role == Role::Book;
                const bool profile = error_of([&] { dir.book(who.account_id); }) == "no error";
                v.expect(accepted == is_book, tag + who.account_id + " role disagrees with its requests");
                v.expect(profile == is_book, tag + who.account_id + " profile disagrees with its role");
            }
        }
    }

    // Racing decisions on one pending request.
    int races = 0;
    for (int trial = 0; trial < 40; ++trial, ++races) {
        World w;
        std::vector<Principal> admins;
        for (int i = 0; i < 8; ++i) admins.push_back(w.admin());
        const auto applicant = w.reader();
        const auto request = w.p().directory.submit_become_book_request(applicant, form("Racer"));
        std::atomic<int> wins{0}, already{0};
        std::latch go(static_cast<std::ptrdiff_t>(admins.size()));
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < admins.size(); ++i) {
            pool.emplace_back([&, i] {
                const auto d = (i + trial) % 2 ? directory::Decision::Accepted : directory::Decision::Rejected;
                go.arrive_and_wait();
                try {
                    w.p().directory.decide_become_book_request(admins[i], request.id, d);
                    ++wins;
                } catch (const Error& e) {
                    if (e.code() == ErrorCode::AlreadyDecided) ++already;
                }
            });
        }
        for (auto& t : pool) t.join();
        const auto tag = "race " + std::to_string(trial) + ": ";
        v.expect(wins == 1, tag + std::to_string(wins.load()) + " terminal writes");
        v.expect(already == 7, tag + std::to_string(already.load()) + " AlreadyDecided");
        const auto mine = w.p().directory.my_requests(applicant);
        v.expect(mine.size() == 1 && mine[0].state != RequestState::Pending, tag + "request not decided");
        const auto account = w.p().identity.account(applicant.account_id);
        v.expect((account.role == Role::Book) == has_accepted(mine), tag + "role disagrees with decision");
        v.expect(w.p().outbox().messages_to(account.email).size() == 1, tag + "expected one decision mail");
    }
    v.note(std::to_string(applied) + " random transitions, " + std::to_string(races) + " decision races");
}

void otp_suite(Verdict& v) {
    int scenarios = 0;
    // Single use, and the old password and sessions stop working.
    {
        World w;
        const auto who = w.reader("amna");
        const auto email = std::string("amna@example.pk");
        const auto old_session = w.p().identity.authenticate(email, "correct-horse-amna").token;
        w.p().identity.request_password_reset(email);
        const auto code = testing::last_code(w.p().outbox(), email);
        v.expect(code.size() == 6, "reset mail carries a 6-digit code");
        v.expect(error_of([&] { w.p().identity.redeem_otp(email, code, "fresh-password-1"); }) == "no error",
                 "first redemption succeeds");
        v.expect(error_of([&] { w.p().identity.redeem_otp(email, code, "fresh-password-2"); }) ==
                     wire(ErrorCode::OtpConsumed),
                 "second redemption is OtpConsumed");
        v.expect(error_of([&] { w.p().identity.authenticate(email, "correct-horse-amna"); }) ==
                     wire(ErrorCode::InvalidCredentials),
                 "old password rejected");
        v.expect(error_of([&] { w.p().identity.authenticate(email, "fresh-password-1"); }) == "no error",
                 "new password accepted");
        v.expect(error_of([&] { w.p().identity.resolve(old_session); }) != "no error",
                 "sessions from before the reset are revoked");
        (void)who;
        ++scenarios;
    }
    // Expiry exactly one second after the TTL, for several TTLs.
    for (const long ttl : {60L, 600L, 3600L}) {
        Config config = testing::fast_config();
        config.otp_ttl = Seconds{ttl};
        World w(std::nullopt, config);
        w.reader("bilal");
        const std::string email = "bilal@example.pk";
        const auto tag = "ttl " + std::to_string(ttl) + ": ";

        w.p().identity.request_password_reset(email);
        const auto on_time = testing::last_code(w.p().outbox(), email);
        w.clock->advance(Seconds{ttl});
        v.expect(error_of([&] { w.p().identity.redeem_otp(email, on_time, "fresh-password-1"); }) == "no error",
                 tag + "code valid at exactly ttl");

        w.p().identity.request_password_reset(email);
        const auto late = testing::last_code(w.p().outbox(), email);
        w.clock->advance(Seconds{ttl + 1});
        v.expect(error_of([&] { w.p().identity.redeem_otp(email, late, "fresh-password-2"); }) ==
                     wire(ErrorCode::OtpExpired),
                 tag + "code expired at ttl+1");
        v.expect(error_of([&] { w.p().identity.authenticate(email, "fresh-password-1"); }) == "no error",
                 tag + "expired redemption left the password alone");
        ++scenarios;
    }
    // A newer request supersedes the older code.
    for (int round = 0; round < 20; ++round) {
        World w;
        w.reader("sana");
        const std::string email = "sana@example.pk";
        w.p().identity.request_password_reset(email);
        const auto first = testing::last_code(w.p().outbox(), email);
        w.clock->advance(Seconds{5});
        w.p().identity.request_password_reset(email);
        const auto second = testing::last_code(w.p().outbox(), email);
        if (first != second) {
            v.expect(error_of([&] { w.p().identity.redeem_otp(email, first, "fresh-password-1"); }) ==
                         wire(ErrorCode::OtpInvalid),
                     "superseded code rejected");
        }
        v.expect(error_of([&] { w.p().identity.redeem_otp(email, second, "fresh-password-1"); }) == "no error",
                 "latest code accepted");
        ++scenarios;
    }
    // Responses do not reveal whether an address is registered.
    {
        World w;
        w.reader("omar");
        const std::string known = "omar@example.pk", unknown = "ghost@example.pk";
        auto& id = w.p().identity;
        v.expect(id.request_password_reset(known) == id.request_password_reset(unknown),
                 "reset acknowledgement identical for known and unknown addresses");
        v.expect(w.p().outbox().messages_to(unknown).empty(), "no mail sent to an unknown address");

        auto failure = [](auto&& f) {
            try {
                f();
            } catch (const Error& e) {
                return std::string(error_info(e.code()).code) + "|" + e.what();
            }
            return std::string("no error");
        };
        v.expect(failure([&] { id.authenticate(known, "wrong-password"); }) ==
                     failure([&] { id.authenticate(unknown, "wrong-password"); }),
                 "login failure identical for known and unknown addresses");
        v.expect(failure([&] { id.redeem_otp(known, "000000", "fresh-password-1"); }) ==
                     failure([&] { id.redeem_otp(unknown, "000000", "fresh-password-1"); }),
                 "redeem failure identical for known and unknown addresses");

        testing::Api api(w.p());
        const auto a = api.call("POST", "/v1/auth/forgot", std::nullopt, {{"email", known}});
        const auto b = api.call("POST", "/v1/auth/forgot", std::nullopt, {{"email", unknown}});
        v.expect(a.status == b.status && a.body == b.body, "HTTP reset response identical");
        const auto c = api.call("POST", "/v1/auth/login", std::nullopt, {{"email", known}, {"password", "nope-nope"}});
        const auto d =
            api.call("POST", "/v1/auth/login", std::nullopt, {{"email", unknown}, {"password", "nope-nope"}});
        v.expect(c.status == d.status && c.body == d.body, "HTTP login failure identical");
        ++scenarios;
    }
    v.note(std::to_string(scenarios) + " scenarios");
}

}  // namespace

std::vector<Criterion> account_criteria() {
    return {
        {"approval-workflow", approval_property},
        {"otp-suite", otp_suite},
    };
}

}  // namespace golib::acceptance
