#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "world.hpp"

using namespace golib;
using golib::testing::error_of;
using golib::testing::wire;

namespace {

std::set<std::string> recipients(Platform& p, NotificationKind kind, const std::string& subject) {
    std::set<std::string> out;
    std::size_t rows = 0;
    for (const auto& rec : p.store().query(collections::kNotifications, nullptr, nullptr)) {
        const auto n = rec.payload.get<Notification>();
        if (n.kind != kind || n.subject_id != subject) continue;
        out.insert(n.recipient_id);
        ++rows;
    }
    CHECK(rows == out.size());  // no duplicates
    return out;
}

std::set<std::string> all_accounts(Platform& p) {
    std::set<std::string> out;
    for (const auto& rec : p.store().query(collections::kAccounts, nullptr, nullptr)) out.insert(rec.key.id);
    return out;
}

}  // namespace

TEST_CASE("messaging a book requires following it") {
    testing::World w;
    const auto admin = w.admin();
    const auto book = w.book(admin);
    const auto reader = w.reader();
    auto& comms = w.p().comms;
    CHECK(error_of([&] { comms.send_message(reader, book.account_id, "hello"); }) == wire(ErrorCode::NotFollowing));
    w.p().directory.set_follow(reader, book.account_id, true);
    const auto first = comms.send_message(reader, book.account_id, "hello");
    CHECK(first.follow_verified);
    const auto convs = comms.conversations(reader);
    REQUIRE(convs.size() == 1);
    CHECK(convs[0].reader_id == reader.account_id);
    CHECK(convs[0].book_id == book.account_id);
    CHECK(comms.list_conversation(reader, first.conversation_id).messages.size() == 1);

    // The book may reply, and the thread survives an unfollow for replies.
    const auto reply = comms.send_message(book, reader.account_id, "hi there");
    CHECK(reply.conversation_id == first.conversation_id);
    CHECK(comms.send_to_conversation(book, first.conversation_id, "anything else?").sender_id == book.account_id);
    w.p().directory.set_follow(reader, book.account_id, false);
    CHECK(error_of([&] { comms.send_message(reader, book.account_id, "still there?"); }) ==
          wire(ErrorCode::NotFollowing));

    CHECK(error_of([&] { comms.send_message(book, w.reader().account_id, "cold call"); }) ==
          wire(ErrorCode::NoConversation));
    CHECK(error_of([&] { comms.send_message(reader, w.reader().account_id, "hey"); }) == wire(ErrorCode::UnknownBook));
    CHECK(error_of([&] { comms.send_message(reader, "acct_none", "hey"); }) == wire(ErrorCode::UnknownBook));
}

TEST_CASE("readers may message event management without following") {
    testing::World w;
    const auto admin = w.admin();
    const auto reader = w.reader();
    const auto m = w.p().comms.send_message(reader, admin.account_id, "is there parking?");
    CHECK_FALSE(m.follow_verified);
    CHECK(w.p().comms.send_message(admin, reader.account_id, "yes").conversation_id == m.conversation_id);
    CHECK(error_of([&] { w.p().comms.send_message(admin, w.reader().account_id, "promo"); }) ==
          wire(ErrorCode::NoConversation));
}

TEST_CASE("message bodies are validated") {
    testing::World w;
    const auto admin = w.admin();
    const auto reader = w.reader();
    auto& comms = w.p().comms;
    CHECK(error_of([&] { comms.send_message(reader, admin.account_id, ""); }) == wire(ErrorCode::EmptyBody));
    CHECK(error_of([&] { comms.send_message(reader, admin.account_id, " \n\t "); }) == wire(ErrorCode::EmptyBody));
    CHECK(error_of([&] { comms.send_message(reader, admin.account_id, std::string(4096, 'x')); }) == "no error");
    CHECK(error_of([&] { comms.send_message(reader, admin.account_id, std::string(4097, 'x')); }) ==
          wire(ErrorCode::BodyTooLong));
    std::string urdu;
    for (int i = 0; i < 4096; ++i) urdu += "\xD8\xB3";  // U+0633, two bytes each
    CHECK(error_of([&] { comms.send_message(reader, admin.account_id, urdu); }) == "no error");
}

TEST_CASE("conversation history: order, participants, pagination") {
    testing::World w;
    const auto admin = w.admin();
    const auto book = w.book(admin);
    const auto reader = w.reader();
    w.p().directory.set_follow(reader, book.account_id, true);
    auto& comms = w.p().comms;
    const auto a = comms.send_message(reader, book.account_id, "A");
    const auto b = comms.send_message(book, reader.account_id, "B");
    const auto c = comms.send_message(reader, book.account_id, "C");
    const auto page = comms.list_conversation(book, a.conversation_id);
    REQUIRE(page.messages.size() == 3);
    CHECK(page.messages[0].id == a.id);
    CHECK(page.messages[1].id == b.id);
    CHECK(page.messages[2].id == c.id);
    CHECK_FALSE(page.next_cursor);
    CHECK(error_of([&] { comms.list_conversation(w.reader(), a.conversation_id); }) == wire(ErrorCode::NotParticipant));
    CHECK(error_of([&] { comms.send_to_conversation(w.reader(), a.conversation_id, "x"); }) ==
          wire(ErrorCode::NotParticipant));
    CHECK(error_of([&] { comms.list_conversation(reader, "conv-none"); }) == wire(ErrorCode::UnknownConversation));
    CHECK(error_of([&] { comms.list_conversation(reader, a.conversation_id, "msg_bogus"); }) ==
          wire(ErrorCode::ValidationFailed));

    std::vector<std::string> oracle{a.id, b.id, c.id};
    std::mt19937 rng(5);
    for (int i = 3; i < 250; ++i) {
        if (rng() % 3 == 0) w.clock->advance(Seconds{1});
        const auto& sender = i % 4 ? reader : book;
        const auto& peer = i % 4 ? book : reader;
        oracle.push_back(comms.send_message(sender, peer.account_id, "m" + std::to_string(i)).id);
    }
    std::vector<std::string> seen;
    std::vector<std::size_t> sizes;
    std::optional<std::string> cursor;
    do {
        const auto p = comms.list_conversation(reader, a.conversation_id, cursor, 100);
        sizes.push_back(p.messages.size());
        for (const auto& m : p.messages) seen.push_back(m.id);
        cursor = p.next_cursor;
    } while (cursor);
    CHECK(sizes == std::vector<std::size_t>{100, 100, 50});
    CHECK(seen == oracle);
}

TEST_CASE("event creation notifies everyone but the creator, once") {
    testing::World w;
    const auto admin = w.admin();
    std::vector<Principal> users;
    for (int i = 0; i < 8; ++i) users.push_back(w.reader());
    const auto book = w.book(admin);  // 10 accounts in all
    const auto event = w.event(book);
    const auto got = recipients(w.p(), NotificationKind::EventCreated, event.id);
    CHECK(got.size() == 9);
    CHECK_FALSE(got.contains(book.account_id));
    CHECK(w.p().comms.notify_event_created(event) == 0);
    CHECK(recipients(w.p(), NotificationKind::EventCreated, event.id).size() == 9);
}

TEST_CASE("free slots notify exactly the followers") {
    testing::World w;
    const auto admin = w.admin();
    const auto book = w.book(admin);
    const auto lonely = w.book(admin);
    const auto r1 = w.reader(), r2 = w.reader(), r3 = w.reader();
    w.p().directory.set_follow(r1, book.account_id, true);
    w.p().directory.set_follow(r2, book.account_id, true);
    w.p().directory.set_follow(r3, lonely.account_id, true);
    w.p().directory.set_follow(r3, lonely.account_id, false);
    const auto slot = w.p().scheduling.post_availability(book, testing::t0() + Seconds{3600}, testing::t0() + Seconds{7200});
    CHECK(recipients(w.p(), NotificationKind::FreeSlotPosted, slot.id) ==
          std::set<std::string>{r1.account_id, r2.account_id});
    CHECK(w.p().comms.notify_free_slot(slot) == 0);
    const auto quiet = w.p().scheduling.post_availability(lonely, testing::t0() + Seconds{3600}, testing::t0() + Seconds{7200});
    CHECK(recipients(w.p(), NotificationKind::FreeSlotPosted, quiet.id).empty());
}

TEST_CASE("fan-out oracles over random populations and follow graphs") {
    std::mt19937 rng(61);
    for (int round = 0; round < 3; ++round) {
        testing::World w;
        const auto admin = w.admin();
        std::vector<Principal> books, readers;
        for (int i = 0; i < 4; ++i) books.push_back(w.book(admin));
        const int population = 20 + static_cast<int>(rng() % 60);
        for (int i = 0; i < population; ++i) readers.push_back(w.reader());
        std::map<std::string, std::set<std::string>> followers;
        for (const auto& r : readers) {
            for (const auto& b : books) {
                if (rng() % 3 == 0) {
                    w.p().directory.set_follow(r, b.account_id, true);
                    followers[b.account_id].insert(r.account_id);
                }
            }
        }
        for (int e = 0; e < 5; ++e) {
            const auto& creator = rng() % 2 ? admin : books[rng() % books.size()];
            const auto event = w.event(creator);
            auto expected = all_accounts(w.p());
            expected.erase(creator.account_id);
            CHECK(recipients(w.p(), NotificationKind::EventCreated, event.id) == expected);
        }
        for (std::size_t b = 0; b < books.size(); ++b) {
            const auto start = testing::t0() + Seconds{static_cast<long>(b) * 7200};
            const auto slot = w.p().scheduling.post_availability(books[b], start, start + Seconds{3600});
            CHECK(recipients(w.p(), NotificationKind::FreeSlotPosted, slot.id) == followers[books[b].account_id]);
        }
    }
}

TEST_CASE("notifications: newest first, mark read is idempotent and recipient-only") {
    testing::World w;
    const auto admin = w.admin();
    const auto reader = w.reader();
    const auto first = w.event(admin);
    w.clock->advance(Seconds{60});
    const auto second = w.event(admin);
    auto& comms = w.p().comms;
    const auto list = comms.notifications(reader);
    REQUIRE(list.size() == 2);
    CHECK(list[0].subject_id == second.id);
    CHECK(list[1].subject_id == first.id);
    CHECK(comms.unread_count(reader) == 2);
    CHECK(comms.mark_read(reader, list[0].id).read);
    CHECK(comms.mark_read(reader, list[0].id).read);
    CHECK(comms.unread_count(reader) == 1);
    CHECK(comms.notifications(reader, true).size() == 1);
    CHECK(error_of([&] { comms.mark_read(w.reader(), list[1].id); }) == wire(ErrorCode::NotRecipient));
    CHECK(error_of([&] { comms.mark_read(reader, "ntf-none"); }) == wire(ErrorCode::UnknownNotification));
    CHECK(list[0].id == comms::notification_id(reader.account_id, NotificationKind::EventCreated, second.id));
}

TEST_CASE("book decisions notify the applicant") {
    testing::World w;
    const auto admin = w.admin();
    const auto reader = w.reader();
    const auto request = w.p().directory.submit_become_book_request(
        reader, {"Amna", "0300", "4210112345671", "Poet", "vax", "cv"});
    w.p().directory.decide_become_book_request(admin, request.id, directory::Decision::Rejected);
    const auto list = w.p().comms.notifications(reader);
    REQUIRE(list.size() == 1);
    CHECK(list[0].kind == NotificationKind::BookDecision);
    CHECK(list[0].subject_id == request.id);
}
