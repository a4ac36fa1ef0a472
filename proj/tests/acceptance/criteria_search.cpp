// Search results against brute-force oracles, and notification fan-out
// against the follow graph.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "criteria.hpp"
#include "oracles.hpp"
#include "world.hpp"

namespace golib::acceptance {
namespace {

using scheduling::Category;
using testing::World;

const std::vector<std::string> kSyllables{"sa", "na", "om", "ar", "psy", "li", "ra", "ch", "Yo", "GA"};
const std::vector<std::string> kProfessions{"Psychologist", "Psychiatrist", "Chef", "Lawyer", "Poet", "Yoga Teacher"};

std::string word(std::mt19937& rng, int syllables) {
    std::string out;
    for (int i = 0; i < syllables; ++i) out += kSyllables[rng() % kSyllables.size()];
    return out;
}

std::string padded(std::size_t n) {
    auto s = std::to_string(n);
    return std::string(12 - s.size(), '0') + s;
}

struct Dataset {
    std::vector<BookProfile> books;
    std::vector<Event> events;
    std::map<std::string, std::string> host_names;
};

/// Writes a random catalogue straight into the store. Ratings repeat the
/// same means through different fractions; start times and venues repeat to
/// force ties in every ordering.
Dataset seed_dataset(World& w, std::mt19937& rng) {
    Dataset d;
    const auto now = w.clock->now();
    const std::size_t n_books = rng() % 101;
    const std::size_t n_events = rng() % 201;
    std::vector<std::size_t> book_numbers(500), event_numbers(1000);
    std::iota(book_numbers.begin(), book_numbers.end(), 1);
    std::iota(event_numbers.begin(), event_numbers.end(), 1);
    std::shuffle(book_numbers.begin(), book_numbers.end(), rng);
    std::shuffle(event_numbers.begin(), event_numbers.end(), rng);

    for (std::size_t i = 0; i < n_books; ++i) {
        BookProfile p;
        p.account_id = "acct_" + padded(book_numbers[i]);
        p.display_name = word(rng, 2 + static_cast<int>(rng() % 2));
        if (rng() % 6 == 0 && !d.books.empty()) p.display_name = d.books.back().display_name;
        p.profession = kProfessions[rng() % kProfessions.size()];
        const auto scale = 1 + static_cast<std::int64_t>(rng() % 3);
        p.review_count = static_cast<std::int64_t>(rng() % 4);
        for (std::int64_t r = 0; r < p.review_count; ++r) p.rating_sum += 1 + static_cast<std::int64_t>(rng() % 5);
        p.rating_sum *= scale;
        p.review_count *= scale;
        d.books.push_back(p);
        d.host_names[p.account_id] = p.display_name;
    }

    std::uniform_real_distribution<double> lat(24.0, 27.0), lon(66.5, 70.0);
    std::vector<Venue> venues;
    for (int i = 0; i < 40; ++i) venues.push_back({"Venue " + std::to_string(i), "", lat(rng), lon(rng)});
    for (std::size_t i = 0; i < n_events; ++i) {
        Event e;
        e.id = "evt_" + padded(event_numbers[i]);
        e.kind = rng() % 4 == 0 ? EventKind::PrivateSession : EventKind::PublicEvent;
        e.title = word(rng, 1) + " " + word(rng, 2);
        if (!d.books.empty() && rng() % 3 != 0) e.host_book_id = d.books[rng() % d.books.size()].account_id;
        e.venue = rng() % 2 ? venues[rng() % venues.size()] : Venue{"Own", "", lat(rng), lon(rng)};
        e.starts_at = now + Seconds{(static_cast<long>(rng() % 480) - 120) * 1800};
        if (rng() % 5 == 0 && !d.events.empty()) e.starts_at = d.events[rng() % d.events.size()].starts_at;
        e.ends_at = e.starts_at + Seconds{3600};
        e.capacity = e.kind == EventKind::PrivateSession ? 1 : 20;
        e.created_by = e.host_book_id.value_or("acct_admin");
        d.events.push_back(e);
    }

    w.p().store().run([&](store::Txn& txn) {
        for (const auto& b : d.books) txn.put(key(collections::kBooks, b.account_id), Json(b));
        for (const auto& e : d.events) txn.put(key(collections::kEvents, e.id), Json(e));
    });
    return d;
}

std::string query_text(std::mt19937& rng, const Dataset& d) {
    switch (rng() % 4) {
        case 0: return kSyllables[rng() % kSyllables.size()];
        case 1:
            if (!d.books.empty()) return testing::lower(d.books[rng() % d.books.size()].display_name).substr(0, 3);
            [[fallthrough]];
        case 2: return word(rng, 2);
        default: return "zz";  // matches nothing
    }
}

void search_oracles(Verdict& v) {
    constexpr int kDatasets = 100;
    std::mt19937 rng(7);
    std::size_t max_events = 0, max_books = 0, queries = 0;
    for (int ds = 0; ds < kDatasets; ++ds) {
        World w;
        const auto d = seed_dataset(w, rng);
        max_events = std::max(max_events, d.events.size());
        max_books = std::max(max_books, d.books.size());
        const auto tag = "dataset " + std::to_string(ds) + ": ";
        const auto now = w.clock->now();
        auto event_id = [](const Event& e) { return e.id; };
        auto book_id = [](const BookProfile& b) { return b.account_id; };

        for (int q = 0; q < 12; ++q, ++queries) {
            scheduling::EventQuery query;
            query.category = static_cast<Category>(rng() % 3);
            if (rng() % 3) query.text = query_text(rng, d);
            if (rng() % 4 == 0) query.from = now + Seconds{(static_cast<long>(rng() % 200) - 100) * 1800};
            const auto from = query.from.value_or(now);
            std::vector<Event> expected;
            for (const auto& e : d.events) {
                if (e.starts_at < from) continue;
                if (query.category == Category::Events && e.kind != EventKind::PublicEvent) continue;
                if (query.category == Category::PrivateSession && e.kind != EventKind::PrivateSession) continue;
                if (query.text && !testing::contains_ci(e.title, *query.text) &&
                    !(e.host_book_id && testing::contains_ci(d.host_names.at(*e.host_book_id), *query.text))) {
                    continue;
                }
                expected.push_back(e);
            }
            std::sort(expected.begin(), expected.end(), testing::oracle_event_precedes);
            v.expect(testing::ids_of(w.p().scheduling.search_events(query), event_id) ==
                         testing::ids_of(expected, event_id),
                     tag + "search_events mismatch for text '" + query.text.value_or("") + "'");
        }

        for (int q = 0; q < 12; ++q, ++queries) {
            directory::BookQuery query;
            if (rng() % 2) query.text = query_text(rng, d);
            if (rng() % 2) query.profession = testing::lower(kProfessions[rng() % kProfessions.size()]).substr(0, 4);
            std::vector<BookProfile> expected;
            for (const auto& b : d.books) {
                if (query.text && !testing::contains_ci(b.display_name, *query.text)) continue;
                if (query.profession && !testing::contains_ci(b.profession, *query.profession)) continue;
                expected.push_back(b);
            }
            std::sort(expected.begin(), expected.end(), testing::oracle_book_precedes);
            v.expect(testing::ids_of(w.p().directory.search_books(query), book_id) ==
                         testing::ids_of(expected, book_id),
                     tag + "search_books mismatch for text '" + query.text.value_or("") + "'");
        }

        std::uniform_real_distribution<double> lat(23.5, 27.5), lon(66.0, 70.5);
        for (int q = 0; q < 12; ++q, ++queries) {
            const bool at_venue = !d.events.empty() && rng() % 3 == 0;
            const auto& anchor = at_venue ? d.events[rng() % d.events.size()].venue : Venue{};
            const double clat = at_venue ? anchor.latitude : lat(rng);
            const double clon = at_venue ? anchor.longitude : lon(rng);
            double radius = q == 0 ? 20000.0 : 0.5 + static_cast<double>(rng() % 300);
            // Keep the radius clear of any venue distance so rounding cannot
            // decide membership.
            for (bool clear = false; !clear;) {
                clear = true;
                for (const auto& e : d.events) {
                    if (std::abs(testing::chord_distance_km(clat, clon, e.venue.latitude, e.venue.longitude) - radius) <
                        1e-6) {
                        radius += 0.01;
                        clear = false;
                    }
                }
            }
            struct Hit {
                double km;
                Event event;
            };
            std::vector<Hit> expected;
            for (const auto& e : d.events) {
                if (e.starts_at < now) continue;
                const double km = testing::chord_distance_km(clat, clon, e.venue.latitude, e.venue.longitude);
                if (km <= radius) expected.push_back({km, e});
            }
            std::sort(expected.begin(), expected.end(), [](const Hit& a, const Hit& b) {
                const bool same_place = a.event.venue.latitude == b.event.venue.latitude &&
                                        a.event.venue.longitude == b.event.venue.longitude;
                if (!same_place) return a.km < b.km;
                return testing::oracle_event_precedes(a.event, b.event);
            });
            const auto got = w.p().scheduling.events_near(clat, clon, radius);
            bool same = got.size() == expected.size();
            for (std::size_t i = 0; same && i < got.size(); ++i) {
                same = got[i].event.id == expected[i].event.id && std::abs(got[i].distance_km - expected[i].km) < 1e-6;
            }
            v.expect(same, tag + "events_near mismatch at radius " + std::to_string(radius));
        }
    }
    v.note(std::to_string(kDatasets) + " datasets (up to " + std::to_string(max_events) + " events, " +
           std::to_string(max_books) + " books), " + std::to_string(queries) + " queries");
}

struct Delivery {
    std::set<std::string> recipients;
    std::size_t rows = 0;
};

std::map<std::pair<NotificationKind, std::string>, Delivery> deliveries(Platform& p) {
    std::map<std::pair<NotificationKind, std::string>, Delivery> out;
    for (const auto& rec : p.store().query(collections::kNotifications, nullptr, nullptr)) {
        const auto n = rec.payload.get<Notification>();
        auto& d = out[{n.kind, n.subject_id}];
        d.recipients.insert(n.recipient_id);
        ++d.rows;
    }
    return out;
}

std::set<std::string> all_accounts(Platform& p) {
    std::set<std::string> out;
    for (const auto& rec : p.store().query(collections::kAccounts, nullptr, nullptr)) out.insert(rec.key.id);
    return out;
}

void fan_out(Verdict& v) {
    std::mt19937 rng(91);
    std::size_t events = 0, slots = 0, largest = 0;
    for (const int population : {500, 311, 97, 12, 2}) {
        World w;
        std::vector<Principal> admins{w.admin()};
        std::vector<Principal> books, readers;
        const int n_books = std::max(1, population / 10);
        for (int i = 0; i < n_books; ++i) books.push_back(w.book(admins[0]));
        while (static_cast<int>(books.size() + readers.size() + admins.size()) < population) {
            if (rng() % 40 == 0) {
                admins.push_back(w.admin());
            } else {
                readers.push_back(w.reader());
            }
        }
        largest = std::max(largest, all_accounts(w.p()).size());

        // Random follow graph, with some follows withdrawn again. Books may
        // follow other books.
        std::map<std::string, std::set<std::string>> followers;
        const double density = 0.02 + (rng() % 30) / 100.0;
        std::bernoulli_distribution follows(density);
        std::vector<Principal> followers_pool = readers;
        followers_pool.insert(followers_pool.end(), books.begin(), books.end());
        for (const auto& r : followers_pool) {
            for (const auto& b : books) {
                if (r.account_id == b.account_id || !follows(rng)) continue;
                w.p().directory.set_follow(r, b.account_id, true);
                followers[b.account_id].insert(r.account_id);
                if (rng() % 7 == 0) {
                    w.p().directory.set_follow(r, b.account_id, false);
                    followers[b.account_id].erase(r.account_id);
                }
            }
        }

        // Events created concurrently by random creators.
        std::vector<Principal> creators;
        for (int i = 0; i < 12; ++i) {
            creators.push_back(rng() % 2 ? admins[rng() % admins.size()] : books[rng() % books.size()]);
        }
        std::vector<Event> created(creators.size());
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int t = 0; t < 8; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < creators.size(); i = next++) {
                    auto draft = w.draft(5, 0, Seconds{86400 + static_cast<long>(i) * 3600});
                    created[i] = w.p().scheduling.create_event(creators[i], draft);
                }
            });
        }
        for (auto& t : pool) t.join();

        std::vector<AvailabilitySlot> posted;
        for (std::size_t b = 0; b < books.size(); ++b) {
            const auto start = testing::t0() + Seconds{static_cast<long>(b) * 7200 + 3600};
            posted.push_back(w.p().scheduling.post_availability(books[b], start, start + Seconds{3600}));
        }

        const auto everyone = all_accounts(w.p());
        const auto got = deliveries(w.p());
        const auto tag = "population " + std::to_string(population) + ": ";
        for (std::size_t i = 0; i < created.size(); ++i, ++events) {
            auto expected = everyone;
            expected.erase(creators[i].account_id);
            const auto it = got.find({NotificationKind::EventCreated, created[i].id});
            const Delivery d = it == got.end() ? Delivery{} : it->second;
            v.expect(d.recipients == expected, tag + "EventCreated recipients for " + created[i].id);
            v.expect(d.rows == d.recipients.size(), tag + "duplicate EventCreated rows for " + created[i].id);
            v.expect(w.p().comms.notify_event_created(created[i]) == 0, tag + "replayed fan-out delivered again");
        }
        for (std::size_t b = 0; b < posted.size(); ++b, ++slots) {
            const auto it = got.find({NotificationKind::FreeSlotPosted, posted[b].id});
            const Delivery d = it == got.end() ? Delivery{} : it->second;
            v.expect(d.recipients == followers[books[b].account_id], tag + "FreeSlotPosted recipients for " + posted[b].id);
            v.expect(d.rows == d.recipients.size(), tag + "duplicate FreeSlotPosted rows for " + posted[b].id);
        }
    }
    v.note(std::to_string(events) + " events and " + std::to_string(slots) + " slots, up to " +
           std::to_string(largest) + " accounts");
}

}  // namespace

std::vector<Criterion> search_criteria() {
    return {
        {"search-oracles", search_oracles},
        {"fan-out-exactness", fan_out},
    };
}

}  // namespace golib::acceptance
