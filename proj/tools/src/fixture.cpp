#include "fixture.hpp"

#include <stdexcept>

#include "golib/errors.hpp"

namespace golib::cli {

namespace {

const Json& section(const Json& fixture, const char* name) {
    static const Json empty = Json::array();
    if (!fixture.contains(name)) return empty;
    const auto& s = fixture.at(name);
    if (!s.is_array()) throw std::invalid_argument(std::string("fixture section '") + name + "' must be an array");
    return s;
}

std::string text(const Json& item, const char* field, const std::string& fallback = {}) {
    if (!item.contains(field)) {
        if (!fallback.empty()) return fallback;
        throw std::invalid_argument(std::string("fixture entry is missing '") + field + "': " + item.dump());
    }
    if (!item.at(field).is_string()) throw std::invalid_argument(std::string("'") + field + "' must be a string");
    return item.at(field).get<std::string>();
}

identity::Registration registration(const Json& item) {
    const auto email = text(item, "email");
    const auto local = email.substr(0, email.find('@'));
    return {email,
            text(item, "first_name", local),
            text(item, "last_name", "Member"),
            text(item, "city", "Hyderabad"),
            text(item, "country", "Pakistan"),
            text(item, "password"),
            text(item, "contact_number", "03000000000")};
}

Timestamp instant(const Json& item, const char* field) { return parse_rfc3339(text(item, field)); }

class Seeder {
public:
    explicit Seeder(Platform& p) : p_(p) {}

    Principal account(const Json& item, Role role) {
        const auto reg = registration(item);
        const auto email = identity::normalize_email(reg.email);
        if (const auto existing = p_.identity.find_by_email(email)) return remember(email, existing->id);
        const auto created =
            role == Role::Admin ? p_.identity.provision_admin(reg) : p_.identity.register_user(reg);
        return remember(email, created.id);
    }

    Principal known(const std::string& email) const {
        const auto it = report.accounts.find(identity::normalize_email(email));
        if (it != report.accounts.end()) return Principal{it->second};
        if (const auto existing = p_.identity.find_by_email(identity::normalize_email(email))) {
            return Principal{existing->id};
        }
        throw std::invalid_argument("fixture refers to unknown account " + email);
    }

    Principal any_admin() const {
        for (const auto& rec : p_.store().query(collections::kAccounts, nullptr, nullptr)) {
            const auto account = rec.payload.get<AccountRecord>().account;
            if (account.role == Role::Admin) return Principal{account.id};
        }
        throw std::invalid_argument("books need an admin to accept them; add one under 'admins'");
    }

    void vaccinate(const Principal& who, const std::string& email) {
        if (p_.identity.account(who.account_id).vaccination) return;
        p_.identity.upload_vaccination_card(who, "fixture-front-" + email, "fixture-back-" + email);
    }

    void make_book(const Principal& who, const Json& item, const Principal& admin) {
        if (p_.identity.account(who.account_id).role == Role::Book) return;
        directory::BookRequestForm form;
        const auto account = p_.identity.account(who.account_id);
        form.name = text(item, "display_name", account.first_name + " " + account.last_name);
        form.phone = account.contact_number;
        form.cnic = text(item, "cnic", "42101-0000000-1");
        form.field_of_expertise = text(item, "profession");
        form.vaccination_image = "fixture-vaccination-" + account.email;
        form.resume = "fixture-resume-" + account.email;
        const auto request = p_.directory.submit_become_book_request(who, form);
        p_.directory.decide_become_book_request(admin, request.id, directory::Decision::Accepted);
    }

    bool event_exists(const std::string& creator, const std::string& title, Timestamp starts_at) const {
        for (const auto& rec : p_.store().query(collections::kEvents, nullptr, nullptr)) {
            const auto e = rec.payload.get<Event>();
            if (e.created_by == creator && e.title == title && e.starts_at == starts_at) return true;
        }
        return false;
    }

    SeedReport report;

private:
    Principal remember(const std::string& email, const std::string& id) {
        report.accounts[email] = id;
        return Principal{id};
    }

    Platform& p_;
};

}  // namespace

Json SeedReport::to_json() const {
    return {{"accounts", accounts}, {"events", events}, {"slots", slots}, {"follows", follows}};
}

SeedReport seed_fixture(Platform& platform, const Json& fixture) {
    if (!fixture.is_object()) throw std::invalid_argument("fixture must be a JSON object");
    Seeder seeder(platform);

    for (const auto& item : section(fixture, "admins")) seeder.account(item, Role::Admin);
    for (const auto& item : section(fixture, "readers")) {
        const auto who = seeder.account(item, Role::Reader);
        if (item.value("vaccinated", true)) seeder.vaccinate(who, text(item, "email"));
    }
    const auto& books = section(fixture, "books");
    if (!books.empty()) {
        const auto admin = seeder.any_admin();
        for (const auto& item : books) {
            const auto who = seeder.account(item, Role::Reader);
            seeder.vaccinate(who, text(item, "email"));
            seeder.make_book(who, item, admin);
        }
    }
    for (const auto& item : section(fixture, "follows")) {
        platform.directory.set_follow(seeder.known(text(item, "reader")),
                                      seeder.known(text(item, "book")).account_id, true);
        ++seeder.report.follows;
    }
    for (const auto& item : section(fixture, "slots")) {
        const auto book = seeder.known(text(item, "book"));
        const auto starts = instant(item, "starts_at"), ends = instant(item, "ends_at");
        bool exists = false;
        for (const auto& s : platform.scheduling.slots(book.account_id)) {
            if (s.starts_at == starts && s.ends_at == ends) {
                seeder.report.slots.push_back(s.id);
                exists = true;
            }
        }
        if (!exists) seeder.report.slots.push_back(platform.scheduling.post_availability(book, starts, ends).id);
    }
    for (const auto& item : section(fixture, "events")) {
        const auto host = seeder.known(text(item, "host"));
        scheduling::EventDraft draft;
        const auto kind = parse_event_kind(text(item, "kind", "PublicEvent"));
        if (!kind) throw std::invalid_argument("unknown event kind in " + item.dump());
        draft.kind = *kind;
        draft.title = text(item, "title");
        if (!item.contains("venue")) throw std::invalid_argument("event is missing 'venue': " + item.dump());
        draft.venue = item.at("venue").get<Venue>();
        draft.starts_at = instant(item, "starts_at");
        draft.ends_at = instant(item, "ends_at");
        draft.capacity = item.value("capacity", std::int64_t{1});
        draft.price_minor = item.value("price_minor", std::int64_t{0});
        if (seeder.event_exists(host.account_id, draft.title, draft.starts_at)) continue;
        seeder.report.events.push_back(platform.scheduling.create_event(host, draft).id);
    }
    return std::move(seeder.report);
}

}  // namespace golib::cli
