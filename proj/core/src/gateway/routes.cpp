#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "detail.hpp"
#include "gateway/context.hpp"
#include "golib/gateway/gateway.hpp"

namespace golib::gateway {

namespace {

const std::set<Role> kEveryone{Role::Guest, Role::Reader, Role::Book, Role::Admin};
const std::set<Role> kMembers{Role::Reader, Role::Book, Role::Admin};
const std::set<Role> kApplicants{Role::Reader, Role::Book};
const std::set<Role> kHosts{Role::Book, Role::Admin};
const std::set<Role> kBooks{Role::Book};
const std::set<Role> kAdmins{Role::Admin};

struct Document {
    const char* title;
    const char* body;
};

const std::map<std::string, Document>& documents() {
    static const std::map<std::string, Document> docs{
        {"help",
         {"Help",
          "Browse events and book profiles as a guest. Sign up to book seats, follow books, send messages and "
          "leave reviews. Upload both sides of your vaccination card before booking a seat. Seats are held for "
          "a limited time while you pay; unpaid holds are released automatically."}},
        {"faq",
         {"Frequently asked questions",
          "How do I become a book? Submit a request with your expertise, CNIC, vaccination card and resume; an "
          "administrator reviews it. How do loyalty points work? Every captured payment earns one point per 1000 "
          "minor units; 500 points unlock a 5% discount and 2000 points a 10% discount. Can I message a book? "
          "Yes, once you follow it."}},
        {"about",
         {"About us",
          "A social reading platform where people are the books: readers book time with experts at public "
          "events or private sessions, in person or online."}},
    };
    return docs;
}

std::optional<std::int64_t> parse_int(std::string_view text) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::optional<double> parse_double(const std::string& text) {
    if (text.empty()) return std::nullopt;
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) return std::nullopt;
        return value;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

Json book_json(const BookProfile& book) {
    Json j = book;
    const auto mean = book.rating_mean();
    j["rating_mean"] = mean ? Json(*mean) : Json(nullptr);
    return j;
}

template <typename T>
Json array_of(const std::vector<T>& values) {
    Json out = Json::array();
    for (const auto& v : values) out.push_back(v);
    return out;
}

// --- identity --------------------------------------------------------------

Response register_account(Gateway::Context& ctx) {
    auto body = ctx.reader();
    identity::Registration reg;
    reg.email = body.text("email");
    reg.password = body.text("password");
    reg.first_name = body.text("first_name");
    reg.last_name = body.text("last_name");
    reg.city = body.optional_text("city").value_or("");
    reg.country = body.optional_text("country").value_or("");
    reg.contact_number = body.optional_text("contact_number").value_or("");
    ctx.validate();
    return ok(ctx.platform.identity.register_user(reg), 201);
}

Response login(Gateway::Context& ctx) {
    auto body = ctx.reader();
    if (const auto provider = body.optional_text("provider")) {
        ctx.validate();
        ctx.platform.identity.authenticate_with(*provider);
    }
    const auto email = body.text("email");
    const auto password = body.text("password");
    ctx.validate();
    const auto session = ctx.platform.identity.authenticate(email, password);
    const auto account = ctx.platform.identity.account(session.account_id);
    return ok({{"token", session.token},
               {"account_id", session.account_id},
               {"role", account.role},
               {"expires_at", session.expires_at}});
}

Response forgot(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto email = body.text("email");
    ctx.validate();
    return ok({{"message", ctx.platform.identity.request_password_reset(email).message}}, 202);
}

Response reset(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto email = body.text("email");
    const auto code = body.text("code");
    const auto password = body.text("new_password");
    ctx.validate();
    return ok({{"message", ctx.platform.identity.redeem_otp(email, code, password).message}});
}

Response logout(Gateway::Context& ctx) {
    ctx.platform.identity.revoke(*ctx.token);
    return ok({{"revoked", true}});
}

Response me(Gateway::Context& ctx) { return ok(ctx.platform.identity.account(ctx.principal().account_id)); }

Response update_me(Gateway::Context& ctx) {
    auto body = ctx.reader();
    identity::ProfileChanges changes;
    changes.email = body.optional_text("email");
    changes.first_name = body.optional_text("first_name");
    changes.last_name = body.optional_text("last_name");
    changes.city = body.optional_text("city");
    changes.country = body.optional_text("country");
    changes.contact_number = body.optional_text("contact_number");
    const auto old_password = body.optional_text("old_password");
    const auto new_password = body.optional_text("new_password");
    if (new_password && !old_password) body.reject("old_password", "is required to change the password");
    ctx.validate();
    return ok(ctx.platform.identity.update_account(ctx.principal(), changes, old_password, new_password));
}

Response upload_vaccination(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto front = body.bytes("front_image");
    const auto back = body.bytes("back_image");
    ctx.validate();
    return ok(ctx.platform.identity.upload_vaccination_card(ctx.principal(), front, back), 201);
}

Response my_bookings(Gateway::Context& ctx) {
    return paged(ctx, array_of(ctx.platform.scheduling.bookings_of(ctx.principal())));
}

Response my_loyalty(Gateway::Context& ctx) {
    const auto account = ctx.platform.payments.loyalty(ctx.principal().account_id);
    const auto tier = payments::tier_for_points(account.points);
    return ok({{"account_id", account.account_id},
               {"points", account.points},
               {"tier", to_string(tier)},
               {"discount_percent", payments::tier_percent(tier)}});
}

// --- directory -------------------------------------------------------------

Response list_books(Gateway::Context& ctx) {
    directory::BookQuery query;
    query.text = ctx.query("text");
    query.profession = ctx.query("profession");
    Json items = Json::array();
    for (const auto& book : ctx.platform.directory.search_books(query)) items.push_back(book_json(book));
    return paged(ctx, items);
}

Response get_book(Gateway::Context& ctx) { return ok(book_json(ctx.platform.directory.book(ctx.param("id")))); }

Response list_reviews(Gateway::Context& ctx) {
    ctx.platform.directory.book(ctx.param("id"));
    return paged(ctx, array_of(ctx.platform.directory.reviews(ctx.param("id"))));
}

Response post_review(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto stars = body.integer("stars");
    const auto text = body.optional_text("text").value_or("");
    ctx.validate();
    if (stars < INT32_MIN || stars > INT32_MAX) throw Error(ErrorCode::StarsOutOfRange, "stars must be 1..5");
    const auto result =
        ctx.platform.directory.post_review(ctx.principal(), ctx.param("id"), static_cast<int>(stars), text);
    return ok({{"review", result.review}, {"book", book_json(result.book)}}, 201);
}

Json follow_json(const directory::FollowStatus& status) {
    return {{"reader_id", status.reader_id},
            {"book_id", status.book_id},
            {"following", status.following},
            {"since", status.since ? Json(*status.since) : Json(nullptr)}};
}

Response follow_status(Gateway::Context& ctx) {
    const auto& reader = ctx.principal().account_id;
    const auto& book = ctx.param("id");
    ctx.platform.directory.book(book);
    return ok({{"reader_id", reader},
               {"book_id", book},
               {"following", ctx.platform.directory.is_following(reader, book)}});
}

Response follow(Gateway::Context& ctx) {
    return ok(follow_json(ctx.platform.directory.set_follow(ctx.principal(), ctx.param("id"), true)));
}

Response unfollow(Gateway::Context& ctx) {
    return ok(follow_json(ctx.platform.directory.set_follow(ctx.principal(), ctx.param("id"), false)));
}

Response list_book_requests(Gateway::Context& ctx) {
    if (ctx.caller.role != Role::Admin) {
        return paged(ctx, array_of(ctx.platform.directory.my_requests(ctx.principal())));
    }
    std::optional<RequestState> state;
    if (const auto raw = ctx.query("state")) {
        const auto wanted = detail::lowercase(*raw);
        for (const auto s : {RequestState::Pending, RequestState::Accepted, RequestState::Rejected}) {
            if (detail::lowercase(to_string(s)) == wanted) state = s;
        }
        if (!state) {
            throw Error(ErrorCode::ValidationFailed, "invalid state filter",
                        {{"state", "must be Pending, Accepted or Rejected"}});
        }
    }
    return paged(ctx, array_of(ctx.platform.directory.list_requests(ctx.principal(), state)));
}

Response submit_book_request(Gateway::Context& ctx) {
    auto body = ctx.reader();
    directory::BookRequestForm form;
    form.name = body.optional_text("name").value_or("");
    form.phone = body.optional_text("phone").value_or("");
    form.cnic = body.optional_text("cnic").value_or("");
    form.field_of_expertise = body.optional_text("field_of_expertise").value_or("");
    form.vaccination_image = body.bytes("vaccination_image");
    form.resume = body.bytes("resume");
    ctx.validate();
    return ok(ctx.platform.directory.submit_become_book_request(ctx.principal(), form), 201);
}

Response decide_book_request(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto raw = detail::lowercase(body.text("decision"));
    std::optional<directory::Decision> decision;
    if (raw == "accept" || raw == "accepted") decision = directory::Decision::Accepted;
    if (raw == "reject" || raw == "rejected") decision = directory::Decision::Rejected;
    if (!decision && !raw.empty()) body.reject("decision", "must be accept or reject");
    ctx.validate();
    return ok(ctx.platform.directory.decide_become_book_request(ctx.principal(), ctx.param("id"), *decision));
}

// --- scheduling ------------------------------------------------------------

Response list_events(Gateway::Context& ctx) {
    scheduling::EventQuery query;
    if (const auto raw = ctx.query("category")) {
        const auto category = scheduling::parse_category(*raw);
        if (!category) {
            throw Error(ErrorCode::ValidationFailed, "invalid category",
                        {{"category", "must be all, events or private_session"}});
        }
        query.category = *category;
    }
    query.text = ctx.query("text");
    const auto events = ctx.platform.scheduling.search_events(query);

    const auto lat = ctx.query("lat");
    const auto lon = ctx.query("lon");
    const auto radius = ctx.query("radius_km");
    if (!lat && !lon && !radius) return paged(ctx, array_of(events));

    std::vector<FieldError> errors;
    const auto check = [&](const std::optional<std::string>& raw, const char* name) {
        const auto value = raw ? parse_double(*raw) : std::nullopt;
        if (!value) errors.push_back({name, raw ? "must be a number" : "is required with lat, lon and radius_km"});
        return value.value_or(0);
    };
    const double latitude = check(lat, "lat");
    const double longitude = check(lon, "lon");
    const double radius_km = check(radius, "radius_km");
    if (!errors.empty()) throw Error(ErrorCode::ValidationFailed, "invalid location filter", errors);

    std::unordered_set<std::string> matching;
    for (const auto& e : events) matching.insert(e.id);
    Json items = Json::array();
    for (const auto& near : ctx.platform.scheduling.events_near(latitude, longitude, radius_km)) {
        if (!matching.contains(near.event.id)) continue;
        Json j = near.event;
        j["distance_km"] = near.distance_km;
        items.push_back(std::move(j));
    }
    return paged(ctx, items);
}

Response create_event(Gateway::Context& ctx) {
    auto body = ctx.reader();
    scheduling::EventDraft draft;
    const auto kind = body.text("kind");
    if (const auto parsed = parse_event_kind(kind)) {
        draft.kind = *parsed;
    } else if (!kind.empty()) {
        body.reject("kind", "must be PublicEvent or PrivateSession");
    }
    draft.title = body.text("title");
    auto venue = body.object("venue");
    draft.venue.name = venue.text("name");
    draft.venue.address = venue.optional_text("address").value_or("");
    draft.venue.latitude = venue.number("latitude");
    draft.venue.longitude = venue.number("longitude");
    draft.starts_at = body.timestamp("starts_at");
    draft.ends_at = body.timestamp("ends_at");
    draft.capacity = body.integer("capacity", 1);
    draft.price_minor = body.integer("price_minor", 0);
    if (draft.price_minor < 0) body.reject("price_minor", "must be non-negative");
    ctx.validate();
    return ok(ctx.platform.scheduling.create_event(ctx.principal(), draft), 201);
}

Response get_event(Gateway::Context& ctx) {
    const auto event = ctx.platform.scheduling.event(ctx.param("id"));
    Json j = event;
    j["seats_taken"] = ctx.platform.scheduling.seats_taken(event.id);
    return ok(std::move(j));
}

Response book_event(Gateway::Context& ctx) {
    return ok(ctx.platform.scheduling.book_seat(ctx.principal(), ctx.param("id")), 201);
}

Response list_availability(Gateway::Context& ctx) {
    const auto book = ctx.query("book_id");
    if (!book) throw Error(ErrorCode::ValidationFailed, "book_id is required", {{"book_id", "is required"}});
    ctx.platform.directory.book(*book);
    return paged(ctx, array_of(ctx.platform.scheduling.slots(*book)));
}

Response post_availability(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto starts = body.timestamp("starts_at");
    const auto ends = body.timestamp("ends_at");
    ctx.validate();
    return ok(ctx.platform.scheduling.post_availability(ctx.principal(), starts, ends), 201);
}

Response calendar(Gateway::Context& ctx) {
    std::vector<FieldError> errors;
    const auto read = [&](const char* name) {
        const auto raw = ctx.query(name);
        const auto value = raw ? parse_int(*raw) : std::nullopt;
        if (!value) errors.push_back({name, raw ? "must be an integer" : "is required"});
        return value.value_or(0);
    };
    const auto year = read("year");
    const auto month = read("month");
    if (!errors.empty()) throw Error(ErrorCode::ValidationFailed, "invalid calendar query", errors);
    if (month < 1 || month > 12 || year < 1970 || year > 9999) {
        throw Error(ErrorCode::InvalidMonth, "month must be 1..12 and year 1970..9999");
    }
    const auto view = ctx.platform.scheduling.calendar_month(ctx.caller.principal, static_cast<int>(year),
                                                             static_cast<unsigned>(month));
    Json days = Json::object();
    for (const auto& [day, events] : view.events_by_day) days[std::to_string(day)] = array_of(events);
    return ok({{"year", view.year},
               {"month", view.month},
               {"highlighted", view.highlighted},
               {"events_by_day", std::move(days)},
               {"availability_days", view.availability_days}});
}

Booking owned_booking(Gateway::Context& ctx) {
    auto booking = ctx.platform.scheduling.booking(ctx.param("id"));
    if (booking.reader_id != ctx.principal().account_id && ctx.caller.role != Role::Admin) {
        throw Error(ErrorCode::NotOwner, "not your booking");
    }
    return booking;
}

Response get_booking(Gateway::Context& ctx) {
    const auto booking = owned_booking(ctx);
    Json j = booking;
    j["payments"] = array_of(ctx.platform.payments.intents_for_booking(booking.id));
    return ok(std::move(j));
}

Response cancel_booking(Gateway::Context& ctx) {
    return ok(ctx.platform.scheduling.cancel_booking(ctx.principal(), ctx.param("id")));
}

// --- payments --------------------------------------------------------------

Response create_payment(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto provider = body.text("provider");
    ctx.validate();
    return ok(ctx.platform.payments.create_payment_intent(ctx.principal(), ctx.param("id"), provider), 201);
}

Response confirm_payment(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto raw = detail::lowercase(body.optional_text("outcome").value_or("success"));
    auto outcome = payments::ProviderOutcome::Success;
    if (raw == "failure") {
        outcome = payments::ProviderOutcome::Failure;
    } else if (raw != "success") {
        body.reject("outcome", "must be success or failure");
    }
    ctx.validate();
    return ok(ctx.platform.payments.confirm_payment(ctx.principal(), ctx.param("id"), outcome));
}

Response export_ledger(Gateway::Context& ctx) { return paged(ctx, array_of(ctx.platform.payments.ledger())); }

// --- comms -----------------------------------------------------------------

Response list_conversations(Gateway::Context& ctx) {
    return paged(ctx, array_of(ctx.platform.comms.conversations(ctx.principal())));
}

Response start_conversation(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto peer = body.text("peer_id");
    const auto text = body.text("body");
    ctx.validate();
    return ok(ctx.platform.comms.send_message(ctx.principal(), peer, text), 201);
}

Response list_messages(Gateway::Context& ctx) {
    std::optional<std::string> after;
    if (const auto cursor = ctx.query("cursor")) {
        const auto raw = decode_cursor(*cursor);
        if (!raw || !raw->starts_with("m:")) {
            throw Error(ErrorCode::ValidationFailed, "invalid cursor", {{"cursor", "not recognized"}});
        }
        after = raw->substr(2);
    }
    const auto page =
        ctx.platform.comms.list_conversation(ctx.principal(), ctx.param("id"), after, page_size(ctx));
    Json data{{"items", array_of(page.messages)}};
    if (page.next_cursor) data["next_cursor"] = encode_cursor("m:" + *page.next_cursor);
    return ok(std::move(data));
}

Response post_message(Gateway::Context& ctx) {
    auto body = ctx.reader();
    const auto text = body.text("body");
    ctx.validate();
    return ok(ctx.platform.comms.send_to_conversation(ctx.principal(), ctx.param("id"), text), 201);
}

Response list_notifications(Gateway::Context& ctx) {
    const auto unread = ctx.query("unread");
    if (unread && *unread != "true" && *unread != "false") {
        throw Error(ErrorCode::ValidationFailed, "invalid unread filter", {{"unread", "must be true or false"}});
    }
    const auto& principal = ctx.principal();
    auto response =
        paged(ctx, array_of(ctx.platform.comms.notifications(principal, unread && *unread == "true")));
    response.body["data"]["unread_count"] = ctx.platform.comms.unread_count(principal);
    return response;
}

Response read_notification(Gateway::Context& ctx) {
    return ok(ctx.platform.comms.mark_read(ctx.principal(), ctx.param("id")));
}

// --- content ---------------------------------------------------------------

Response content(Gateway::Context& ctx) {
    const auto& docs = documents();
    const auto it = docs.find(ctx.param("doc"));
    if (it == docs.end()) throw Error(ErrorCode::UnknownRoute, "no document " + ctx.param("doc"));
    return ok({{"id", it->first}, {"title", it->second.title}, {"body", it->second.body}});
}

}  // namespace

const std::vector<RouteSpec>& route_table() {
    static const std::vector<RouteSpec> table{
        {"POST", "/v1/auth/register", kEveryone},
        {"POST", "/v1/auth/login", kEveryone},
        {"POST", "/v1/auth/forgot", kEveryone},
        {"POST", "/v1/auth/reset", kEveryone},
        {"POST", "/v1/auth/logout", kMembers},

        {"GET", "/v1/me", kMembers},
        {"PATCH", "/v1/me", kMembers},
        {"PUT", "/v1/me/vaccination", kMembers},
        {"GET", "/v1/me/bookings", kMembers},
        {"GET", "/v1/me/loyalty", kMembers},

        {"GET", "/v1/books", kEveryone},
        {"GET", "/v1/books/{id}", kEveryone},
        {"GET", "/v1/books/{id}/reviews", kEveryone},
        {"POST", "/v1/books/{id}/reviews", kMembers},
        {"GET", "/v1/books/{id}/follow", kMembers},
        {"PUT", "/v1/books/{id}/follow", kMembers},
        {"DELETE", "/v1/books/{id}/follow", kMembers},

        {"GET", "/v1/book-requests", kMembers},
        {"POST", "/v1/book-requests", kApplicants},
        {"POST", "/v1/book-requests/{id}/decision", kAdmins},

        {"GET", "/v1/events", kEveryone},
        {"POST", "/v1/events", kHosts},
        {"GET", "/v1/events/{id}", kEveryone},
        {"POST", "/v1/events/{id}/bookings", kMembers},

        {"GET", "/v1/availability", kEveryone},
        {"POST", "/v1/availability", kBooks},
        {"GET", "/v1/calendar", kEveryone},

        {"GET", "/v1/bookings/{id}", kMembers},
        {"DELETE", "/v1/bookings/{id}", kMembers},
        {"POST", "/v1/bookings/{id}/payment", kMembers},
        {"POST", "/v1/payments/{id}/confirm", kMembers},

        {"GET", "/v1/conversations", kMembers},
        {"POST", "/v1/conversations", kMembers},
        {"GET", "/v1/conversations/{id}/messages", kMembers},
        {"POST", "/v1/conversations/{id}/messages", kMembers},

        {"GET", "/v1/notifications", kMembers},
        {"POST", "/v1/notifications/{id}/read", kMembers},

        {"GET", "/v1/content/{doc}", kEveryone},
        {"GET", "/v1/admin/ledger", kAdmins},
    };
    return table;
}

void Gateway::install_routes() {
    add("POST", "/v1/auth/register", register_account);
    add("POST", "/v1/auth/login", login);
    add("POST", "/v1/auth/forgot", forgot);
    add("POST", "/v1/auth/reset", reset);
    add("POST", "/v1/auth/logout", logout);

    add("GET", "/v1/me", me);
    add("PATCH", "/v1/me", update_me);
    add("PUT", "/v1/me/vaccination", upload_vaccination);
    add("GET", "/v1/me/bookings", my_bookings);
    add("GET", "/v1/me/loyalty", my_loyalty);

    add("GET", "/v1/books", list_books);
    add("GET", "/v1/books/{id}", get_book);
    add("GET", "/v1/books/{id}/reviews", list_reviews);
    add("POST", "/v1/books/{id}/reviews", post_review);
    add("GET", "/v1/books/{id}/follow", follow_status);
    add("PUT", "/v1/books/{id}/follow", follow);
    add("DELETE", "/v1/books/{id}/follow", unfollow);

    add("GET", "/v1/book-requests", list_book_requests);
    add("POST", "/v1/book-requests", submit_book_request);
    add("POST", "/v1/book-requests/{id}/decision", decide_book_request);

    add("GET", "/v1/events", list_events);
    add("POST", "/v1/events", create_event);
    add("GET", "/v1/events/{id}", get_event);
    add("POST", "/v1/events/{id}/bookings", book_event);

    add("GET", "/v1/availability", list_availability);
    add("POST", "/v1/availability", post_availability);
    add("GET", "/v1/calendar", calendar);

    add("GET", "/v1/bookings/{id}", get_booking);
    add("DELETE", "/v1/bookings/{id}", cancel_booking);
    add("POST", "/v1/bookings/{id}/payment", create_payment);
    add("POST", "/v1/payments/{id}/confirm", confirm_payment);

    add("GET", "/v1/conversations", list_conversations);
    add("POST", "/v1/conversations", start_conversation);
    add("GET", "/v1/conversations/{id}/messages", list_messages);
    add("POST", "/v1/conversations/{id}/messages", post_message);

    add("GET", "/v1/notifications", list_notifications);
    add("POST", "/v1/notifications/{id}/read", read_notification);

    add("GET", "/v1/content/{doc}", content);
    add("GET", "/v1/admin/ledger", export_ledger);

    if (routes_.size() != route_table().size()) throw std::logic_error("route table and handlers disagree");
}

}  // namespace golib::gateway
