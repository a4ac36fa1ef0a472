#include "golib/schema.hpp"

#include <array>
#include <utility>

#include "golib/errors.hpp"

namespace golib {

namespace {

template <typename E, std::size_t N>
using Names = std::array<std::pair<E, std::string_view>, N>;

template <typename E, std::size_t N>
std::string_view name_of(const Names<E, N>& names, E value) {
    for (const auto& [v, n] : names) {
        if (v == value) return n;
    }
    return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const Names<E, N>& names, std::string_view text) {
    for (const auto& [v, n] : names) {
        if (n == text) return v;
    }
    return std::nullopt;
}

template <typename E, std::size_t N>
E require(const Names<E, N>& names, const Json& j, std::string_view what) {
    const auto text = j.get<std::string>();
    if (auto v = value_of(names, text)) return *v;
    throw Error(ErrorCode::ValidationFailed, "unknown " + std::string(what) + ": " + text);
}

constexpr Names<Role, 4> kRoles{{{Role::Guest, "Guest"}, {Role::Reader, "Reader"}, {Role::Book, "Book"},
                                 {Role::Admin, "Admin"}}};
constexpr Names<RequestState, 3> kRequestStates{
    {{RequestState::Pending, "Pending"}, {RequestState::Accepted, "Accepted"}, {RequestState::Rejected, "Rejected"}}};
constexpr Names<EventKind, 2> kEventKinds{
    {{EventKind::PublicEvent, "PublicEvent"}, {EventKind::PrivateSession, "PrivateSession"}}};
constexpr Names<BookingState, 3> kBookingStates{
    {{BookingState::Reserved, "Reserved"}, {BookingState::Confirmed, "Confirmed"}, {BookingState::Released, "Released"}}};
constexpr Names<Provider, 2> kProviders{{{Provider::Easypaisa, "Easypaisa"}, {Provider::JazzCash, "JazzCash"}}};
constexpr Names<IntentState, 4> kIntentStates{{{IntentState::Created, "Created"},
                                               {IntentState::Captured, "Captured"},
                                               {IntentState::Failed, "Failed"},
                                               {IntentState::Refunded, "Refunded"}}};
constexpr Names<LedgerDirection, 2> kDirections{
    {{LedgerDirection::Charge, "Charge"}, {LedgerDirection::Refund, "Refund"}}};
constexpr Names<LoyaltyTier, 3> kTiers{
    {{LoyaltyTier::None, "None"}, {LoyaltyTier::Silver, "Silver"}, {LoyaltyTier::Gold, "Gold"}}};
constexpr Names<NotificationKind, 3> kNotificationKinds{{{NotificationKind::EventCreated, "EventCreated"},
                                                         {NotificationKind::FreeSlotPosted, "FreeSlotPosted"},
                                                         {NotificationKind::BookDecision, "BookDecision"}}};

template <typename T>
void put_opt(Json& j, const char* name, const std::optional<T>& v) {
    j[name] = v ? Json(*v) : Json();
}

template <typename T>
void get_opt(const Json& j, const char* name, std::optional<T>& v) {
    const auto it = j.find(name);
    if (it == j.end() || it->is_null()) {
        v.reset();
    } else {
        v = it->template get<T>();
    }
}

template <typename T>
void get_or(const Json& j, const char* name, T& v) {
    const auto it = j.find(name);
    if (it != j.end() && !it->is_null()) v = it->template get<T>();
}

}  // namespace

std::string_view to_string(Role role) { return name_of(kRoles, role); }
Role parse_role(std::string_view text) {
    if (auto r = value_of(kRoles, text)) return *r;
    throw Error(ErrorCode::ValidationFailed, "unknown role: " + std::string(text));
}
std::string_view to_string(RequestState state) { return name_of(kRequestStates, state); }
std::string_view to_string(EventKind kind) { return name_of(kEventKinds, kind); }
std::optional<EventKind> parse_event_kind(std::string_view text) { return value_of(kEventKinds, text); }
std::string_view to_string(BookingState state) { return name_of(kBookingStates, state); }
std::string_view to_string(Provider provider) { return name_of(kProviders, provider); }
std::optional<Provider> parse_provider(std::string_view text) {
    if (auto p = value_of(kProviders, text)) return p;
    // Wire clients commonly send lowercase provider names.
    if (text == "easypaisa") return Provider::Easypaisa;
    if (text == "jazzcash") return Provider::JazzCash;
    return std::nullopt;
}
std::string_view to_string(IntentState state) { return name_of(kIntentStates, state); }
std::string_view to_string(LedgerDirection direction) { return name_of(kDirections, direction); }
std::string_view to_string(LoyaltyTier tier) { return name_of(kTiers, tier); }
std::string_view to_string(NotificationKind kind) { return name_of(kNotificationKinds, kind); }

void to_json(Json& j, const Role& v) { j = to_string(v); }
void from_json(const Json& j, Role& v) { v = require(kRoles, j, "role"); }
void to_json(Json& j, const RequestState& v) { j = to_string(v); }
void from_json(const Json& j, RequestState& v) { v = require(kRequestStates, j, "request state"); }
void to_json(Json& j, const EventKind& v) { j = to_string(v); }
void from_json(const Json& j, EventKind& v) { v = require(kEventKinds, j, "event kind"); }
void to_json(Json& j, const BookingState& v) { j = to_string(v); }
void from_json(const Json& j, BookingState& v) { v = require(kBookingStates, j, "booking state"); }
void to_json(Json& j, const Provider& v) { j = to_string(v); }
void from_json(const Json& j, Provider& v) {
    const auto p = parse_provider(j.get<std::string>());
    if (!p) throw Error(ErrorCode::UnknownProvider, "unknown provider: " + j.get<std::string>());
    v = *p;
}
void to_json(Json& j, const IntentState& v) { j = to_string(v); }
void from_json(const Json& j, IntentState& v) { v = require(kIntentStates, j, "intent state"); }
void to_json(Json& j, const LedgerDirection& v) { j = to_string(v); }
void from_json(const Json& j, LedgerDirection& v) { v = require(kDirections, j, "ledger direction"); }
void to_json(Json& j, const NotificationKind& v) { j = to_string(v); }
void from_json(const Json& j, NotificationKind& v) { v = require(kNotificationKinds, j, "notification kind"); }

void to_json(Json& j, const VaccinationRecord& v) {
    j = {{"front_image_ref", v.front_image_ref}, {"back_image_ref", v.back_image_ref}, {"uploaded_at", v.uploaded_at}};
}
void from_json(const Json& j, VaccinationRecord& v) {
    j.at("front_image_ref").get_to(v.front_image_ref);
    j.at("back_image_ref").get_to(v.back_image_ref);
    j.at("uploaded_at").get_to(v.uploaded_at);
}

void to_json(Json& j, const UserAccount& v) {
    j = {{"id", v.id},
         {"email", v.email},
         {"first_name", v.first_name},
         {"last_name", v.last_name},
         {"city", v.city},
         {"country", v.country},
         {"contact_number", v.contact_number},
         {"role", v.role},
         {"created_at", v.created_at}};
    put_opt(j, "vaccination", v.vaccination);
}
void from_json(const Json& j, UserAccount& v) {
    j.at("id").get_to(v.id);
    j.at("email").get_to(v.email);
    j.at("first_name").get_to(v.first_name);
    j.at("last_name").get_to(v.last_name);
    j.at("city").get_to(v.city);
    j.at("country").get_to(v.country);
    get_or(j, "contact_number", v.contact_number);
    j.at("role").get_to(v.role);
    j.at("created_at").get_to(v.created_at);
    get_opt(j, "vaccination", v.vaccination);
}

void to_json(Json& j, const AccountRecord& v) {
    j = Json(v.account);
    j["password_digest"] = v.password_digest;
    j["session_epoch"] = v.session_epoch;
}
void from_json(const Json& j, AccountRecord& v) {
    j.get_to(v.account);
    j.at("password_digest").get_to(v.password_digest);
    j.at("session_epoch").get_to(v.session_epoch);
}

void to_json(Json& j, const OtpRecord& v) {
    j = {{"account_id", v.account_id},
         {"code_digest", v.code_digest},
         {"issued_at", v.issued_at},
         {"ttl_seconds", v.ttl_seconds},
         {"consumed", v.consumed}};
}
void from_json(const Json& j, OtpRecord& v) {
    j.at("account_id").get_to(v.account_id);
    j.at("code_digest").get_to(v.code_digest);
    j.at("issued_at").get_to(v.issued_at);
    j.at("ttl_seconds").get_to(v.ttl_seconds);
    j.at("consumed").get_to(v.consumed);
}

void to_json(Json& j, const SessionRecord& v) {
    j = {{"account_id", v.account_id}, {"expires_at", v.expires_at}, {"epoch", v.epoch}};
}
void from_json(const Json& j, SessionRecord& v) {
    j.at("account_id").get_to(v.account_id);
    j.at("expires_at").get_to(v.expires_at);
    j.at("epoch").get_to(v.epoch);
}

void to_json(Json& j, const BecomeBookRequest& v) {
    j = {{"id", v.id},
         {"applicant_id", v.applicant_id},
         {"name", v.name},
         {"phone", v.phone},
         {"cnic", v.cnic},
         {"field_of_expertise", v.field_of_expertise},
         {"vaccination_image_ref", v.vaccination_image_ref},
         {"resume_ref", v.resume_ref},
         {"state", v.state},
         {"created_at", v.created_at}};
    put_opt(j, "decided_by", v.decided_by);
    put_opt(j, "decided_at", v.decided_at);
}
void from_json(const Json& j, BecomeBookRequest& v) {
    j.at("id").get_to(v.id);
    j.at("applicant_id").get_to(v.applicant_id);
    j.at("name").get_to(v.name);
    j.at("phone").get_to(v.phone);
    j.at("cnic").get_to(v.cnic);
    j.at("field_of_expertise").get_to(v.field_of_expertise);
    j.at("vaccination_image_ref").get_to(v.vaccination_image_ref);
    j.at("resume_ref").get_to(v.resume_ref);
    j.at("state").get_to(v.state);
    j.at("created_at").get_to(v.created_at);
    get_opt(j, "decided_by", v.decided_by);
    get_opt(j, "decided_at", v.decided_at);
}

void to_json(Json& j, const BookProfile& v) {
    j = {{"account_id", v.account_id}, {"display_name", v.display_name}, {"profession", v.profession},
         {"bio", v.bio},               {"rating_sum", v.rating_sum},     {"review_count", v.review_count}};
}
void from_json(const Json& j, BookProfile& v) {
    j.at("account_id").get_to(v.account_id);
    j.at("display_name").get_to(v.display_name);
    j.at("profession").get_to(v.profession);
    get_or(j, "bio", v.bio);
    j.at("rating_sum").get_to(v.rating_sum);
    j.at("review_count").get_to(v.review_count);
}

void to_json(Json& j, const FollowEdge& v) {
    j = {{"reader_id", v.reader_id}, {"book_id", v.book_id}, {"since", v.since}};
}
void from_json(const Json& j, FollowEdge& v) {
    j.at("reader_id").get_to(v.reader_id);
    j.at("book_id").get_to(v.book_id);
    j.at("since").get_to(v.since);
}

void to_json(Json& j, const Review& v) {
    j = {{"id", v.id},       {"book_id", v.book_id}, {"author_id", v.author_id},
         {"stars", v.stars}, {"text", v.text},       {"created_at", v.created_at}};
}
void from_json(const Json& j, Review& v) {
    j.at("id").get_to(v.id);
    j.at("book_id").get_to(v.book_id);
    j.at("author_id").get_to(v.author_id);
    j.at("stars").get_to(v.stars);
    j.at("text").get_to(v.text);
    j.at("created_at").get_to(v.created_at);
}

void to_json(Json& j, const Venue& v) {
    j = {{"name", v.name}, {"address", v.address}, {"latitude", v.latitude}, {"longitude", v.longitude}};
}
void from_json(const Json& j, Venue& v) {
    j.at("name").get_to(v.name);
    j.at("address").get_to(v.address);
    j.at("latitude").get_to(v.latitude);
    j.at("longitude").get_to(v.longitude);
}

void to_json(Json& j, const Event& v) {
    j = {{"id", v.id},
         {"kind", v.kind},
         {"title", v.title},
         {"venue", v.venue},
         {"starts_at", v.starts_at},
         {"ends_at", v.ends_at},
         {"capacity", v.capacity},
         {"price_minor", v.price_minor},
         {"created_by", v.created_by}};
    put_opt(j, "host_book_id", v.host_book_id);
}
void from_json(const Json& j, Event& v) {
    j.at("id").get_to(v.id);
    j.at("kind").get_to(v.kind);
    j.at("title").get_to(v.title);
    j.at("venue").get_to(v.venue);
    j.at("starts_at").get_to(v.starts_at);
    j.at("ends_at").get_to(v.ends_at);
    j.at("capacity").get_to(v.capacity);
    j.at("price_minor").get_to(v.price_minor);
    j.at("created_by").get_to(v.created_by);
    get_opt(j, "host_book_id", v.host_book_id);
}

void to_json(Json& j, const AvailabilitySlot& v) {
    j = {{"id", v.id}, {"book_id", v.book_id}, {"starts_at", v.starts_at}, {"ends_at", v.ends_at}};
}
void from_json(const Json& j, AvailabilitySlot& v) {
    j.at("id").get_to(v.id);
    j.at("book_id").get_to(v.book_id);
    j.at("starts_at").get_to(v.starts_at);
    j.at("ends_at").get_to(v.ends_at);
}

void to_json(Json& j, const Booking& v) {
    j = {{"id", v.id},
         {"event_id", v.event_id},
         {"reader_id", v.reader_id},
         {"state", v.state},
         {"reserved_at", v.reserved_at},
         {"hold_expires_at", v.hold_expires_at}};
    put_opt(j, "payment_id", v.payment_id);
}
void from_json(const Json& j, Booking& v) {
    j.at("id").get_to(v.id);
    j.at("event_id").get_to(v.event_id);
    j.at("reader_id").get_to(v.reader_id);
    j.at("state").get_to(v.state);
    j.at("reserved_at").get_to(v.reserved_at);
    j.at("hold_expires_at").get_to(v.hold_expires_at);
    get_opt(j, "payment_id", v.payment_id);
}

void to_json(Json& j, const SeatInventory::Hold& v) {
    j = {{"booking_id", v.booking_id},
         {"reader_id", v.reader_id},
         {"confirmed", v.confirmed},
         {"hold_expires_at", v.hold_expires_at}};
}
void from_json(const Json& j, SeatInventory::Hold& v) {
    j.at("booking_id").get_to(v.booking_id);
    j.at("reader_id").get_to(v.reader_id);
    j.at("confirmed").get_to(v.confirmed);
    j.at("hold_expires_at").get_to(v.hold_expires_at);
}

void to_json(Json& j, const SeatInventory& v) {
    j = {{"event_id", v.event_id}, {"capacity", v.capacity}, {"holds", v.holds}};
}
void from_json(const Json& j, SeatInventory& v) {
    j.at("event_id").get_to(v.event_id);
    j.at("capacity").get_to(v.capacity);
    j.at("holds").get_to(v.holds);
}

void to_json(Json& j, const PaymentIntent& v) {
    j = {{"id", v.id},
         {"booking_id", v.booking_id},
         {"payer_id", v.payer_id},
         {"provider", v.provider},
         {"base_amount_minor", v.base_amount_minor},
         {"discount_minor", v.discount_minor},
         {"amount_minor", v.amount_minor},
         {"state", v.state},
         {"points_awarded", v.points_awarded},
         {"created_at", v.created_at}};
}
void from_json(const Json& j, PaymentIntent& v) {
    j.at("id").get_to(v.id);
    j.at("booking_id").get_to(v.booking_id);
    j.at("payer_id").get_to(v.payer_id);
    j.at("provider").get_to(v.provider);
    j.at("base_amount_minor").get_to(v.base_amount_minor);
    j.at("discount_minor").get_to(v.discount_minor);
    j.at("amount_minor").get_to(v.amount_minor);
    j.at("state").get_to(v.state);
    j.at("points_awarded").get_to(v.points_awarded);
    j.at("created_at").get_to(v.created_at);
}

void to_json(Json& j, const LedgerEntry& v) {
    j = {{"id", v.id},
         {"intent_id", v.intent_id},
         {"direction", v.direction},
         {"amount_minor", v.amount_minor},
         {"recorded_at", v.recorded_at}};
}
void from_json(const Json& j, LedgerEntry& v) {
    j.at("id").get_to(v.id);
    j.at("intent_id").get_to(v.intent_id);
    j.at("direction").get_to(v.direction);
    j.at("amount_minor").get_to(v.amount_minor);
    j.at("recorded_at").get_to(v.recorded_at);
}

void to_json(Json& j, const LoyaltyAccount& v) { j = {{"account_id", v.account_id}, {"points", v.points}}; }
void from_json(const Json& j, LoyaltyAccount& v) {
    j.at("account_id").get_to(v.account_id);
    j.at("points").get_to(v.points);
}

void to_json(Json& j, const Conversation& v) {
    j = {{"id", v.id}, {"reader_id", v.reader_id}, {"book_id", v.book_id}, {"created_at", v.created_at}};
}
void from_json(const Json& j, Conversation& v) {
    j.at("id").get_to(v.id);
    j.at("reader_id").get_to(v.reader_id);
    j.at("book_id").get_to(v.book_id);
    j.at("created_at").get_to(v.created_at);
}

void to_json(Json& j, const Message& v) {
    j = {{"id", v.id},
         {"conversation_id", v.conversation_id},
         {"sender_id", v.sender_id},
         {"body", v.body},
         {"sent_at", v.sent_at},
         {"follow_verified", v.follow_verified}};
}
void from_json(const Json& j, Message& v) {
    j.at("id").get_to(v.id);
    j.at("conversation_id").get_to(v.conversation_id);
    j.at("sender_id").get_to(v.sender_id);
    j.at("body").get_to(v.body);
    j.at("sent_at").get_to(v.sent_at);
    j.at("follow_verified").get_to(v.follow_verified);
}

void to_json(Json& j, const Notification& v) {
    j = {{"id", v.id},         {"recipient_id", v.recipient_id}, {"kind", v.kind},
         {"subject_id", v.subject_id}, {"created_at", v.created_at}, {"read", v.read}};
}
void from_json(const Json& j, Notification& v) {
    j.at("id").get_to(v.id);
    j.at("recipient_id").get_to(v.recipient_id);
    j.at("kind").get_to(v.kind);
    j.at("subject_id").get_to(v.subject_id);
    j.at("created_at").get_to(v.created_at);
    j.at("read").get_to(v.read);
}

}  // namespace golib
