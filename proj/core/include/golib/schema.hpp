#pragma once

// Persisted document types shared across modules, their JSON mappings and
// the collection each one lives in.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "golib/store/store.hpp"
#include "golib/time.hpp"

namespace golib {

using Json = nlohmann::json;

namespace collections {
inline constexpr const char* kAccounts = "accounts";
inline constexpr const char* kEmailIndex = "email_index";
inline constexpr const char* kSessions = "sessions";
inline constexpr const char* kOtps = "otps";
inline constexpr const char* kBookRequests = "book_requests";
inline constexpr const char* kPendingRequests = "pending_requests";
inline constexpr const char* kBooks = "books";
inline constexpr const char* kFollows = "follows";
inline constexpr const char* kReviews = "reviews";
inline constexpr const char* kEvents = "events";
inline constexpr const char* kSlots = "slots";
inline constexpr const char* kBookings = "bookings";
inline constexpr const char* kSeatInventory = "seat_inventory";
inline constexpr const char* kIntents = "payment_intents";
inline constexpr const char* kBookingIntent = "booking_intent";
inline constexpr const char* kLedger = "ledger";
inline constexpr const char* kLoyalty = "loyalty";
inline constexpr const char* kConversations = "conversations";
inline constexpr const char* kMessages = "messages";
inline constexpr const char* kNotifications = "notifications";
}  // namespace collections

inline store::Key key(const char* collection, std::string id) { return {collection, std::move(id)}; }

// --- identity --------------------------------------------------------------

enum class Role { Guest, Reader, Book, Admin };

std::string_view to_string(Role role);
Role parse_role(std::string_view text);

struct VaccinationRecord {
    std::string front_image_ref;
    std::string back_image_ref;
    Timestamp uploaded_at;
};

/// Public view of an account. Never carries the password digest.
struct UserAccount {
    std::string id;
    std::string email;
    std::string first_name;
    std::string last_name;
    std::string city;
    std::string country;
    std::string contact_number;
    Role role = Role::Reader;
    std::optional<VaccinationRecord> vaccination;
    Timestamp created_at;
};

struct AccountRecord {
    UserAccount account;
    std::string password_digest;
    /// Bumped to invalidate every session issued before.
    std::uint64_t session_epoch = 0;
};

struct OtpRecord {
    std::string account_id;
    std::string code_digest;
    Timestamp issued_at;
    std::int64_t ttl_seconds = 0;
    bool consumed = false;
};

struct SessionRecord {
    std::string account_id;
    Timestamp expires_at;
    std::uint64_t epoch = 0;
};

// --- directory -------------------------------------------------------------

enum class RequestState { Pending, Accepted, Rejected };
std::string_view to_string(RequestState state);

struct BecomeBookRequest {
    std::string id;
    std::string applicant_id;
    std::string name;
    std::string phone;
    std::string cnic;
    std::string field_of_expertise;
    std::string vaccination_image_ref;
    std::string resume_ref;
    RequestState state = RequestState::Pending;
    std::optional<std::string> decided_by;
    std::optional<Timestamp> decided_at;
    Timestamp created_at;
};

struct BookProfile {
    std::string account_id;
    std::string display_name;
    std::string profession;
    std::string bio;
    std::int64_t rating_sum = 0;
    std::int64_t review_count = 0;

    std::optional<double> rating_mean() const {
        if (review_count == 0) return std::nullopt;
        return static_cast<double>(rating_sum) / static_cast<double>(review_count);
    }
};

struct FollowEdge {
    std::string reader_id;
    std::string book_id;
    Timestamp since;
};

struct Review {
    std::string id;
    std::string book_id;
    std::string author_id;
    int stars = 0;
    std::string text;
    Timestamp created_at;
};

// --- scheduling ------------------------------------------------------------

enum class EventKind { PublicEvent, PrivateSession };
std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

struct Venue {
    std::string name;
    std::string address;
    double latitude = 0;
    double longitude = 0;
};

struct Event {
    std::string id;
    EventKind kind = EventKind::PublicEvent;
    std::string title;
    std::optional<std::string> host_book_id;
    Venue venue;
    Timestamp starts_at;
    Timestamp ends_at;
    std::int64_t capacity = 1;
    std::int64_t price_minor = 0;
    std::string created_by;
};

struct AvailabilitySlot {
    std::string id;
    std::string book_id;
    Timestamp starts_at;
    Timestamp ends_at;
};

enum class BookingState { Reserved, Confirmed, Released };
std::string_view to_string(BookingState state);

struct Booking {
    std::string id;
    std::string event_id;
    std::string reader_id;
    BookingState state = BookingState::Reserved;
    Timestamp reserved_at;
    Timestamp hold_expires_at;
    std::optional<std::string> payment_id;
};

/// Per-event seat ledger; the single record every book/cancel/confirm for
/// the event writes, so those operations serialize on it.
struct SeatInventory {
    struct Hold {
        std::string booking_id;
        std::string reader_id;
        bool confirmed = false;
        Timestamp hold_expires_at;
    };
    std::string event_id;
    std::int64_t capacity = 0;
    std::vector<Hold> holds;  ///< Reserved and Confirmed bookings only
};

// --- payments --------------------------------------------------------------

enum class Provider { Easypaisa, JazzCash };
std::string_view to_string(Provider provider);
std::optional<Provider> parse_provider(std::string_view text);

enum class IntentState { Created, Captured, Failed, Refunded };
std::string_view to_string(IntentState state);

struct PaymentIntent {
    std::string id;
    std::string booking_id;
    std::string payer_id;
    Provider provider = Provider::Easypaisa;
    std::int64_t base_amount_minor = 0;
    std::int64_t discount_minor = 0;
    std::int64_t amount_minor = 0;
    IntentState state = IntentState::Created;
    std::int64_t points_awarded = 0;
    Timestamp created_at;
};

enum class LedgerDirection { Charge, Refund };
std::string_view to_string(LedgerDirection direction);

struct LedgerEntry {
    std::string id;
    std::string intent_id;
    LedgerDirection direction = LedgerDirection::Charge;
    std::int64_t amount_minor = 0;
    Timestamp recorded_at;
};

enum class LoyaltyTier { None, Silver, Gold };
std::string_view to_string(LoyaltyTier tier);

struct LoyaltyAccount {
    std::string account_id;
    std::int64_t points = 0;
};

// --- comms -----------------------------------------------------------------

struct Conversation {
    std::string id;
    std::string reader_id;
    std::string book_id;
    Timestamp created_at;
};

struct Message {
    std::string id;
    std::string conversation_id;
    std::string sender_id;
    std::string body;
    Timestamp sent_at;
    /// Audit: true when the reader->book follow edge was verified at send time.
    bool follow_verified = false;
};

enum class NotificationKind { EventCreated, FreeSlotPosted, BookDecision };
std::string_view to_string(NotificationKind kind);

struct Notification {
    std::string id;
    std::string recipient_id;
    NotificationKind kind = NotificationKind::EventCreated;
    std::string subject_id;
    Timestamp created_at;
    bool read = false;
};

// --- JSON mappings ---------------------------------------------------------

#define GOLIB_DECLARE_JSON(T)        \
    void to_json(Json& j, const T& v); \
    void from_json(const Json& j, T& v);

GOLIB_DECLARE_JSON(Role)
GOLIB_DECLARE_JSON(VaccinationRecord)
GOLIB_DECLARE_JSON(UserAccount)
GOLIB_DECLARE_JSON(AccountRecord)
GOLIB_DECLARE_JSON(OtpRecord)
GOLIB_DECLARE_JSON(SessionRecord)
GOLIB_DECLARE_JSON(RequestState)
GOLIB_DECLARE_JSON(BecomeBookRequest)
GOLIB_DECLARE_JSON(BookProfile)
GOLIB_DECLARE_JSON(FollowEdge)
GOLIB_DECLARE_JSON(Review)
GOLIB_DECLARE_JSON(EventKind)
GOLIB_DECLARE_JSON(Venue)
GOLIB_DECLARE_JSON(Event)
GOLIB_DECLARE_JSON(AvailabilitySlot)
GOLIB_DECLARE_JSON(BookingState)
GOLIB_DECLARE_JSON(Booking)
GOLIB_DECLARE_JSON(SeatInventory::Hold)
GOLIB_DECLARE_JSON(SeatInventory)
GOLIB_DECLARE_JSON(Provider)
GOLIB_DECLARE_JSON(IntentState)
GOLIB_DECLARE_JSON(PaymentIntent)
GOLIB_DECLARE_JSON(LedgerDirection)
GOLIB_DECLARE_JSON(LedgerEntry)
GOLIB_DECLARE_JSON(LoyaltyAccount)
GOLIB_DECLARE_JSON(Conversation)
GOLIB_DECLARE_JSON(Message)
GOLIB_DECLARE_JSON(NotificationKind)
GOLIB_DECLARE_JSON(Notification)

#undef GOLIB_DECLARE_JSON

}  // namespace golib

template <>
struct nlohmann::adl_serializer<golib::Timestamp> {
    static void to_json(json& j, const golib::Timestamp& ts) { j = golib::format_rfc3339(ts); }
    static void from_json(const json& j, golib::Timestamp& ts) { ts = golib::parse_rfc3339(j.get<std::string>()); }
};
