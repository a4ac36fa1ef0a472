#include "golib/errors.hpp"

#include <utility>

namespace golib {

namespace {

struct Entry {
    ErrorCode code;
    ErrorInfo info;
};

// Wire codes are part of the public API; never repurpose one.
constexpr Entry kTable[] = {
    {ErrorCode::DuplicateEmail, {"DUPLICATE_EMAIL", 409}},
    {ErrorCode::WeakPassword, {"WEAK_PASSWORD", 422}},
    {ErrorCode::InvalidEmail, {"INVALID_EMAIL", 422}},
    {ErrorCode::InvalidCredentials, {"INVALID_CREDENTIALS", 401}},
    {ErrorCode::UnsupportedAuthMethod, {"UNSUPPORTED_AUTH_METHOD", 400}},
    {ErrorCode::OtpInvalid, {"OTP_INVALID", 400}},
    {ErrorCode::OtpExpired, {"OTP_EXPIRED", 410}},
    {ErrorCode::OtpConsumed, {"OTP_CONSUMED", 409}},
    {ErrorCode::MissingSide, {"MISSING_SIDE", 422}},
    {ErrorCode::ImageTooLarge, {"IMAGE_TOO_LARGE", 413}},
    {ErrorCode::UnknownAccount, {"UNKNOWN_ACCOUNT", 404}},
    {ErrorCode::MissingField, {"MISSING_FIELD", 422}},
    {ErrorCode::InvalidCnic, {"INVALID_CNIC", 422}},
    {ErrorCode::DuplicatePendingRequest, {"DUPLICATE_PENDING_REQUEST", 409}},
    {ErrorCode::AlreadyBook, {"ALREADY_BOOK", 409}},
    {ErrorCode::NotAdmin, {"NOT_ADMIN", 403}},
    {ErrorCode::AlreadyDecided, {"ALREADY_DECIDED", 409}},
    {ErrorCode::UnknownRequest, {"UNKNOWN_REQUEST", 404}},
    {ErrorCode::UnknownBook, {"UNKNOWN_BOOK", 404}},
    {ErrorCode::NotABook, {"NOT_A_BOOK", 422}},
    {ErrorCode::StarsOutOfRange, {"STARS_OUT_OF_RANGE", 422}},
    {ErrorCode::SelfReview, {"SELF_REVIEW", 422}},
    {ErrorCode::NoCompletedBooking, {"NO_COMPLETED_BOOKING", 403}},
    {ErrorCode::NotAuthorized, {"NOT_AUTHORIZED", 403}},
    {ErrorCode::OutsideAvailability, {"OUTSIDE_AVAILABILITY", 422}},
    {ErrorCode::InvalidTimeRange, {"INVALID_TIME_RANGE", 422}},
    {ErrorCode::InvalidCapacity, {"INVALID_CAPACITY", 422}},
    {ErrorCode::OverlappingSlot, {"OVERLAPPING_SLOT", 409}},
    {ErrorCode::CoordinateOutOfRange, {"COORDINATE_OUT_OF_RANGE", 422}},
    {ErrorCode::InvalidRadius, {"INVALID_RADIUS", 422}},
    {ErrorCode::UnknownEvent, {"UNKNOWN_EVENT", 404}},
    {ErrorCode::SoldOut, {"SOLD_OUT", 409}},
    {ErrorCode::NotVaccinated, {"NOT_VACCINATED", 403}},
    {ErrorCode::DuplicateBooking, {"DUPLICATE_BOOKING", 409}},
    {ErrorCode::EventInPast, {"EVENT_IN_PAST", 422}},
    {ErrorCode::UnknownBooking, {"UNKNOWN_BOOKING", 404}},
    {ErrorCode::NotOwner, {"NOT_OWNER", 403}},
    {ErrorCode::AlreadyReleased, {"ALREADY_RELEASED", 409}},
    {ErrorCode::InvalidMonth, {"INVALID_MONTH", 422}},
    {ErrorCode::HoldExpired, {"HOLD_EXPIRED", 409}},
    {ErrorCode::DuplicateIntent, {"DUPLICATE_INTENT", 409}},
    {ErrorCode::UnknownProvider, {"UNKNOWN_PROVIDER", 422}},
    {ErrorCode::BookingNotReserved, {"BOOKING_NOT_RESERVED", 409}},
    {ErrorCode::UnknownIntent, {"UNKNOWN_INTENT", 404}},
    {ErrorCode::AlreadyFinal, {"ALREADY_FINAL", 409}},
    {ErrorCode::NotCaptured, {"NOT_CAPTURED", 409}},
    {ErrorCode::AlreadyRefunded, {"ALREADY_REFUNDED", 409}},
    {ErrorCode::NotFollowing, {"NOT_FOLLOWING", 403}},
    {ErrorCode::NoConversation, {"NO_CONVERSATION", 403}},
    {ErrorCode::EmptyBody, {"EMPTY_BODY", 422}},
    {ErrorCode::BodyTooLong, {"BODY_TOO_LONG", 422}},
    {ErrorCode::UnknownConversation, {"UNKNOWN_CONVERSATION", 404}},
    {ErrorCode::NotParticipant, {"NOT_PARTICIPANT", 403}},
    {ErrorCode::NotRecipient, {"NOT_RECIPIENT", 403}},
    {ErrorCode::UnknownNotification, {"UNKNOWN_NOTIFICATION", 404}},
    {ErrorCode::ConflictExhausted, {"CONFLICT_EXHAUSTED", 503}},
    {ErrorCode::StorageFailure, {"STORAGE_FAILURE", 500}},
    {ErrorCode::CorruptStore, {"CORRUPT_STORE", 500}},
    {ErrorCode::AuthRequired, {"AUTH_REQUIRED", 401}},
    {ErrorCode::InvalidToken, {"INVALID_TOKEN", 401}},
    {ErrorCode::UnknownRoute, {"UNKNOWN_ROUTE", 404}},
    {ErrorCode::MethodNotAllowed, {"METHOD_NOT_ALLOWED", 405}},
    {ErrorCode::ValidationFailed, {"VALIDATION_FAILED", 422}},
};

}  // namespace

ErrorInfo error_info(ErrorCode code) {
    for (const auto& e : kTable) {
        if (e.code == code) return e.info;
    }
    return {"INTERNAL", 500};
}

const std::vector<ErrorCode>& all_error_codes() {
    static const std::vector<ErrorCode> codes = [] {
        std::vector<ErrorCode> out;
        for (const auto& e : kTable) out.push_back(e.code);
        return out;
    }();
    return codes;
}

}  // namespace golib
