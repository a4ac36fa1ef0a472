#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace golib {

/// Every domain failure the platform can surface. Each value maps to exactly
/// one stable wire code and HTTP status (see error_info).
enum class ErrorCode {
    // identity
    DuplicateEmail,
    WeakPassword,
    InvalidEmail,
    InvalidCredentials,
    UnsupportedAuthMethod,
    OtpInvalid,
    OtpExpired,
    OtpConsumed,
    MissingSide,
    ImageTooLarge,
    UnknownAccount,
    // directory
    MissingField,
    InvalidCnic,
    DuplicatePendingRequest,
    AlreadyBook,
    NotAdmin,
    AlreadyDecided,
    UnknownRequest,
    UnknownBook,
    NotABook,
    StarsOutOfRange,
    SelfReview,
    NoCompletedBooking,
    // scheduling
    NotAuthorized,
    OutsideAvailability,
    InvalidTimeRange,
    InvalidCapacity,
    OverlappingSlot,
    CoordinateOutOfRange,
    InvalidRadius,
    UnknownEvent,
    SoldOut,
    NotVaccinated,
    DuplicateBooking,
    EventInPast,
    UnknownBooking,
    NotOwner,
    AlreadyReleased,
    InvalidMonth,
    // payments
    HoldExpired,
    DuplicateIntent,
    UnknownProvider,
    BookingNotReserved,
    UnknownIntent,
    AlreadyFinal,
    NotCaptured,
    AlreadyRefunded,
    // comms
    NotFollowing,
    NoConversation,
    EmptyBody,
    BodyTooLong,
    UnknownConversation,
    NotParticipant,
    NotRecipient,
    UnknownNotification,
    // store
    ConflictExhausted,
    StorageFailure,
    CorruptStore,
    // gateway
    AuthRequired,
    InvalidToken,
    UnknownRoute,
    MethodNotAllowed,
    ValidationFailed,
};

struct ErrorInfo {
    std::string_view code;  ///< e.g. "SOLD_OUT"
    int status;             ///< HTTP status
};

ErrorInfo error_info(ErrorCode code);

/// All codes, in declaration order. Used by tests that check the mapping is
/// injective.
const std::vector<ErrorCode>& all_error_codes();

struct FieldError {
    std::string field;
    std::string message;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::vector<FieldError> fields = {})
        : std::runtime_error(std::move(message)), code_(code), fields_(std::move(fields)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::vector<FieldError>& fields() const noexcept { return fields_; }

private:
    ErrorCode code_;
    std::vector<FieldError> fields_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string message) {
    throw Error(code, std::move(message));
}

}  // namespace golib
