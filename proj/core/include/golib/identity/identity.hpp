#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "golib/schema.hpp"
#include "golib/services.hpp"

namespace golib::identity {

struct Registration {
    std::string email;
    std::string first_name;
    std::string last_name;
    std::string city;
    std::string country;
    std::string password;
    std::string contact_number;
};

struct SessionToken {
    std::string token;  ///< 256 random bits, hex encoded
    std::string account_id;
    Timestamp expires_at;
};

struct ProfileChanges {
    std::optional<std::string> email;
    std::optional<std::string> first_name;
    std::optional<std::string> last_name;
    std::optional<std::string> city;
    std::optional<std::string> country;
    std::optional<std::string> contact_number;
};

/// Uniform reply for operations that must not reveal whether an email is
/// registered.
struct Acknowledgement {
    std::string message;
    bool operator==(const Acknowledgement&) const = default;
};

/// Trim + lowercase.
std::string normalize_email(std::string_view email);
bool is_valid_email(std::string_view normalized);

/// `pbkdf2-sha256$<iterations>$<salt hex>$<digest hex>`
std::string digest_password(std::string_view password, int iterations);
bool verify_password(std::string_view password, std::string_view digest);

class Identity {
public:
    explicit Identity(Services services) : s_(services) {}

    UserAccount register_user(const Registration& registration);

    /// Creates an Admin account directly. Used by fixture seeding only; there
    /// is no API route to it.
    UserAccount provision_admin(const Registration& registration);

    SessionToken authenticate(std::string_view email, std::string_view password);

    /// Social sign-in is not offered; always throws UnsupportedAuthMethod.
    [[noreturn]] SessionToken authenticate_with(std::string_view provider);

    Acknowledgement request_password_reset(std::string_view email);
    Acknowledgement redeem_otp(std::string_view email, std::string_view code, std::string_view new_password);

    UserAccount update_account(const Principal& caller, const ProfileChanges& changes,
                               const std::optional<std::string>& old_password = std::nullopt,
                               const std::optional<std::string>& new_password = std::nullopt);

    VaccinationRecord upload_vaccination_card(const Principal& caller, std::string_view front_image,
                                              std::string_view back_image);

    /// Maps a bearer token to its account. Throws InvalidToken for anything
    /// not issued, expired, revoked or predating a password reset.
    Principal resolve(std::string_view token) const;
    void revoke(std::string_view token);

    UserAccount account(const std::string& account_id) const;
    std::optional<UserAccount> find_by_email(std::string_view email) const;

private:
    UserAccount create_account(const Registration& registration, Role role);

    Services s_;
};

}  // namespace golib::identity
