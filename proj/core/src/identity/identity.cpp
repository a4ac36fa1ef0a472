#include "golib/identity/identity.hpp"

#include <charconv>
#include <cstdio>

#include "detail.hpp"
#include "golib/crypto.hpp"

namespace golib::identity {

namespace {

constexpr std::string_view kResetAck = "If the address is registered, a reset code has been sent.";
constexpr std::string_view kRedeemAck = "Password updated.";

store::Key email_key(const std::string& email) { return key(collections::kEmailIndex, email); }
store::Key session_key(std::string_view token) { return key(collections::kSessions, crypto::sha256_hex(token)); }

std::string otp_digest(const std::string& account_id, std::string_view code) {
    return crypto::sha256_hex(account_id + ":" + std::string(code));
}

void check_password_strength(std::string_view password, std::size_t min_length) {
    if (password.size() < min_length) {
        throw Error(ErrorCode::WeakPassword,
                    "password must be at least " + std::to_string(min_length) + " characters");
    }
}

std::string require_valid_email(std::string_view raw) {
    auto email = normalize_email(raw);
    if (!is_valid_email(email)) throw Error(ErrorCode::InvalidEmail, "invalid email address");
    return email;
}

}  // namespace

std::string normalize_email(std::string_view email) { return detail::lowercase(detail::trim(email)); }

bool is_valid_email(std::string_view email) {
    const auto at = email.find('@');
    if (at == std::string_view::npos || at == 0 || email.find('@', at + 1) != std::string_view::npos) return false;
    const auto domain = email.substr(at + 1);
    const auto dot = domain.find('.');
    if (domain.empty() || dot == std::string_view::npos || dot == 0 || domain.back() == '.') return false;
    if (domain.find("..") != std::string_view::npos) return false;
    for (unsigned char c : email) {
        if (c <= ' ' || c == 0x7f || c == ',' || c == ';' || c == '<' || c == '>' || c == '"') return false;
    }
    return true;
}

std::string digest_password(std::string_view password, int iterations) {
    const auto salt = crypto::random_bytes(16);
    return "pbkdf2-sha256$" + std::to_string(iterations) + "$" + crypto::to_hex(salt) + "$" +
           crypto::pbkdf2_sha256_hex(password, salt, iterations);
}

bool verify_password(std::string_view password, std::string_view digest) {
    constexpr std::string_view kScheme = "pbkdf2-sha256$";
    if (digest.substr(0, kScheme.size()) != kScheme) return false;
    digest.remove_prefix(kScheme.size());
    const auto d1 = digest.find('$');
    if (d1 == std::string_view::npos) return false;
    int iterations = 0;
    const auto iter_text = digest.substr(0, d1);
    if (std::from_chars(iter_text.data(), iter_text.data() + iter_text.size(), iterations).ec != std::errc{} ||
        iterations <= 0) {
        return false;
    }
    const auto rest = digest.substr(d1 + 1);
    const auto d2 = rest.find('$');
    if (d2 == std::string_view::npos) return false;
    const auto salt_hex = rest.substr(0, d2);
    const auto expected = rest.substr(d2 + 1);
    if (salt_hex.size() % 2 != 0) return false;
    std::string salt;
    for (std::size_t i = 0; i < salt_hex.size(); i += 2) {
        unsigned value = 0;
        if (std::from_chars(salt_hex.data() + i, salt_hex.data() + i + 2, value, 16).ec != std::errc{}) return false;
        salt.push_back(static_cast<char>(value));
    }
    return crypto::constant_time_equal(crypto::pbkdf2_sha256_hex(password, salt, iterations), expected);
}

UserAccount Identity::register_user(const Registration& registration) {
    return create_account(registration, Role::Reader);
}

UserAccount Identity::provision_admin(const Registration& registration) {
    return create_account(registration, Role::Admin);
}

UserAccount Identity::create_account(const Registration& registration, Role role) {
    const auto email = require_valid_email(registration.email);
    check_password_strength(registration.password, s_.config.min_password_length);
    const auto digest = digest_password(registration.password, s_.config.password_iterations);
    const auto now = s_.clock.now();

    return s_.store.transact([&](store::Txn& txn) {
        // Uniqueness is decided at commit: a concurrent registration of the
        // same address invalidates this read and forces a retry.
        if (txn.get(email_key(email))) throw Error(ErrorCode::DuplicateEmail, "email already registered");
        AccountRecord rec;
        rec.account.id = txn.next_id("acct");
        rec.account.email = email;
        rec.account.first_name = registration.first_name;
        rec.account.last_name = registration.last_name;
        rec.account.city = registration.city;
        rec.account.country = registration.country;
        rec.account.contact_number = registration.contact_number;
        rec.account.role = role;
        rec.account.created_at = now;
        rec.password_digest = digest;
        detail::put_account(txn, rec);
        txn.put(email_key(email), Json{{"account_id", rec.account.id}});
        return rec.account;
    });
}

SessionToken Identity::authenticate(std::string_view email_raw, std::string_view password) {
    // Dummy digest so unknown addresses cost the same PBKDF2 work.
    static const std::string dummy = digest_password("not-a-real-password", s_.config.password_iterations);

    const auto email = normalize_email(email_raw);
    const auto index = s_.store.get(email_key(email));
    std::optional<AccountRecord> rec;
    if (index) {
        if (auto acct = s_.store.get(key(collections::kAccounts, index->payload.at("account_id").get<std::string>()))) {
            rec = acct->payload.get<AccountRecord>();
        }
    }
    const bool ok = verify_password(password, rec ? rec->password_digest : dummy) && rec.has_value();
    if (!ok) throw Error(ErrorCode::InvalidCredentials, "invalid email or password");

    SessionToken token{crypto::random_hex(32), rec->account.id, s_.clock.now() + s_.config.session_ttl};
    s_.store.transact([&](store::Txn& txn) {
        const auto current = detail::require_account(txn, token.account_id);
        txn.put(session_key(token.token), SessionRecord{token.account_id, token.expires_at, current.session_epoch});
    });
    return token;
}

SessionToken Identity::authenticate_with(std::string_view provider) {
    throw Error(ErrorCode::UnsupportedAuthMethod,
                "sign-in with " + std::string(provider) + " is not supported; use email and password");
}

Acknowledgement Identity::request_password_reset(std::string_view email_raw) {
    const auto email = normalize_email(email_raw);
    const auto index = s_.store.get(email_key(email));
    if (index) {
        const auto account_id = index->payload.at("account_id").get<std::string>();
        char code[8];
        std::snprintf(code, sizeof code, "%06u", crypto::random_below(1'000'000));
        const auto now = s_.clock.now();
        // Overwriting the per-account record voids any earlier code.
        s_.store.put(key(collections::kOtps, account_id),
                     Json(OtpRecord{account_id, otp_digest(account_id, code), now, s_.config.otp_ttl.count(), false}));
        const auto minutes = s_.config.otp_ttl.count() / 60;
        s_.outbox.append({email, "Your password reset code",
                          "Your one-time password reset code is " + std::string(code) + ". It expires in " +
                              std::to_string(minutes) + " minutes and can be used once.",
                          now});
    }
    return {std::string(kResetAck)};
}

Acknowledgement Identity::redeem_otp(std::string_view email_raw, std::string_view code, std::string_view new_password) {
    check_password_strength(new_password, s_.config.min_password_length);
    const auto email = normalize_email(email_raw);
    const auto digest = digest_password(new_password, s_.config.password_iterations);
    const auto now = s_.clock.now();

    s_.store.transact([&](store::Txn& txn) {
        const auto index = txn.get(email_key(email));
        if (!index) throw Error(ErrorCode::OtpInvalid, "invalid code");
        const auto account_id = index->at("account_id").get<std::string>();
        auto otp = txn.get_as<OtpRecord>(key(collections::kOtps, account_id));
        if (!otp || !crypto::constant_time_equal(otp->code_digest, otp_digest(account_id, code))) {
            throw Error(ErrorCode::OtpInvalid, "invalid code");
        }
        if (otp->consumed) throw Error(ErrorCode::OtpConsumed, "code already used");
        if (now > otp->issued_at + Seconds{otp->ttl_seconds}) throw Error(ErrorCode::OtpExpired, "code expired");

        auto rec = detail::require_account(txn, account_id);
        rec.password_digest = digest;
        ++rec.session_epoch;
        detail::put_account(txn, rec);
        otp->consumed = true;
        txn.put(key(collections::kOtps, account_id), *otp);
    });
    return {std::string(kRedeemAck)};
}

UserAccount Identity::update_account(const Principal& caller, const ProfileChanges& changes,
                                     const std::optional<std::string>& old_password,
                                     const std::optional<std::string>& new_password) {
    std::optional<std::string> new_digest;
    if (new_password) {
        check_password_strength(*new_password, s_.config.min_password_length);
        new_digest = digest_password(*new_password, s_.config.password_iterations);
    }
    std::optional<std::string> new_email;
    if (changes.email) new_email = require_valid_email(*changes.email);

    return s_.store.transact([&](store::Txn& txn) {
        auto rec = detail::require_account(txn, caller.account_id);
        if (new_digest) {
            if (!old_password || !verify_password(*old_password, rec.password_digest)) {
                throw Error(ErrorCode::InvalidCredentials, "current password is incorrect");
            }
            rec.password_digest = *new_digest;
        }
        if (new_email && *new_email != rec.account.email) {
            if (txn.get(email_key(*new_email))) throw Error(ErrorCode::DuplicateEmail, "email already registered");
            txn.erase(email_key(rec.account.email));
            txn.put(email_key(*new_email), Json{{"account_id", rec.account.id}});
            rec.account.email = *new_email;
        }
        if (changes.first_name) rec.account.first_name = *changes.first_name;
        if (changes.last_name) rec.account.last_name = *changes.last_name;
        if (changes.city) rec.account.city = *changes.city;
        if (changes.country) rec.account.country = *changes.country;
        if (changes.contact_number) rec.account.contact_number = *changes.contact_number;
        detail::put_account(txn, rec);
        return rec.account;
    });
}

VaccinationRecord Identity::upload_vaccination_card(const Principal& caller, std::string_view front_image,
                                                    std::string_view back_image) {
    if (front_image.empty() || back_image.empty()) {
        throw Error(ErrorCode::MissingSide, "both sides of the vaccination card are required");
    }
    if (front_image.size() > s_.config.max_image_bytes || back_image.size() > s_.config.max_image_bytes) {
        throw Error(ErrorCode::ImageTooLarge,
                    "each side must be at most " + std::to_string(s_.config.max_image_bytes) + " bytes");
    }
    VaccinationRecord record{s_.blobs.put(front_image), s_.blobs.put(back_image), s_.clock.now()};
    s_.store.transact([&](store::Txn& txn) {
        auto rec = detail::require_account(txn, caller.account_id);
        rec.account.vaccination = record;
        detail::put_account(txn, rec);
    });
    return record;
}

Principal Identity::resolve(std::string_view token) const {
    if (token.empty()) throw Error(ErrorCode::InvalidToken, "missing token");
    const auto session = s_.store.get(session_key(token));
    if (!session) throw Error(ErrorCode::InvalidToken, "unknown session token");
    const auto rec = session->payload.get<SessionRecord>();
    if (s_.clock.now() >= rec.expires_at) throw Error(ErrorCode::InvalidToken, "session expired");
    const auto account = s_.store.get(key(collections::kAccounts, rec.account_id));
    if (!account || account->payload.at("session_epoch").get<std::uint64_t>() != rec.epoch) {
        throw Error(ErrorCode::InvalidToken, "session revoked");
    }
    return {rec.account_id};
}

void Identity::revoke(std::string_view token) {
    s_.store.transact([&](store::Txn& txn) { txn.erase(session_key(token)); });
}

UserAccount Identity::account(const std::string& account_id) const {
    const auto rec = s_.store.get(key(collections::kAccounts, account_id));
    if (!rec) throw Error(ErrorCode::UnknownAccount, "unknown account " + account_id);
    return rec->payload.get<AccountRecord>().account;
}

std::optional<UserAccount> Identity::find_by_email(std::string_view email) const {
    const auto index = s_.store.get(email_key(normalize_email(email)));
    if (!index) return std::nullopt;
    return account(index->payload.at("account_id").get<std::string>());
}

}  // namespace golib::identity
