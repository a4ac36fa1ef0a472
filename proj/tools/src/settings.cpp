#include "settings.hpp"

#include <stdexcept>

#include "golib/clock.hpp"
#include "golib/errors.hpp"

namespace golib::cli {

namespace {

Seconds positive_seconds(long value, const char* what) {
    if (value <= 0) throw std::invalid_argument(std::string(what) + " must be a positive number of seconds");
    return Seconds{value};
}

}  // namespace

PlatformOptions platform_options(const Settings& settings) {
    PlatformOptions options;
    options.data_dir = settings.data_dir;
    if (settings.otp_ttl_seconds) options.config.otp_ttl = positive_seconds(*settings.otp_ttl_seconds, "OTP TTL");
    if (settings.hold_ttl_seconds) options.config.hold_ttl = positive_seconds(*settings.hold_ttl_seconds, "hold TTL");
    if (settings.clock) {
        try {
            options.clock = std::make_shared<ManualClock>(parse_rfc3339(*settings.clock));
        } catch (const Error&) {
            throw std::invalid_argument("clock must be an RFC 3339 timestamp, got '" + *settings.clock + "'");
        }
    }
    return options;
}

}  // namespace golib::cli
