#pragma once

#include <cstddef>

#include "golib/time.hpp"

namespace golib {

/// Tunables shared by every module. Defaults are the production values.
struct Config {
    Seconds otp_ttl{600};
    Seconds hold_ttl{900};
    Seconds session_ttl{7 * 24 * 3600};
    std::size_t min_password_length = 8;
    std::size_t max_image_bytes = 10u * 1024u * 1024u;
    /// PBKDF2 work factor for new digests. Existing digests carry their own.
    int password_iterations = 100'000;
    std::size_t max_message_chars = 4096;
};

}  // namespace golib
