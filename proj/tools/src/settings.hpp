#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "golib/platform.hpp"

namespace golib::cli {

/// Process-wide settings shared by every subcommand. Each field can also be
/// set through the environment (see bind_settings in main.cpp).
struct Settings {
    std::filesystem::path data_dir = "golib-data";
    std::optional<long> otp_ttl_seconds;
    std::optional<long> hold_ttl_seconds;
    /// Freezes the clock at this RFC 3339 instant.
    std::optional<std::string> clock;
};

/// Builds platform options from settings. Throws std::invalid_argument on
/// a non-positive TTL or an unparseable clock.
PlatformOptions platform_options(const Settings& settings);

}  // namespace golib::cli
