#pragma once

#include <optional>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

// Thin wrappers over OpenSSL and zlib.
namespace golib::crypto {

std::string random_bytes(std::size_t n);
std::string random_hex(std::size_t n_bytes);
/// Uniform in [0, bound) using rejection sampling over CSPRNG output.
std::uint32_t random_below(std::uint32_t bound);

std::string to_hex(std::string_view bytes);
std::string sha256_hex(std::string_view data);

/// PBKDF2-HMAC-SHA256, 32-byte output, hex encoded.
std::string pbkdf2_sha256_hex(std::string_view password, std::string_view salt, int iterations);

bool constant_time_equal(std::string_view a, std::string_view b);

std::uint32_t crc32(std::string_view data);

std::string base64_encode(std::string_view bytes);
/// Standard alphabet with padding. Returns nullopt for malformed input.
std::optional<std::string> base64_decode(std::string_view text);

}  // namespace golib::crypto
