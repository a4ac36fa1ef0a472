#pragma once

// Request-scoped helpers shared by the dispatcher and the route handlers.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "golib/gateway/gateway.hpp"
#include "golib/time.hpp"

namespace golib::gateway {

/// Reads typed fields out of a JSON object, collecting one FieldError per
/// problem so a single 422 can report all of them.
class BodyReader {
public:
    BodyReader(const Json& doc, std::string prefix, std::vector<FieldError>& errors)
        : doc_(doc), prefix_(std::move(prefix)), errors_(errors) {}

    std::string text(const char* name);
    std::optional<std::string> optional_text(const char* name);
    std::int64_t integer(const char* name, std::optional<std::int64_t> fallback = std::nullopt);
    double number(const char* name);
    std::optional<double> optional_number(const char* name);
    Timestamp timestamp(const char* name);
    /// Base64 field, decoded.
    std::string bytes(const char* name);
    BodyReader object(const char* name);

    void reject(const char* name, std::string message) { errors_.push_back({prefix_ + name, std::move(message)}); }

private:
    const Json* find(const char* name, bool required);

    const Json& doc_;
    std::string prefix_;
    std::vector<FieldError>& errors_;
};

struct Gateway::Context {
    Platform& platform;
    const Request& request;
    Caller caller;
    std::optional<std::string> token;
    std::map<std::string, std::string> params;

    const Principal& principal() const;
    const std::string& param(const std::string& name) const { return params.at(name); }
    std::optional<std::string> query(const std::string& name) const;

    /// Parses the body as a JSON object; 422 otherwise.
    const Json& json();
    BodyReader reader() { return BodyReader(json(), "", errors); }
    /// Throws 422 ValidationFailed when any field error was recorded.
    void validate() const;

    std::vector<FieldError> errors;
    std::optional<Json> parsed_body;
};

Response ok(Json data, int status = 200);

/// Offset pagination over a fully materialized, already ordered list.
Response paged(const Gateway::Context& ctx, const Json& items);

/// Page size from `limit` (default 50, max 200).
std::size_t page_size(const Gateway::Context& ctx);

std::string encode_cursor(std::string_view raw);
std::optional<std::string> decode_cursor(std::string_view cursor);

}  // namespace golib::gateway
