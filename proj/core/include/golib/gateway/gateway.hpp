#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "golib/errors.hpp"
#include "golib/platform.hpp"
#include "golib/schema.hpp"

/**
 * Transport-independent HTTP/JSON surface.
 *
 * Every response body is an envelope: `{"data": ...}` on success and
 * `{"error": {"code", "message", "status", "fields"?}}` otherwise. List
 * routes return `{"data": {"items": [...], "next_cursor": ..., "total": n}}`
 * and accept `cursor` and `limit` (default 50, max 200) query parameters.
 *
 * Callers present `Authorization: Bearer <token>`. No header means Guest;
 * a header that does not resolve is rejected with 401 INVALID_TOKEN.
 */
namespace golib::gateway {

using Json = nlohmann::json;

struct CaseInsensitiveLess {
    bool operator()(const std::string& a, const std::string& b) const;
};
using Headers = std::map<std::string, std::string, CaseInsensitiveLess>;

struct Request {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    Headers headers;
    std::string body;
};

struct Response {
    int status = 200;
    Json body;
};

struct ApiError {
    std::string code;
    std::string message;
    int status = 500;
    std::vector<FieldError> fields;

    /// Parses an error envelope. Returns nullopt unless the body has exactly
    /// the envelope shape and `status` matches the given HTTP status.
    static std::optional<ApiError> parse(const Json& body, int http_status);
};

Json error_envelope(const ApiError& error);
ApiError to_api_error(const Error& error);

struct Caller {
    std::optional<Principal> principal;
    Role role = Role::Guest;
};

/// One row of the authorization matrix.
struct RouteSpec {
    std::string method;
    std::string pattern;  ///< e.g. "/v1/books/{id}/follow"
    std::set<Role> allowed;
};

/// The full route table. Every (role, route) pair not listed as allowed is
/// rejected before the handler runs: 401 for guests, 403 otherwise.
const std::vector<RouteSpec>& route_table();

inline constexpr std::size_t kDefaultPageSize = 50;
inline constexpr std::size_t kMaxPageSize = 200;

class Gateway {
public:
    explicit Gateway(Platform& platform);
    ~Gateway();

    Caller authenticate_request(const Headers& headers) const;
    Response dispatch(const Request& request);

    struct Context;
    using Handler = std::function<Response(Context&)>;

private:
    struct Route {
        RouteSpec spec;
        std::vector<std::string> segments;
        Handler handler;
    };
    void add(const std::string& method, const std::string& pattern, Handler handler);
    void install_routes();

    Platform& platform_;
    std::vector<Route> routes_;
};

}  // namespace golib::gateway
