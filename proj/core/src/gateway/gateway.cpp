#include "golib/gateway/gateway.hpp"

#include <algorithm>
#include <charconv>
#include <strings.h>

#include "gateway/context.hpp"
#include "golib/crypto.hpp"

namespace golib::gateway {

namespace {

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < path.size()) {
        if (path[i] == '/') {
            ++i;
            continue;
        }
        const auto end = path.find('/', i);
        const auto stop = end == std::string_view::npos ? path.size() : end;
        out.emplace_back(path.substr(i, stop - i));
        i = stop;
    }
    return out;
}

bool is_placeholder(const std::string& segment) {
    return segment.size() > 2 && segment.front() == '{' && segment.back() == '}';
}

std::optional<std::map<std::string, std::string>> match(const std::vector<std::string>& pattern,
                                                        const std::vector<std::string>& path) {
    if (pattern.size() != path.size()) return std::nullopt;
    std::map<std::string, std::string> params;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (is_placeholder(pattern[i])) {
            params[pattern[i].substr(1, pattern[i].size() - 2)] = path[i];
        } else if (pattern[i] != path[i]) {
            return std::nullopt;
        }
    }
    return params;
}

Response error_response(const ApiError& error) { return Response{error.status, error_envelope(error)}; }

Response error_response(ErrorCode code, std::string message, std::vector<FieldError> fields = {}) {
    return error_response(to_api_error(Error(code, std::move(message), std::move(fields))));
}

}  // namespace

bool CaseInsensitiveLess::operator()(const std::string& a, const std::string& b) const {
    return ::strcasecmp(a.c_str(), b.c_str()) < 0;
}

// --- errors ----------------------------------------------------------------

ApiError to_api_error(const Error& error) {
    const auto info = error_info(error.code());
    return ApiError{std::string(info.code), error.what(), info.status, error.fields()};
}

Json error_envelope(const ApiError& error) {
    Json body{{"code", error.code}, {"message", error.message}, {"status", error.status}};
    if (!error.fields.empty()) {
        Json fields = Json::array();
        for (const auto& f : error.fields) fields.push_back({{"field", f.field}, {"message", f.message}});
        body["fields"] = std::move(fields);
    }
    if (error.code == error_info(ErrorCode::AuthRequired).code) body["signup"] = "/v1/auth/register";
    return Json{{"error", std::move(body)}};
}

std::optional<ApiError> ApiError::parse(const Json& body, int http_status) {
    if (!body.is_object() || body.size() != 1 || !body.contains("error")) return std::nullopt;
    const auto& e = body["error"];
    if (!e.is_object()) return std::nullopt;
    if (!e.contains("code") || !e["code"].is_string()) return std::nullopt;
    if (!e.contains("message") || !e["message"].is_string()) return std::nullopt;
    if (!e.contains("status") || !e["status"].is_number_integer()) return std::nullopt;
    ApiError out{e["code"].get<std::string>(), e["message"].get<std::string>(), e["status"].get<int>(), {}};
    if (out.status != http_status || out.code.empty()) return std::nullopt;
    if (e.contains("fields")) {
        if (!e["fields"].is_array()) return std::nullopt;
        for (const auto& f : e["fields"]) {
            if (!f.is_object() || !f.contains("field") || !f.contains("message")) return std::nullopt;
            out.fields.push_back({f["field"].get<std::string>(), f["message"].get<std::string>()});
        }
    }
    return out;
}

// --- request helpers -------------------------------------------------------

const Json* BodyReader::find(const char* name, bool required) {
    if (!doc_.contains(name) || doc_[name].is_null()) {
        if (required) reject(name, "is required");
        return nullptr;
    }
    return &doc_[name];
}

std::string BodyReader::text(const char* name) {
    const auto* v = find(name, true);
    if (!v) return {};
    if (!v->is_string()) {
        reject(name, "must be a string");
        return {};
    }
    return v->get<std::string>();
}

std::optional<std::string> BodyReader::optional_text(const char* name) {
    const auto* v = find(name, false);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
        reject(name, "must be a string");
        return std::nullopt;
    }
    return v->get<std::string>();
}

std::int64_t BodyReader::integer(const char* name, std::optional<std::int64_t> fallback) {
    const auto* v = find(name, !fallback);
    if (!v) return fallback.value_or(0);
    if (!v->is_number_integer()) {
        reject(name, "must be an integer");
        return 0;
    }
    return v->get<std::int64_t>();
}

double BodyReader::number(const char* name) {
    const auto* v = find(name, true);
    if (!v) return 0;
    if (!v->is_number()) {
        reject(name, "must be a number");
        return 0;
    }
    return v->get<double>();
}

std::optional<double> BodyReader::optional_number(const char* name) {
    const auto* v = find(name, false);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
        reject(name, "must be a number");
        return std::nullopt;
    }
    return v->get<double>();
}

Timestamp BodyReader::timestamp(const char* name) {
    const auto raw = text(name);
    if (raw.empty()) return {};
    try {
        return parse_rfc3339(raw);
    } catch (const Error&) {
        reject(name, "must be an RFC 3339 timestamp");
        return {};
    }
}

std::string BodyReader::bytes(const char* name) {
    const auto* v = find(name, false);
    if (!v) return {};
    if (!v->is_string()) {
        reject(name, "must be a base64 string");
        return {};
    }
    auto decoded = crypto::base64_decode(v->get_ref<const std::string&>());
    if (!decoded) {
        reject(name, "must be a base64 string");
        return {};
    }
    return std::move(*decoded);
}

BodyReader BodyReader::object(const char* name) {
    static const Json empty = Json::object();
    const auto* v = find(name, true);
    if (v && !v->is_object()) reject(name, "must be an object");
    return BodyReader(v && v->is_object() ? *v : empty, prefix_ + name + ".", errors_);
}

const Principal& Gateway::Context::principal() const {
    if (!caller.principal) throw Error(ErrorCode::AuthRequired, "sign up or sign in to continue");
    return *caller.principal;
}

std::optional<std::string> Gateway::Context::query(const std::string& name) const {
    const auto it = request.query.find(name);
    if (it == request.query.end()) return std::nullopt;
    return it->second;
}

const Json& Gateway::Context::json() {
    if (!parsed_body) {
        Json doc;
        try {
            doc = request.body.empty() ? Json::object() : Json::parse(request.body);
        } catch (const Json::parse_error&) {
            throw Error(ErrorCode::ValidationFailed, "request body is not valid JSON",
                        {{"body", "malformed JSON"}});
        }
        if (!doc.is_object()) {
            throw Error(ErrorCode::ValidationFailed, "request body must be a JSON object",
                        {{"body", "must be an object"}});
        }
        parsed_body = std::move(doc);
    }
    return *parsed_body;
}

void Gateway::Context::validate() const {
    if (!errors.empty()) throw Error(ErrorCode::ValidationFailed, "request body failed validation", errors);
}

Response ok(Json data, int status) { return Response{status, Json{{"data", std::move(data)}}}; }

std::string encode_cursor(std::string_view raw) { return crypto::to_hex(raw); }

std::optional<std::string> decode_cursor(std::string_view cursor) {
    if (cursor.empty() || cursor.size() % 2 != 0) return std::nullopt;
    std::string out;
    for (std::size_t i = 0; i < cursor.size(); i += 2) {
        unsigned value = 0;
        const auto [ptr, ec] = std::from_chars(cursor.data() + i, cursor.data() + i + 2, value, 16);
        if (ec != std::errc{} || ptr != cursor.data() + i + 2) return std::nullopt;
        out.push_back(static_cast<char>(value));
    }
    return out;
}

std::size_t page_size(const Gateway::Context& ctx) {
    const auto raw = ctx.query("limit");
    if (!raw) return kDefaultPageSize;
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(raw->data(), raw->data() + raw->size(), value);
    if (ec != std::errc{} || ptr != raw->data() + raw->size() || value == 0 || value > kMaxPageSize) {
        throw Error(ErrorCode::ValidationFailed, "invalid limit",
                    {{"limit", "must be an integer between 1 and " + std::to_string(kMaxPageSize)}});
    }
    return value;
}

Response paged(const Gateway::Context& ctx, const Json& items) {
    const auto limit = page_size(ctx);
    std::size_t offset = 0;
    if (const auto cursor = ctx.query("cursor")) {
        const auto raw = decode_cursor(*cursor);
        std::size_t value = 0;
        bool valid = raw && raw->starts_with("o:");
        if (valid) {
            const auto digits = std::string_view(*raw).substr(2);
            const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
            valid = !digits.empty() && ec == std::errc{} && ptr == digits.data() + digits.size();
        }
        if (!valid) throw Error(ErrorCode::ValidationFailed, "invalid cursor", {{"cursor", "not recognized"}});
        offset = value;
    }
    Json page = Json::array();
    const auto total = items.size();
    for (std::size_t i = offset; i < total && i < offset + limit; ++i) page.push_back(items[i]);
    Json data{{"items", std::move(page)}, {"total", total}};
    if (offset + limit < total) data["next_cursor"] = encode_cursor("o:" + std::to_string(offset + limit));
    return ok(std::move(data));
}

// --- dispatcher ------------------------------------------------------------

Gateway::Gateway(Platform& platform) : platform_(platform) { install_routes(); }

Gateway::~Gateway() = default;

void Gateway::add(const std::string& method, const std::string& pattern, Handler handler) {
    const auto& table = route_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const RouteSpec& spec) {
        return spec.method == method && spec.pattern == pattern;
    });
    if (it == table.end()) throw std::logic_error("route missing from the authorization table: " + method + " " + pattern);
    routes_.push_back(Route{*it, split_path(pattern), std::move(handler)});
}

Caller Gateway::authenticate_request(const Headers& headers) const {
    const auto it = headers.find("Authorization");
    if (it == headers.end()) return Caller{};
    constexpr std::string_view scheme = "Bearer ";
    const std::string_view value = it->second;
    if (value.size() <= scheme.size() || ::strncasecmp(value.data(), scheme.data(), scheme.size()) != 0) {
        throw Error(ErrorCode::InvalidToken, "expected a bearer token");
    }
    const auto principal = platform_.identity.resolve(value.substr(scheme.size()));
    Caller caller;
    try {
        caller.role = platform_.identity.account(principal.account_id).role;
    } catch (const Error&) {
        throw Error(ErrorCode::InvalidToken, "session no longer valid");
    }
    caller.principal = principal;
    return caller;
}

Response Gateway::dispatch(const Request& request) {
    try {
        const auto segments = split_path(request.path);
        const Route* route = nullptr;
        std::map<std::string, std::string> params;
        std::vector<std::string> allowed_methods;
        for (const auto& candidate : routes_) {
            auto bound = match(candidate.segments, segments);
            if (!bound) continue;
            if (candidate.spec.method == request.method) {
                route = &candidate;
                params = std::move(*bound);
                break;
            }
            allowed_methods.push_back(candidate.spec.method);
        }
        if (!route) {
            if (allowed_methods.empty()) return error_response(ErrorCode::UnknownRoute, "no route for " + request.path);
            std::string allow;
            for (const auto& m : allowed_methods) allow += (allow.empty() ? "" : ", ") + m;
            return error_response(ErrorCode::MethodNotAllowed, request.method + " not allowed; use " + allow);
        }

        Context ctx{platform_, request, authenticate_request(request.headers), std::nullopt, std::move(params), {}, std::nullopt};
        if (ctx.caller.principal) {
            const std::string& header = request.headers.find("Authorization")->second;
            ctx.token = header.substr(7);
        }
        if (!route->spec.allowed.contains(ctx.caller.role)) {
            if (ctx.caller.role == Role::Guest) {
                return error_response(ErrorCode::AuthRequired, "sign up or sign in to continue");
            }
            return error_response(ErrorCode::NotAuthorized,
                                  std::string(to_string(ctx.caller.role)) + " accounts cannot do this");
        }
        return route->handler(ctx);
    } catch (const Error& e) {
        return error_response(to_api_error(e));
    } catch (const Json::exception& e) {
        return error_response(ErrorCode::ValidationFailed, std::string("malformed request: ") + e.what());
    } catch (const std::exception& e) {
        return error_response(ApiError{"INTERNAL", e.what(), 500, {}});
    }
}

}  // namespace golib::gateway
