#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "golib/gateway/gateway.hpp"

namespace httplib {
struct Request;
struct Response;
}  // namespace httplib

namespace golib::cli {

/// Converts between httplib's types and the gateway's transport-free ones.
gateway::Request to_gateway(const httplib::Request& in);
void from_gateway(const gateway::Response& in, httplib::Response& out);

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  ///< 0 picks a free port
    /// How often lapsed seat holds are swept; zero disables the sweeper.
    std::chrono::seconds sweep_interval{30};
    bool access_log = true;
};

/// The gateway behind an HTTP listener, plus the periodic hold sweeper.
class HttpServer {
public:
    HttpServer(Platform& platform, ServeOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the listening socket and returns the port. Throws
    /// std::runtime_error when the address is unavailable.
    int bind();
    /// Serves until stop() is called from another thread.
    void run();
    /// Safe to call from any thread, before or during run().
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Serves until SIGINT or SIGTERM.
void serve(Platform& platform, const ServeOptions& options);

}  // namespace golib::cli
