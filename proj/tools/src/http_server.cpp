#include "http_server.hpp"

#include <atomic>
#include <condition_variable>
#include <csignal>
#include <iostream>
#include <mutex>
#include <pthread.h>
#include <stdexcept>
#include <thread>

#include "httplib.h"

namespace golib::cli {

gateway::Request to_gateway(const httplib::Request& in) {
    gateway::Request out;
    out.method = in.method;
    out.path = in.path;
    for (const auto& [name, value] : in.params) out.query.emplace(name, value);
    for (const auto& [name, value] : in.headers) out.headers.emplace(name, value);
    out.body = in.body;
    return out;
}

void from_gateway(const gateway::Response& in, httplib::Response& out) {
    out.status = in.status;
    out.set_content(in.body.dump(), "application/json");
}

struct HttpServer::Impl {
    Platform& platform;
    ServeOptions options;
    gateway::Gateway gateway{platform};
    httplib::Server server;
    std::mutex mu;
    std::condition_variable cv;
    bool stopping = false;
    std::thread sweeper;

    Impl(Platform& p, ServeOptions o) : platform(p), options(std::move(o)) {
        auto handle = [this](const httplib::Request& req, httplib::Response& res) {
            from_gateway(gateway.dispatch(to_gateway(req)), res);
        };
        const std::string any = R"(/.*)";
        server.Get(any, handle);
        server.Post(any, handle);
        server.Put(any, handle);
        server.Patch(any, handle);
        server.Delete(any, handle);
        server.Options(any, handle);
        if (options.access_log) {
            server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
                std::clog << req.method << ' ' << req.path << " -> " << res.status << '\n';
            });
        }
    }

    void sweep_until_stopped() {
        std::unique_lock lock(mu);
        while (!cv.wait_for(lock, options.sweep_interval, [&] { return stopping; })) {
            lock.unlock();
            try {
                if (const auto n = platform.scheduling.release_expired_holds(); n > 0) {
                    std::clog << "released " << n << " lapsed hold(s)\n";
                }
            } catch (const std::exception& e) {
                std::clog << "hold sweep failed: " << e.what() << '\n';
            }
            lock.lock();
        }
    }
};

HttpServer::HttpServer(Platform& platform, ServeOptions options)
    : impl_(std::make_unique<Impl>(platform, std::move(options))) {}

HttpServer::~HttpServer() {
    stop();
    if (impl_->sweeper.joinable()) impl_->sweeper.join();
}

int HttpServer::bind() {
    auto& o = impl_->options;
    const int port = o.port == 0 ? impl_->server.bind_to_any_port(o.host) : o.port;
    if (port <= 0 || (o.port != 0 && !impl_->server.bind_to_port(o.host, o.port))) {
        throw std::runtime_error("cannot listen on " + o.host + ":" + std::to_string(o.port));
    }
    o.port = port;
    return port;
}

void HttpServer::run() {
    if (impl_->options.sweep_interval.count() > 0 && !impl_->sweeper.joinable()) {
        impl_->sweeper = std::thread([this] { impl_->sweep_until_stopped(); });
    }
    {
        std::lock_guard lock(impl_->mu);
        if (impl_->stopping) return;
    }
    impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    {
        std::lock_guard lock(impl_->mu);
        impl_->stopping = true;
    }
    impl_->cv.notify_all();
    impl_->server.stop();
}

namespace {

/// Runs `on_signal` on SIGINT/SIGTERM. The signals are blocked in the
/// calling thread (and threads it starts) and collected by a waiter.
class SignalStop {
public:
    explicit SignalStop(std::function<void()> on_signal) {
        sigemptyset(&set_);
        sigaddset(&set_, SIGINT);
        sigaddset(&set_, SIGTERM);
        pthread_sigmask(SIG_BLOCK, &set_, nullptr);
        waiter_ = std::thread([this, on_signal = std::move(on_signal)] {
            int sig = 0;
            sigwait(&set_, &sig);
            if (!released_) on_signal();
        });
    }
    ~SignalStop() {
        released_ = true;
        pthread_kill(waiter_.native_handle(), SIGTERM);
        waiter_.join();
        pthread_sigmask(SIG_UNBLOCK, &set_, nullptr);
    }

private:
    sigset_t set_{};
    std::atomic<bool> released_{false};
    std::thread waiter_;
};

}  // namespace

void serve(Platform& platform, const ServeOptions& options) {
    HttpServer server(platform, options);
    SignalStop stop_on_signal([&] { server.stop(); });
    const int port = server.bind();
    std::clog << "golib listening on http://" << options.host << ':' << port << '\n';
    server.run();
    std::clog << "golib stopped\n";
}

}  // namespace golib::cli
