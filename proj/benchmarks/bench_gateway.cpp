#include <benchmark/benchmark.h>

#include "golib/gateway/gateway.hpp"
#include "world.hpp"

using namespace golib;

namespace {

struct Fixture {
    testing::World w;
    gateway::Gateway gw{w.p()};
    std::string token;
    Fixture() {
        const auto admin = w.admin("root");
        for (int i = 0; i < 300; ++i) w.event(admin);
        w.reader("visitor");
        token = w.p().identity.authenticate("visitor@example.pk", "correct-horse-visitor").token;
    }
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

void BM_GuestListEvents(benchmark::State& state) {
    auto& f = fixture();
    gateway::Request request{"GET", "/v1/events", {{"limit", "50"}}, {}, {}};
    for (auto _ : state) benchmark::DoNotOptimize(f.gw.dispatch(request));
}
BENCHMARK(BM_GuestListEvents);

void BM_AuthenticatedMe(benchmark::State& state) {
    auto& f = fixture();
    gateway::Request request{"GET", "/v1/me", {}, {}, {}};
    request.headers["Authorization"] = "Bearer " + f.token;
    for (auto _ : state) benchmark::DoNotOptimize(f.gw.dispatch(request));
}
BENCHMARK(BM_AuthenticatedMe);

void BM_RejectedRoute(benchmark::State& state) {
    auto& f = fixture();
    gateway::Request request{"GET", "/v1/admin/ledger", {}, {}, {}};
    request.headers["Authorization"] = "Bearer " + f.token;
    for (auto _ : state) benchmark::DoNotOptimize(f.gw.dispatch(request));
}
BENCHMARK(BM_RejectedRoute);

}  // namespace
