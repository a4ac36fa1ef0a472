#include <atomic>
#include <thread>

#include <benchmark/benchmark.h>

#include "world.hpp"

using namespace golib;

namespace {

/// One full contention round: capacity 10, 100 callers on N threads.
void BM_BookSeatContention(benchmark::State& state) {
    const auto threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        state.PauseTiming();
        testing::World w;
        const auto admin = w.admin();
        const auto event = w.event(admin, 10);
        std::vector<Principal> callers;
        for (int i = 0; i < 100; ++i) callers.push_back(w.reader());
        state.ResumeTiming();

        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (int i = next++; i < 100; i = next++) {
                    try {
                        w.p().scheduling.book_seat(callers[i], event.id);
                    } catch (const Error&) {
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_BookSeatContention)->Arg(1)->Arg(8)->Arg(16)->UseRealTime()->Unit(benchmark::kMillisecond);

void BM_ReservePayConfirm(benchmark::State& state) {
    testing::World w;
    const auto admin = w.admin();
    std::vector<Principal> readers;
    for (int i = 0; i < 64; ++i) readers.push_back(w.reader());
    std::size_t i = 0;
    Event event = w.event(admin, 64);
    for (auto _ : state) {
        if (i % readers.size() == 0 && i > 0) {
            state.PauseTiming();
            event = w.event(admin, 64);
            state.ResumeTiming();
        }
        w.paid_booking(readers[i % readers.size()], event.id);
        ++i;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ReservePayConfirm);

void BM_PasswordDigest(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(identity::digest_password("correct-horse", static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PasswordDigest)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
