#include <random>

#include <benchmark/benchmark.h>

#include "world.hpp"

using namespace golib;

namespace {

/// A world with `events` events and `books` book profiles written straight
/// into the store.
testing::World& catalogue(std::size_t events, std::size_t books) {
    static std::map<std::pair<std::size_t, std::size_t>, std::unique_ptr<testing::World>> cache;
    auto& slot = cache[{events, books}];
    if (slot) return *slot;
    slot = std::make_unique<testing::World>();
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> lat(24.0, 27.0), lon(66.5, 70.0);
    const auto now = slot->clock->now();
    slot->p().store().run([&](store::Txn& txn) {
        for (std::size_t i = 0; i < books; ++i) {
            BookProfile p;
            p.account_id = "acct_" + std::to_string(100000 + i);
            p.display_name = "Book " + std::to_string(i);
            p.profession = i % 2 ? "Psychologist" : "Chef";
            p.review_count = static_cast<std::int64_t>(rng() % 20);
            p.rating_sum = p.review_count * (1 + static_cast<std::int64_t>(rng() % 5));
            txn.put(key(collections::kBooks, p.account_id), Json(p));
        }
        for (std::size_t i = 0; i < events; ++i) {
            Event e;
            e.id = "evt_" + std::to_string(100000 + i);
            e.title = "Event " + std::to_string(i);
            e.venue = {"Venue", "", lat(rng), lon(rng)};
            e.starts_at = now + Seconds{static_cast<long>(rng() % 1'000'000)};
            e.ends_at = e.starts_at + Seconds{3600};
            e.capacity = 10;
            txn.put(key(collections::kEvents, e.id), Json(e));
        }
    });
    return *slot;
}

void BM_SearchEvents(benchmark::State& state) {
    auto& w = catalogue(static_cast<std::size_t>(state.range(0)), 100);
    scheduling::EventQuery query;
    query.text = "7";
    for (auto _ : state) benchmark::DoNotOptimize(w.p().scheduling.search_events(query));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SearchEvents)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_EventsNear(benchmark::State& state) {
    auto& w = catalogue(static_cast<std::size_t>(state.range(0)), 100);
    for (auto _ : state) benchmark::DoNotOptimize(w.p().scheduling.events_near(25.4, 68.4, 50));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EventsNear)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

void BM_SearchBooks(benchmark::State& state) {
    auto& w = catalogue(256, static_cast<std::size_t>(state.range(0)));
    directory::BookQuery query;
    query.profession = "psych";
    for (auto _ : state) benchmark::DoNotOptimize(w.p().directory.search_books(query));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SearchBooks)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

}  // namespace
