#include <benchmark/benchmark.h>

#include "golib/store/store.hpp"
#include "world.hpp"

using namespace golib;

namespace {

void BM_CommitInMemory(benchmark::State& state) {
    store::Store s;
    std::int64_t i = 0;
    for (auto _ : state) {
        s.put({"c", "k" + std::to_string(i % 1000)}, store::Json{{"i", i}});
        ++i;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CommitInMemory);

void BM_CommitJournaled(benchmark::State& state) {
    testing::TempDir dir;
    store::Options options;
    options.dir = dir.path();
    options.fsync = state.range(0) != 0;
    store::Store s(options);
    std::int64_t i = 0;
    for (auto _ : state) {
        s.put({"c", "k" + std::to_string(i % 1000)}, store::Json{{"i", i}, {"pad", std::string(200, 'x')}});
        ++i;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CommitJournaled)->Arg(0)->Arg(1)->ArgName("fsync");

void BM_ContendedCounter(benchmark::State& state) {
    static store::Store* shared = nullptr;
    if (state.thread_index() == 0) shared = new store::Store;
    for (auto _ : state) {
        shared->run([](store::Txn& txn) {
            const auto cur = txn.get({"c", "counter"});
            txn.put({"c", "counter"}, store::Json{{"n", cur ? cur->at("n").get<int>() + 1 : 1}});
        });
    }
    state.SetItemsProcessed(state.iterations());
    if (state.thread_index() == 0) {
        delete shared;
        shared = nullptr;
    }
}
BENCHMARK(BM_ContendedCounter)->ThreadRange(1, 8)->UseRealTime();

void BM_Recovery(benchmark::State& state) {
    testing::TempDir dir;
    store::Options options;
    options.dir = dir.path();
    options.snapshot_every = 0;
    {
        store::Store s(options);
        for (std::int64_t i = 0; i < state.range(0); ++i) s.put({"c", "k" + std::to_string(i)}, store::Json{{"i", i}});
        // Leave the journal unsnapshotted: copy it aside before close checkpoints.
        std::filesystem::create_directories(dir.path() / "copy");
        std::filesystem::copy_file(dir.path() / "journal.log", dir.path() / "copy" / "journal.log");
    }
    for (auto _ : state) {
        state.PauseTiming();
        std::filesystem::remove_all(dir.path() / "run");
        std::filesystem::copy(dir.path() / "copy", dir.path() / "run");
        store::Options reopen;
        reopen.dir = dir.path() / "run";
        reopen.snapshot_every = 0;
        state.ResumeTiming();
        store::Store s(reopen);
        benchmark::DoNotOptimize(s.size());
        state.PauseTiming();
        s.close();
        state.ResumeTiming();
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Recovery)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
