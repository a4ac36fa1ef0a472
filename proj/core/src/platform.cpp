#include "golib/platform.hpp"

namespace golib {

namespace {

store::Options with_dir(store::Options options, const std::optional<std::filesystem::path>& dir) {
    options.dir = dir;
    return options;
}

std::optional<std::filesystem::path> child(const std::optional<std::filesystem::path>& dir, const char* name) {
    if (!dir) return std::nullopt;
    return *dir / name;
}

}  // namespace

Platform::Platform(PlatformOptions options)
    : config_(options.config),
      clock_(options.clock ? options.clock : std::make_shared<SystemClock>()),
      store_(with_dir(std::move(options.store), options.data_dir)),
      outbox_(child(options.data_dir, "outbox.jsonl")),
      blobs_(child(options.data_dir, "blobs")),
      identity(services()),
      directory(services()),
      scheduling(services()),
      payments(services()),
      comms(services()) {}

}  // namespace golib
