#pragma once

#include <atomic>

#include "golib/time.hpp"

namespace golib {

class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() const = 0;
};

class SystemClock final : public Clock {
public:
    Timestamp now() const override;
};

/// Test clock. Starts at the given instant and only moves when told to.
class ManualClock final : public Clock {
public:
    explicit ManualClock(Timestamp start) : now_(start.time_since_epoch().count()) {}

    Timestamp now() const override { return Timestamp{Seconds{now_.load()}}; }
    void set(Timestamp ts) { now_.store(ts.time_since_epoch().count()); }
    void advance(Seconds by) { now_.fetch_add(by.count()); }

private:
    std::atomic<Seconds::rep> now_;
};

}  // namespace golib
