#include "golib/clock.hpp"

namespace golib {

Timestamp SystemClock::now() const {
    return std::chrono::time_point_cast<Seconds>(std::chrono::system_clock::now());
}

}  // namespace golib
