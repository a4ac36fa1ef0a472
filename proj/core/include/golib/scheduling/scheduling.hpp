#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "golib/schema.hpp"
#include "golib/services.hpp"

namespace golib::scheduling {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance on a sphere of radius kEarthRadiusKm.
/// Throws CoordinateOutOfRange for latitudes outside [-90, 90] or
/// longitudes outside [-180, 180].
double haversine_km(double lat1, double lon1, double lat2, double lon2);

void check_coordinates(double latitude, double longitude);

/// Half-open intervals: [a0, a1) and [b0, b1) overlap iff a0 < b1 && b0 < a1.
inline bool overlaps(Timestamp a0, Timestamp a1, Timestamp b0, Timestamp b1) { return a0 < b1 && b0 < a1; }

struct EventDraft {
    EventKind kind = EventKind::PublicEvent;
    std::string title;
    Venue venue;
    Timestamp starts_at;
    Timestamp ends_at;
    std::int64_t capacity = 1;  ///< ignored for private sessions (always 1)
    std::int64_t price_minor = 0;
};

enum class Category { All, Events, PrivateSession };
std::optional<Category> parse_category(std::string_view text);

struct EventQuery {
    Category category = Category::All;
    std::optional<std::string> text;  ///< title or host book name, case-insensitive
    std::optional<Timestamp> from;    ///< defaults to now
};

struct NearbyEvent {
    Event event;
    double distance_km = 0;
};

struct CalendarMonth {
    int year = 0;
    unsigned month = 0;
    /// Days of the month (1-based) that have at least one event starting.
    std::vector<unsigned> highlighted;
    std::map<unsigned, std::vector<Event>> events_by_day;
    /// For a Book caller, days touched by one of its own availability slots.
    std::vector<unsigned> availability_days;
};

/// Search order for events: starts_at ascending, ties by id.
bool event_precedes(const Event& a, const Event& b);

class Scheduling {
public:
    explicit Scheduling(Services services) : s_(services) {}

    Event create_event(const Principal& caller, const EventDraft& draft);
    Event event(const std::string& event_id) const;

    AvailabilitySlot post_availability(const Principal& caller, Timestamp starts_at, Timestamp ends_at);
    std::vector<AvailabilitySlot> slots(const std::string& book_id) const;

    std::vector<Event> search_events(const EventQuery& query) const;
    std::vector<NearbyEvent> events_near(double latitude, double longitude, double radius_km) const;

    /// Reserves one seat. Seats whose hold lapsed are reclaimed before the
    /// capacity check, all inside the event's inventory transaction.
    Booking book_seat(const Principal& caller, const std::string& event_id);
    /// Releases the caller's booking; a confirmed booking is refunded first.
    Booking cancel_booking(const Principal& caller, const std::string& booking_id);

    Booking booking(const std::string& booking_id) const;
    std::vector<Booking> bookings_of(const Principal& caller) const;
    std::vector<Booking> bookings_for_event(const std::string& event_id) const;
    /// Seats currently held (Reserved or Confirmed) for an event.
    std::int64_t seats_taken(const std::string& event_id) const;

    CalendarMonth calendar_month(const std::optional<Principal>& caller, int year, unsigned month) const;

    /// Sweeps every event for lapsed holds. Returns the number released.
    std::size_t release_expired_holds();

private:
    Services s_;
};

}  // namespace golib::scheduling
